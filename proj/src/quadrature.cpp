#include "triphase/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace triphase {

namespace {

// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on P_n.
void gaussLegendre01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    // initial guess on [-1,1]
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = 0.5 * (t + 1.0);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // already halved for [0,1]
  }
}

QuadRule buildCollapsed(int n) {
  std::vector<double> gx, gw;
  gaussLegendre01(n, gx, gw);
  QuadRule rule;
  rule.points.reserve(static_cast<size_t>(n) * n);
  // Duffy map (xi, eta) -> (l2, l3) = (xi, eta (1-xi)), Jacobian (1-xi).
  // Relative weights are normalized to sum to one (reference area 1/2
  // cancels against the factor 2).
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double xi = gx[i], eta = gx[j];
      const double l2 = xi;
      const double l3 = eta * (1.0 - xi);
      const double l1 = 1.0 - l2 - l3;
      rule.points.push_back({l1, l2, l3, 2.0 * gw[i] * gw[j] * (1.0 - xi)});
    }
  }
  return rule;
}

}  // namespace

const QuadRule& midEdgeRule() {
  static const QuadRule rule = [] {
    QuadRule r;
    const double w = 1.0 / 3.0;
    r.points = {{0.5, 0.5, 0.0, w}, {0.0, 0.5, 0.5, w}, {0.5, 0.0, 0.5, w}};
    return r;
  }();
  return rule;
}

const QuadRule& collapsedGaussRule(int n) {
  if (n < 1 || n > 16) throw std::invalid_argument("collapsedGaussRule: n out of range");
  static std::map<int, QuadRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, buildCollapsed(n)).first;
  return it->second;
}

const QuadRule& potentialRule() { return collapsedGaussRule(4); }
const QuadRule& flowRule() { return collapsedGaussRule(5); }
const QuadRule& projectionRule() { return collapsedGaussRule(6); }

}  // namespace triphase
