#include "triphase/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace triphase {

std::string benchmarkName(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::Lens: return "lens";
    case BenchmarkId::TwoBubbles: return "two_bubbles";
    case BenchmarkId::Spinodal2: return "spinodal2";
    case BenchmarkId::Spinodal4: return "spinodal4";
    case BenchmarkId::BubblesFlow: return "bubbles_flow";
    case BenchmarkId::ConvergenceIc: return "convergence_ic";
  }
  return "?";
}

std::vector<BenchmarkId> benchmarkCatalog() {
  return {BenchmarkId::Lens,        BenchmarkId::TwoBubbles, BenchmarkId::Spinodal2,
          BenchmarkId::Spinodal4,   BenchmarkId::BubblesFlow, BenchmarkId::ConvergenceIc};
}

namespace {

int editDistance(const std::string& a, const std::string& b) {
  std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1));
  for (size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i)
    for (size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return d[a.size()][b.size()];
}

}  // namespace

BenchmarkId benchmarkFromName(const std::string& name) {
  int best = 1 << 20;
  BenchmarkId bestId = BenchmarkId::Lens;
  for (BenchmarkId id : benchmarkCatalog()) {
    const std::string n = benchmarkName(id);
    if (n == name) return id;
    const int d = editDistance(n, name);
    if (d < best) {
      best = d;
      bestId = id;
    }
  }
  throw ParameterError("unknown benchmark '" + name + "' (did you mean '" +
                        benchmarkName(bestId) + "'?)");
}

std::vector<std::function<double(double, double)>> analyticIc(BenchmarkId id, double epsilon) {
  const double e = epsilon;
  switch (id) {
    case BenchmarkId::Lens: {
      auto phi1 = [e](double x, double y) {
        const double r = std::sqrt(x * x + y * y);
        return 0.5 * (1.0 + std::tanh(2.0 / e * std::min(r - 0.1, y)));
      };
      auto phi2 = [e](double x, double y) {
        const double r = std::sqrt(x * x + y * y);
        return 0.5 * (1.0 - std::tanh(2.0 / e * std::max(-r + 0.1, y)));
      };
      auto phi3 = [phi1, phi2](double x, double y) {
        return 1.0 - phi1(x, y) - phi2(x, y);
      };
      return {phi1, phi2, phi3};
    }
    case BenchmarkId::TwoBubbles:
    case BenchmarkId::BubblesFlow: {
      auto ball = [e](double cx) {
        return [e, cx](double x, double y) {
          const double r = std::sqrt((x - cx) * (x - cx) + y * y);
          return 0.5 - 0.5 * std::tanh(2.0 / e * (r - 0.035));
        };
      };
      auto phi1 = ball(0.035);
      auto phi2 = ball(-0.035);
      auto phi3 = [phi1, phi2](double x, double y) {
        return 1.0 - phi1(x, y) - phi2(x, y);
      };
      return {phi1, phi2, phi3};
    }
    case BenchmarkId::ConvergenceIc: {
      auto phi1 = [](double x, double y) {
        return 0.3 * std::sin(M_PI * x) * std::cos(M_PI * (y - 0.5));
      };
      auto phi2 = [](double x, double y) {
        return 0.15 + 0.15 * std::sin(2.0 * M_PI * x) * std::cos(M_PI * (2.0 * y - 0.5));
      };
      auto phi3 = [phi1, phi2](double x, double y) {
        return 1.0 - phi1(x, y) - phi2(x, y);
      };
      return {phi1, phi2, phi3};
    }
    default:
      throw ParameterError("benchmark '" + benchmarkName(id) +
                            "' uses random nodal initial data");
  }
}

std::vector<NodalField> randomIc(BenchmarkId id, const Mesh& mesh, std::uint64_t seed) {
  const int nRandom = id == BenchmarkId::Spinodal4 ? 3 : 2;
  const double base = id == BenchmarkId::Spinodal4 ? 0.25 : 0.33;
  if (id != BenchmarkId::Spinodal2 && id != BenchmarkId::Spinodal4)
    throw ParameterError("benchmark '" + benchmarkName(id) + "' is not random");

  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
  };

  const int nv = mesh.numVertices();
  std::vector<NodalField> phi(nRandom + 1, NodalField(nv, 0.0));
  for (int i = 0; i < nRandom; ++i)
    for (int v = 0; v < nv; ++v) phi[i][v] = base + 0.01 * uniform();
  for (int v = 0; v < nv; ++v) {
    double s = 1.0;
    for (int i = 0; i < nRandom; ++i) s -= phi[i][v];
    phi[nRandom][v] = s;
  }
  return phi;
}

bool benchmarkIsRandom(BenchmarkId id) {
  return id == BenchmarkId::Spinodal2 || id == BenchmarkId::Spinodal4;
}

bool benchmarkHasFlow(BenchmarkId id) { return id == BenchmarkId::BubblesFlow; }

int benchmarkComponents(BenchmarkId id) { return id == BenchmarkId::Spinodal4 ? 4 : 3; }

}  // namespace triphase
