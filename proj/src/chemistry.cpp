#include "triphase/chemistry.hpp"

#include <cmath>

namespace triphase {

WellValues doubleWell(double phi) {
  const double s = phi - 0.5;
  WellValues w;
  const double q = phi * (1.0 - phi);
  w.F = 0.25 * q * q;
  w.f = s * s * s - 0.25 * s;
  w.fp = 3.0 * s * s - 0.25;
  return w;
}

WellValues truncatedDoubleWell(double phi) {
  WellValues w;
  if (phi > 1.0) {
    const double d = phi - 1.0;
    w.F = 0.25 * d * d;
    w.f = 0.5 * d;
    w.fp = 0.5;
  } else if (phi < 0.0) {
    w.F = 0.25 * phi * phi;
    w.f = 0.5 * phi;
    w.fp = 0.5;
  } else {
    w = doubleWell(phi);
  }
  return w;
}

TripleWellValues f123Grad(double p1, double p2, double p3) {
  TripleWellValues t;
  const double s1 = p1 * p1, s2 = p2 * p2, s3 = p3 * p3;
  t.F123 = 0.5 * s1 * s2 * s3;
  t.grad = {p1 * s2 * s3, p2 * s1 * s3, p3 * s1 * s2};
  return t;
}

std::array<std::array<double, 3>, 3> f123Hessian(double p1, double p2, double p3) {
  const double s1 = p1 * p1, s2 = p2 * p2, s3 = p3 * p3;
  return {{{s2 * s3, 2.0 * p1 * p2 * s3, 2.0 * p1 * s2 * p3},
           {2.0 * p1 * p2 * s3, s1 * s3, 2.0 * s1 * p2 * p3},
           {2.0 * p1 * s2 * p3, 2.0 * s1 * p2 * p3, s1 * s2}}};
}

double productWell(const std::vector<double>& phi, std::vector<double>& grad) {
  const int n = static_cast<int>(phi.size());
  grad.assign(n, 0.0);
  double prod = 1.0;
  for (double p : phi) prod *= p * p;
  for (int i = 0; i < n; ++i) {
    double rest = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i) rest *= phi[j] * phi[j];
    grad[i] = phi[i] * rest;
  }
  return 0.5 * prod;
}

PenaltyValues penalty(const std::vector<double>& phi, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("penalty: lambda must be positive");
  double s = -1.0;
  for (double p : phi) s += p;
  return {0.5 * s * s / lambda, s / lambda};
}

std::vector<std::vector<double>> penaltyHessian(int n, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("penalty: lambda must be positive");
  return std::vector<std::vector<double>>(n, std::vector<double>(n, 1.0 / lambda));
}

std::vector<std::vector<double>> penaltyLowerTriangular(int n, double lambda) {
  if (n < 2) throw ParameterError("penaltyLowerTriangular: n must be >= 2");
  if (!(lambda > 0.0)) throw ParameterError("penalty: lambda must be positive");
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  const double c = 1.0 / (2.0 * lambda);
  for (int i = 0; i < n; ++i) {
    m[i][i] = c;
    for (int j = 0; j < i; ++j) m[i][j] = 2.0 * c;
  }
  return m;
}

double od2(double valueAtOld, double slopeAtOld, double phiOld, double phiNew) {
  return valueAtOld + 0.5 * slopeAtOld * (phiNew - phiOld);
}

SpreadingCoefficients SpreadingCoefficients::fromValues(std::vector<double> sigma) {
  SpreadingCoefficients s;
  s.sigma = std::move(sigma);
  int negatives = 0;
  for (double v : s.sigma)
    if (v < 0.0) ++negatives;
  if (negatives > 1)
    throw ParameterError("spreading: at most one coefficient may be negative");
  s.kind = negatives == 1 ? SpreadingKind::Total : SpreadingKind::Partial;
  if (s.sigma.size() == 3) {
    const double theta = s.sigma[0] * s.sigma[1] + s.sigma[0] * s.sigma[2] +
                         s.sigma[1] * s.sigma[2];
    s.thetaPositive = theta > 0.0;
  }
  return s;
}

SpreadingCoefficients SpreadingCoefficients::fromPairwise(double s12, double s13, double s23) {
  if (s12 < 0.0 || s13 < 0.0 || s23 < 0.0)
    throw ParameterError("spreading: surface tensions must be nonnegative");
  return fromValues({s12 + s13 - s23, s12 + s23 - s13, s13 + s23 - s12});
}

void ModelParams::validate() const {
  if (!(epsilon > 0.0)) throw ParameterError("params: epsilon must be positive");
  if (!(lambda > 0.0)) throw ParameterError("params: lambda must be positive");
  if (bigLambda < 0.0) throw ParameterError("params: Lambda must be nonnegative");
  if (mobility.size() != spreading.sigma.size())
    throw ParameterError("params: mobility count must match phase count");
  for (double m : mobility)
    if (!(m > 0.0)) throw ParameterError("params: mobilities must be positive");
  if (!tau.empty() && tau.size() != spreading.sigma.size())
    throw ParameterError("params: tau count must match phase count");
  for (double t : tau)
    if (t < 0.0) throw ParameterError("params: tau must be nonnegative");
}

double tauThreshold(double mobility, double sigma, double epsilon, double fPrimeBound,
                    TauFormula formula) {
  if (!(epsilon > 0.0)) throw ParameterError("tauThreshold: epsilon must be positive");
  const double base = 72.0 * mobility * sigma * sigma / (epsilon * epsilon);
  if (formula == TauFormula::Truncated) return base;
  return base * fPrimeBound * fPrimeBound;
}

SolvabilityReport solvabilityGuard(const ModelParams& params, double h, double dt) {
  SolvabilityReport rep;
  double sigmaNeg = 0.0;
  for (double s : params.spreading.sigma) sigmaNeg = std::min(sigmaNeg, s);
  if (sigmaNeg >= 0.0) {
    rep.unconditional = true;
    rep.message = "partial spreading: uniquely solvable for all dt > 0";
    return rep;
  }
  const double absSigma = -sigmaNeg;
  const double eps = params.epsilon;
  double mobMax = 0.0;
  for (size_t i = 0; i < params.spreading.sigma.size(); ++i)
    if (params.spreading.sigma[i] < 0.0) mobMax = params.mobility[i];

  rep.dtConditionApplicable = eps < 4.0 / (3.0 * absSigma);
  if (rep.dtConditionApplicable) {
    rep.dtBound = h * h * h * h * (4.0 - 3.0 * eps * absSigma) / mobMax;  // C = 1
    rep.dtSatisfied = dt <= rep.dtBound;
  }
  rep.lambdaBound = h * h / (eps * absSigma);  // C = 1
  rep.lambdaSatisfied = params.lambda <= rep.lambdaBound;

  std::string msg = "total spreading: ";
  if (rep.lambdaSatisfied)
    msg += "lambda condition holds (lambda <= h^2/(eps|Sigma|))";
  else if (rep.dtConditionApplicable && rep.dtSatisfied)
    msg += "dt condition holds (dt <= h^4(4-3 eps|Sigma|)/M)";
  else
    msg += "neither sufficient condition holds at C = 1; solvability not guaranteed";
  rep.message = msg;
  return rep;
}

}  // namespace triphase
