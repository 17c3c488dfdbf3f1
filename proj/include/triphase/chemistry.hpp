#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace triphase {

class ParameterError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Potentials
// ---------------------------------------------------------------------------

struct WellValues {
  double F;   // potential
  double f;   // first derivative
  double fp;  // second derivative
};

/// Double well F = 1/4 phi^2 (1-phi)^2 with f = dF/dphi, fp = df/dphi.
WellValues doubleWell(double phi);
/// Quadratic extension of the double well outside [0,1]; |fp| <= 1/2.
WellValues truncatedDoubleWell(double phi);

struct TripleWellValues {
  double F123;                  // 1/2 (phi1 phi2 phi3)^2
  std::array<double, 3> grad;   // g_i = phi_i phi_j^2 phi_k^2
};
TripleWellValues f123Grad(double p1, double p2, double p3);
/// Analytic Hessian of F123 (symmetric).
std::array<std::array<double, 3>, 3> f123Hessian(double p1, double p2, double p3);

/// N-component product well: 1/2 prod phi_i^2 and its gradient.
double productWell(const std::vector<double>& phi, std::vector<double>& grad);

// ---------------------------------------------------------------------------
// Penalization
// ---------------------------------------------------------------------------

struct PenaltyValues {
  double P;  // (1/2 lambda) (sum phi - 1)^2
  double p;  // (1/lambda) (sum phi - 1), identical in every gradient slot
};
PenaltyValues penalty(const std::vector<double>& phi, double lambda);
/// Hessian of P: (1/lambda) times the all-ones matrix.
std::vector<std::vector<double>> penaltyHessian(int n, double lambda);
/// Decoupling replacement for the penalty Hessian: (1/(2 lambda)) times the
/// matrix with 1 on the diagonal and 2 strictly below.
std::vector<std::vector<double>> penaltyLowerTriangular(int n, double lambda);

/// Linearization value + 1/2 slope * increment used by the OD2 schemes.
double od2(double valueAtOld, double slopeAtOld, double phiOld, double phiNew);

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

enum class SpreadingKind { Partial, Total };

struct SpreadingCoefficients {
  std::vector<double> sigma;
  SpreadingKind kind = SpreadingKind::Partial;
  bool thetaPositive = true;  // Sigma1 Sigma2 + Sigma1 Sigma3 + Sigma2 Sigma3 > 0

  static SpreadingCoefficients fromValues(std::vector<double> sigma);
  /// Sigma_i = sigma_ij + sigma_ik - sigma_jk from pairwise surface tensions.
  static SpreadingCoefficients fromPairwise(double s12, double s13, double s23);
};

struct ModelParams {
  double epsilon = 1e-2;   // interface thickness
  double lambda = 1e-4;    // penalization
  double bigLambda = 7.0;  // F123 coefficient
  std::vector<double> mobility{1e-3, 1e-3, 1e-3};
  SpreadingCoefficients spreading = SpreadingCoefficients::fromValues({1.0, 1.0, 1.0});
  std::vector<double> tau;  // explicit stabilizers, may be empty
  std::vector<double> nu;   // per-phase viscosities (flow runs)

  int n() const { return static_cast<int>(spreading.sigma.size()); }
  void validate() const;
};

enum class TauFormula { Truncated, NonTruncated };

/// Stabilization threshold 72 M Sigma^2 / eps^2, with the NonTruncated form
/// additionally scaled by fPrimeBound^2.
double tauThreshold(double mobility, double sigma, double epsilon, double fPrimeBound,
                    TauFormula formula);

struct SolvabilityReport {
  bool unconditional = false;
  bool dtConditionApplicable = false;  // requires eps < 4/(3|Sigma_neg|)
  double dtBound = 0.0;
  bool dtSatisfied = false;
  double lambdaBound = 0.0;
  bool lambdaSatisfied = false;
  std::string message;
};

/// Advisory check of the total-spreading solvability conditions with C = 1.
SolvabilityReport solvabilityGuard(const ModelParams& params, double h, double dt);

}  // namespace triphase
