#pragma once

#include <optional>

#include "triphase/schemes.hpp"
#include "triphase/state.hpp"

namespace triphase {

/// Free energy E = sum_i (3 eps/8) Sigma_i |grad phi_i|^2
///              + Q[(24/eps)(sum_i Sigma_i F(phi_i) + Lambda F123) + P].
/// The truncated flag swaps F for its quadratic extension.
double energy(const PhaseState& state, const ModelParams& params, bool truncated,
              const SparseMatrix& stiffness);
double energy(const PhaseState& state, const ModelParams& params, bool truncated);

struct DissipationBreakdown {
  std::vector<double> nd;   // per-phase OD2-vs-exact potential gap (rate)
  std::vector<double> tauTerm;  // tau_i ||grad dphi_i||^2
  double ndF123 = 0.0;      // coupled-well gap (NTC2 only)
  double tnd = 0.0;
};

/// Numerical dissipation of one step per the scheme's energy identity;
/// state pair must be consecutive (stepTau read from `after`).
/// `truncatedWells` defaults by scheme (true for TD1); NCOMP callers pass
/// their configured choice.
DissipationBreakdown numericalDissipation(const PhaseState& before, const PhaseState& after,
                                          const ModelParams& params, SchemeId scheme,
                                          std::optional<bool> truncatedWells = {});

/// Scheme energy-law residual:
///   TD1/NTD1:  delta_t E(trunc per scheme) + sum (M_i/2) ||grad mu_i^{n+1}||^2
///   NTC2:      delta_t E + sum M_i ||grad mu_i^{n+1/2}||^2
/// For TD1 with tau at threshold the value is <= 0; for NTC2,
/// residual + TND = 0 holds as an identity.
double energyLawResidual(const PhaseState& before, const PhaseState& after,
                         const ModelParams& params, SchemeId scheme,
                         const SparseMatrix& stiffness,
                         std::optional<bool> truncatedWells = {});

struct ConstraintNorms {
  double l2 = 0.0;
  double linf = 0.0;
};
ConstraintNorms constraintNorms(const PhaseState& state);

struct DiagnosticsRecord {
  double t = 0.0;
  double E = 0.0;
  double Etrunc = 0.0;
  double Ekin = 0.0;
  std::vector<double> volumes;
  double constraintL2 = 0.0;
  double constraintLinf = 0.0;
  double tnd = 0.0;
  double energyLawResidual = 0.0;
};

DiagnosticsRecord diagnose(const std::optional<PhaseState>& before, const PhaseState& state,
                           const ModelParams& params, SchemeId scheme,
                           const SparseMatrix& stiffness, double kineticEnergy = 0.0,
                           std::optional<bool> truncatedWells = {});

struct EocRow {
  double dt = 0.0;
  double e2Phi = 0.0, r2Phi = 0.0;
  double e1Phi = 0.0, r1Phi = 0.0;
  double e2Mu = 0.0, r2Mu = 0.0;
  double e1Mu = 0.0, r1Mu = 0.0;
};

struct EocTable {
  std::vector<EocRow> rows;  // sorted by descending dt; rates vs previous row
};

class EocError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Relative errors against the reference per the discrete L2/H1 norms (phases
/// stacked into one vector), and rates between adjacent dt.
EocTable eoc(const PhaseState& reference, const std::vector<std::pair<double, PhaseState>>& runs);

}  // namespace triphase
