#pragma once

#include <optional>
#include <vector>

#include "triphase/schemes.hpp"

namespace triphase::detail {

/// Extra terms injected into the mu-equation of one decoupled substep by the
/// flow coupling: dt-scaled (phi_i^n)^2-weighted stiffness on mu^{n+1} and the
/// explicit transport load (uhat_{i-1} phi_i^n, grad mubar).
struct TransportTerm {
  const SparseMatrix* muStiffness = nullptr;  // already dt-scaled weight
  const std::vector<double>* load = nullptr;
};

/// Called before assembling phase i; `partial` carries updated phi/mu for all
/// phases j < i. Returned pointers must stay valid through the phase solve.
using TransportProvider = std::function<TransportTerm(int phase, const PhaseState& partial)>;

/// Sequential decoupled phase substeps shared by TD1, NTD1, NCOMP and the
/// flow-coupled variant. `truncated` picks the well family.
PhaseState decoupledStep(const PhaseState& state, const ModelParams& params,
                         const SchemeConfig& config, SchemeWorkspace& ws, bool truncated,
                         const TransportProvider& transport = {});

/// Nodal max of |f'| (or |ftilde'|) of a field, used by the state-dependent
/// stabilizer thresholds.
double fPrimeInfNorm(const NodalField& phi, bool truncated);

/// Consistent mu at the initial state: Mass mu = variational derivative
/// loads at phi^0 (plain double well).
void defineInitialMu(PhaseState& state, const ModelParams& params, SchemeWorkspace& ws,
                     const SolverOptions& solver);

}  // namespace triphase::detail
