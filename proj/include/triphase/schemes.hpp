#pragma once

#include <functional>
#include <optional>

#include "triphase/state.hpp"

namespace triphase {

class StepError : public std::runtime_error {
public:
  StepError(const std::string& what, int stepIndex)
      : std::runtime_error(what), step(stepIndex) {}
  int step;
};

/// Shared operators and solver caches for one mesh/run. Steps are pure with
/// respect to states; the workspace only memoizes factorization patterns.
class SchemeWorkspace {
public:
  explicit SchemeWorkspace(std::shared_ptr<const Mesh> mesh);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> meshPtr() const { return mesh_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  SolveCache& cache(int slot);

private:
  std::shared_ptr<const Mesh> mesh_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  std::vector<std::unique_ptr<SolveCache>> caches_;
};

/// L2-projected (or interpolated) initial state; mu starts undefined.
PhaseState initState(std::shared_ptr<const Mesh> mesh,
                     const std::vector<std::function<double(double, double)>>& ics,
                     const ModelParams& params, bool l2Projection = true,
                     const SolverOptions& solver = {});
PhaseState initStateNodal(std::shared_ptr<const Mesh> mesh, std::vector<NodalField> phi);

/// One step of the truncated decoupled first-order scheme (three sequential
/// 2-block solves).
PhaseState td1Step(const PhaseState& state, const ModelParams& params,
                   const SchemeConfig& config, SchemeWorkspace& ws);
/// Same block structure with the plain double well; default tau = 0.
PhaseState ntd1Step(const PhaseState& state, const ModelParams& params,
                    const SchemeConfig& config, SchemeWorkspace& ws);
/// Coupled second-order scheme: one 2N-block solve for (phi_i, mu_i^{n+1/2});
/// stores mu^{n+1} = 2 mu^{n+1/2} - mu^n.
PhaseState ntc2Step(const PhaseState& state, const ModelParams& params,
                    const SchemeConfig& config, SchemeWorkspace& ws);
/// N-component decoupled generalization.
PhaseState ncompStep(const PhaseState& state, const ModelParams& params,
                     const SchemeConfig& config, SchemeWorkspace& ws);

PhaseState advance(const PhaseState& state, const ModelParams& params,
                   const SchemeConfig& config, SchemeWorkspace& ws);

using StepCallback =
    std::function<void(int step, const PhaseState& prev, const PhaseState& cur)>;

/// Advances from state.t to tEnd with fixed dt; the final step is truncated to
/// land exactly on tEnd. The callback stride is handled by the caller.
PhaseState run(const PhaseState& initial, const ModelParams& params,
               const SchemeConfig& config, double tEnd, SchemeWorkspace& ws,
               const StepCallback& onStep = {});

}  // namespace triphase
