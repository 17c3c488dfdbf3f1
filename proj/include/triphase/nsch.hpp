#pragma once

#include <functional>

#include "triphase/schemes.hpp"
#include "triphase/state.hpp"

namespace triphase {

/// Mini-element (P1-bubble x P1) flow unknowns. Velocity carries two
/// components per vertex plus two bubble coefficients per triangle; pressure
/// is P1 nodal.
struct FlowState {
  std::shared_ptr<const Mesh> mesh;
  std::vector<double> ux, uy;  // vertex values
  std::vector<double> bx, by;  // bubble coefficients per triangle
  NodalField p;

  static FlowState zero(std::shared_ptr<const Mesh> mesh);
  bool isZero() const;
};

using VelocityProfile = std::function<Vec2(double, double)>;

struct FlowBc {
  /// Dirichlet data on the whole boundary; empty means homogeneous.
  VelocityProfile dirichlet;
};

struct NschConfig {
  SchemeConfig phase;       // TD1 or NTD1 substeps
  FlowBc bc;
};

/// Result of advancing the coupled system one step.
struct NschStepResult {
  PhaseState phase;
  FlowState flow;
  double kineticEnergy = 0.0;
};

/// Kinetic energy 1/2 integral |u|^2 of a mini-element velocity.
double kineticEnergy(const FlowState& flow);

/// The three transported phase substeps. Transport of phase i uses the
/// accumulated intermediate velocity uhat_i = uhat_{i-1} - dt phi_i^n grad
/// mu_i^{n+1} (uhat_0 = u^n), whose own gradient term is implicit and enters
/// the matrix as a dt-scaled (phi_i^n)^2-weighted stiffness block.
PhaseState nschPhaseSubsteps(const PhaseState& state, const FlowState& flow,
                             const ModelParams& params, const NschConfig& config,
                             SchemeWorkspace& ws);

/// Saddle-point flow step with skew-symmetrized convection, static bubble
/// condensation and one-point pressure pinning (mean-zero shift afterwards).
FlowState nschFlowStep(const FlowState& flow, const PhaseState& oldPhase,
                       const PhaseState& newPhase, const ModelParams& params,
                       const NschConfig& config, SchemeWorkspace& ws);

NschStepResult nschStep(const PhaseState& state, const FlowState& flow,
                        const ModelParams& params, const NschConfig& config,
                        SchemeWorkspace& ws);

/// Rotating boundary/initial profile of the two-bubble flow benchmark.
VelocityProfile rotationProfile();

/// Discrete divergence residual max_j |(div u, q_j)| over pressure test
/// functions.
double divergenceResidual(const FlowState& flow);

/// ||sqrt(nu(phi)) grad u||^2 with the viscosity frozen at `phase`.
double viscousDissipation(const FlowState& flow, const PhaseState& phase,
                          const ModelParams& params);

/// Trilinear convection form c(u, v, w) with the 1/2 (div u) stabilization.
double convectionForm(const FlowState& u, const FlowState& v, const FlowState& w);

}  // namespace triphase
