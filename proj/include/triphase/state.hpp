#pragma once

#include <memory>
#include <vector>

#include "triphase/assembly.hpp"
#include "triphase/chemistry.hpp"
#include "triphase/mesh.hpp"
#include "triphase/solver.hpp"

namespace triphase {

/// All nodal unknowns of the phase system at one time level.
struct PhaseState {
  std::shared_ptr<const Mesh> mesh;
  double t = 0.0;
  std::vector<NodalField> phi;
  std::vector<NodalField> mu;
  std::vector<NodalField> muHalf;      // half-step potentials (coupled scheme only)
  std::vector<double> initialVolumes;  // recorded at construction
  std::vector<double> stepTau;         // stabilizers used by the producing step
  bool muValid = false;                // mu carries scheme-defined values

  int n() const { return static_cast<int>(phi.size()); }

  static PhaseState create(std::shared_ptr<const Mesh> mesh, std::vector<NodalField> phi,
                           double t = 0.0);
};

enum class SchemeId { TD1, NTD1, NTC2, NCOMP };
enum class TauMode { Auto, Explicit, Zero };

std::string schemeName(SchemeId id);
SchemeId schemeFromName(const std::string& name);

struct SchemeConfig {
  SchemeId scheme = SchemeId::NTD1;
  double dt = 1e-4;
  TauMode tauMode = TauMode::Auto;  // Auto: threshold for TD1/NTC2, zero for NTD1
  SolverOptions solver;
  bool truncatedPotential = false;  // NCOMP only: use truncated wells
  /// Dirichlet value for the last phase on the boundary; disabled when < 0.
  double dirichletLastPhase = -1.0;

  void validate() const;
};

/// Effective stabilizers for one step (per phase), resolving TauMode.
std::vector<double> resolveTau(const PhaseState& state, const ModelParams& params,
                               const SchemeConfig& config);

}  // namespace triphase
