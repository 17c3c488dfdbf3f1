#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "triphase/diagnostics.hpp"
#include "triphase/nsch.hpp"
#include "triphase/state.hpp"

namespace triphase {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Streaming CSV writer with the fixed diagnostics header
/// t,E,E_trunc,E_kin,vol_1..vol_N,constraint_l2,constraint_linf,tnd,energy_law_residual
/// ('.' decimals, ',' separator, scientific with 9 significant digits).
class DiagnosticsCsv {
public:
  DiagnosticsCsv(const std::string& path, int nPhases);
  void writeRow(const DiagnosticsRecord& rec);
  int rows() const { return rows_; }

private:
  std::string path_;
  std::ofstream stream();
  int n_;
  int rows_ = 0;
};

std::string formatCsvValue(double v);

/// Legacy-ASCII VTK unstructured grid: points, triangle cells, point-data
/// scalars phi_1..phi_N, mu_1..mu_N, the composite 1/2 phi_3 + phi_1 (ternary
/// runs only) and optional vertex velocity vectors. Fixed 9-digit scientific
/// formatting for bit-stable output.
void writeFields(const PhaseState& state, const FlowState* flow, const std::string& path);

struct VtkSummary {
  int points = 0;
  int cells = 0;
  std::vector<std::string> pointArrays;
  bool hasVelocity = false;
};
VtkSummary readVtkSummary(const std::string& path);

void writeEocCsv(const EocTable& table, std::ostream& os);

}  // namespace triphase
