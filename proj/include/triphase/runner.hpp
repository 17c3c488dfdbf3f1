#pragma once

#include <string>
#include <vector>

#include "triphase/config.hpp"
#include "triphase/diagnostics.hpp"

namespace triphase {

struct RunOutputs {
  PhaseState finalState;
  std::vector<DiagnosticsRecord> records;
  std::string csvPath;
};

/// Executes one configured benchmark run, writing per-stride CSV diagnostics
/// and field snapshots into config.outDir.
RunOutputs cmdRun(const RunConfig& config);

/// The convergence harness: runs each dt plus the reference from the same
/// initial state and assembles the rate table.
EocTable cmdEoc(const RunConfig& config, const std::vector<double>& dts, double refDt);

/// Stable benchmark catalog listing for the CLI.
std::string catalogListing();

}  // namespace triphase
