#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "triphase/benchmarks.hpp"
#include "triphase/chemistry.hpp"
#include "triphase/state.hpp"

namespace triphase {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class BoundaryMode { Neumann, DirichletPhi3 };
enum class FlowMode { Off, Still, Rotation };
enum class IcProjection { L2, Nodal };

struct RunConfig {
  BenchmarkId benchmark = BenchmarkId::Lens;
  SchemeId scheme = SchemeId::NTD1;
  Rect domain;
  int nx = 0, ny = 0;
  double dt = 1e-4;
  double tEnd = 0.0;
  double epsilon = 1e-2;
  double lambda = 1e-4;     // penalization
  double bigLambda = 7.0;   // F123 coefficient
  std::vector<double> mobility;  // broadcast if a single value was given
  std::vector<double> sigma;     // spreading coefficients
  std::vector<double> nu;        // viscosities
  TauMode tauMode = TauMode::Auto;
  std::vector<double> tauValues;
  std::uint64_t seed = 0;
  BoundaryMode boundary = BoundaryMode::Neumann;
  FlowMode flow = FlowMode::Off;
  IcProjection icProjection = IcProjection::L2;
  int nComponents = 3;
  std::string outDir = "out";
  int outputStride = 100;
  bool outputFields = true;
  SolverOptions solver;
  bool paperResolution = false;  // restore the published mesh sizes

  ModelParams modelParams() const;
  SchemeConfig schemeConfig() const;
  int steps() const;  // ceil((tEnd - 0)/dt)
};

/// Table defaults for one benchmark at desk resolution (h = 1/100 unless
/// paperResolution is set, which restores h = 1/300).
RunConfig benchmarkDefaults(BenchmarkId id);

/// Plain-text key/value file: `key = value` lines, `#` comments, optional
/// `[section]` headers. Unknown keys are errors with their line number.
RunConfig parseConfig(const std::string& path,
                      const std::optional<std::string>& benchmarkOverride = {},
                      const std::optional<std::string>& schemeOverride = {});
RunConfig parseConfigText(const std::string& text,
                          const std::optional<std::string>& benchmarkOverride = {},
                          const std::optional<std::string>& schemeOverride = {});

}  // namespace triphase
