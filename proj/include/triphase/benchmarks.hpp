#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "triphase/chemistry.hpp"
#include "triphase/mesh.hpp"
#include "triphase/state.hpp"

namespace triphase {

enum class BenchmarkId {
  Lens,
  TwoBubbles,
  Spinodal2,
  Spinodal4,
  BubblesFlow,
  ConvergenceIc,
};

std::string benchmarkName(BenchmarkId id);
/// Throws with a closest-name suggestion on unknown input.
BenchmarkId benchmarkFromName(const std::string& name);
std::vector<BenchmarkId> benchmarkCatalog();

/// Analytic initial profiles for the deterministic benchmarks (N entries).
std::vector<std::function<double(double, double)>> analyticIc(BenchmarkId id, double epsilon);

/// Seeded nodal initial data for the random benchmarks. Draws are uniform on
/// [0,1), one field after another, vertices in lexicographic order.
std::vector<NodalField> randomIc(BenchmarkId id, const Mesh& mesh, std::uint64_t seed);

bool benchmarkIsRandom(BenchmarkId id);
bool benchmarkHasFlow(BenchmarkId id);
int benchmarkComponents(BenchmarkId id);

}  // namespace triphase
