#include "triphase/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "triphase/io.hpp"
#include "triphase/nsch.hpp"

namespace triphase {

namespace {

PhaseState buildInitialState(const RunConfig& config, std::shared_ptr<const Mesh> mesh) {
  const ModelParams params = config.modelParams();
  if (benchmarkIsRandom(config.benchmark))
    return initStateNodal(mesh, randomIc(config.benchmark, *mesh, config.seed));
  const auto ics = analyticIc(config.benchmark, config.epsilon);
  return initState(mesh, ics, params, config.icProjection == IcProjection::L2,
                   config.solver);
}

std::string fieldPath(const std::string& dir, int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fields_%06d.vtk", step);
  return dir + "/" + buf;
}

}  // namespace

RunOutputs cmdRun(const RunConfig& config) {
  namespace fs = std::filesystem;
  const ModelParams params = config.modelParams();
  const SchemeConfig scheme = config.schemeConfig();
  scheme.validate();

  auto mesh = std::make_shared<const Mesh>(
      buildStructuredMesh(config.domain, config.nx, config.ny));

  const SolvabilityReport guard = solvabilityGuard(params, mesh->h, config.dt);
  if (!guard.unconditional) std::cerr << "[triphase] " << guard.message << "\n";

  fs::create_directories(config.outDir);
  const std::string csvPath = config.outDir + "/diagnostics.csv";

  RunOutputs out;
  out.csvPath = csvPath;

  SchemeWorkspace ws(mesh);
  PhaseState state = buildInitialState(config, mesh);

  const bool withFlow = config.flow != FlowMode::Off;
  NschConfig nsch;
  nsch.phase = scheme;
  FlowState flow = FlowState::zero(mesh);
  if (config.flow == FlowMode::Rotation) {
    nsch.bc.dirichlet = rotationProfile();
    for (int v = 0; v < mesh->numVertices(); ++v) {
      const Vec2 u = nsch.bc.dirichlet(mesh->vertices[v].x, mesh->vertices[v].y);
      flow.ux[v] = u.x;
      flow.uy[v] = u.y;
    }
  }

  DiagnosticsCsv csv(csvPath, state.n());
  const bool ncompTruncated =
      scheme.scheme == SchemeId::NCOMP && scheme.truncatedPotential;

  auto record = [&](const std::optional<PhaseState>& before, const PhaseState& cur,
                    double ekin) {
    const DiagnosticsRecord rec = diagnose(before, cur, params, scheme.scheme,
                                           ws.stiffness(), ekin, ncompTruncated
                                               ? std::optional<bool>(true)
                                               : std::optional<bool>());
    csv.writeRow(rec);
    out.records.push_back(rec);
  };

  record(std::nullopt, state, withFlow ? kineticEnergy(flow) : 0.0);
  if (config.outputFields)
    writeFields(state, withFlow ? &flow : nullptr, fieldPath(config.outDir, 0));

  const int totalSteps = config.steps();
  try {
    if (withFlow) {
      PhaseState cur = state;
      for (int step = 1; step <= totalSteps; ++step) {
        NschConfig c = nsch;
        const double remaining = config.tEnd - cur.t;
        if (remaining < c.phase.dt * (1.0 - 1e-12)) c.phase.dt = remaining;
        NschStepResult res = nschStep(cur, flow, params, c, ws);
        if (step % config.outputStride == 0 || step == totalSteps) {
          record(cur, res.phase, res.kineticEnergy);
          if (config.outputFields)
            writeFields(res.phase, &res.flow, fieldPath(config.outDir, step));
        }
        cur = std::move(res.phase);
        flow = std::move(res.flow);
      }
      out.finalState = std::move(cur);
    } else {
      PhaseState cur = run(state, params, scheme, config.tEnd, ws,
                           [&](int step, const PhaseState& prev, const PhaseState& now) {
                             if (step % config.outputStride == 0 || step == totalSteps) {
                               record(prev, now, 0.0);
                               if (config.outputFields)
                                 writeFields(now, nullptr, fieldPath(config.outDir, step));
                             }
                           });
      out.finalState = std::move(cur);
    }
  } catch (const StepError&) {
    // partial CSV rows are already flushed
    throw;
  }
  return out;
}

EocTable cmdEoc(const RunConfig& config, const std::vector<double>& dts, double refDt) {
  if (dts.empty()) throw ConfigError("eoc: at least one dt required");
  std::vector<double> ladder = dts;
  std::sort(ladder.begin(), ladder.end(), std::greater<>());
  for (size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] == ladder[i - 1]) throw ConfigError("eoc: duplicate dt in ladder");
  if (refDt >= ladder.back())
    throw ConfigError("eoc: reference dt must be smaller than every ladder dt");

  auto mesh = std::make_shared<const Mesh>(
      buildStructuredMesh(config.domain, config.nx, config.ny));
  const ModelParams params = config.modelParams();
  const PhaseState initial = buildInitialState(config, mesh);

  auto runTo = [&](double dt) {
    SchemeWorkspace ws(mesh);
    SchemeConfig c = config.schemeConfig();
    c.dt = dt;
    return run(initial, params, c, config.tEnd, ws);
  };

  const PhaseState reference = runTo(refDt);
  std::vector<std::pair<double, PhaseState>> runs;
  runs.reserve(ladder.size());
  for (double dt : ladder) runs.emplace_back(dt, runTo(dt));

  return eoc(reference, runs);
}

std::string catalogListing() {
  std::ostringstream os;
  for (BenchmarkId id : benchmarkCatalog()) {
    os << benchmarkName(id);
    switch (id) {
      case BenchmarkId::Lens: os << "            lens between two stratified phases"; break;
      case BenchmarkId::TwoBubbles: os << "     two bubbles suspended in a third phase"; break;
      case BenchmarkId::Spinodal2: os << "       ternary spinodal decomposition (seeded)"; break;
      case BenchmarkId::Spinodal4: os << "       four-component spinodal decomposition (seeded)"; break;
      case BenchmarkId::BubblesFlow: os << "    two bubbles in a rotating flow"; break;
      case BenchmarkId::ConvergenceIc: os << "  smooth profiles for time-convergence studies"; break;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace triphase
