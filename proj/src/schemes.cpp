#include "triphase/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "decoupled_detail.hpp"
#include "triphase/quadrature.hpp"

namespace triphase {

namespace {

std::vector<double> axpy(double alpha, const std::vector<double>& x, std::vector<double> y) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
  return y;
}

void addScaledInto(std::vector<double>& acc, double alpha, const std::vector<double>& x) {
  for (size_t i = 0; i < acc.size(); ++i) acc[i] += alpha * x[i];
}

/// nodal vector of (sum_i phi_i - 1)
std::vector<double> constraintVector(const PhaseState& s) {
  std::vector<double> c(s.mesh->numVertices(), -1.0);
  for (const auto& phi : s.phi)
    for (int v = 0; v < phi.size(); ++v) c[v] += phi[v];
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// PhaseState / SchemeConfig
// ---------------------------------------------------------------------------

PhaseState PhaseState::create(std::shared_ptr<const Mesh> mesh, std::vector<NodalField> phi,
                              double t) {
  PhaseState s;
  s.mesh = std::move(mesh);
  s.t = t;
  for (auto& f : phi) requireMatch(*s.mesh, f);
  s.phi = std::move(phi);
  s.mu.assign(s.phi.size(), NodalField(s.mesh->numVertices(), 0.0));
  s.initialVolumes.reserve(s.phi.size());
  for (const auto& f : s.phi) s.initialVolumes.push_back(integrate(*s.mesh, f));
  return s;
}

std::string schemeName(SchemeId id) {
  switch (id) {
    case SchemeId::TD1: return "TD1";
    case SchemeId::NTD1: return "NTD1";
    case SchemeId::NTC2: return "NTC2";
    case SchemeId::NCOMP: return "NCOMP";
  }
  return "?";
}

SchemeId schemeFromName(const std::string& name) {
  if (name == "TD1") return SchemeId::TD1;
  if (name == "NTD1") return SchemeId::NTD1;
  if (name == "NTC2") return SchemeId::NTC2;
  if (name == "NCOMP") return SchemeId::NCOMP;
  throw ParameterError("unknown scheme '" + name + "' (expected TD1|NTD1|NTC2|NCOMP)");
}

void SchemeConfig::validate() const {
  if (!(dt > 0.0)) throw ParameterError("scheme: dt must be positive");
}

std::vector<double> resolveTau(const PhaseState& state, const ModelParams& params,
                               const SchemeConfig& config) {
  const int n = params.n();
  std::vector<double> tau(n, 0.0);
  switch (config.tauMode) {
    case TauMode::Zero:
      break;
    case TauMode::Explicit:
      if (static_cast<int>(params.tau.size()) != n)
        throw ParameterError("tau: explicit mode needs one value per phase");
      tau = params.tau;
      break;
    case TauMode::Auto:
      for (int i = 0; i < n; ++i) {
        const double sigma = params.spreading.sigma[i];
        const double mob = params.mobility[i];
        switch (config.scheme) {
          case SchemeId::TD1:
            tau[i] = tauThreshold(mob, sigma, params.epsilon, 1.0, TauFormula::Truncated);
            break;
          case SchemeId::NTD1:
            tau[i] = 0.0;  // the practical variant neglects stabilization
            break;
          case SchemeId::NTC2:
            tau[i] = tauThreshold(mob, sigma, params.epsilon,
                                  detail::fPrimeInfNorm(state.phi[i], false),
                                  TauFormula::NonTruncated);
            break;
          case SchemeId::NCOMP:
            tau[i] = config.truncatedPotential
                         ? tauThreshold(mob, sigma, params.epsilon, 1.0, TauFormula::Truncated)
                         : 0.0;
            break;
        }
      }
      break;
  }
  return tau;
}

// ---------------------------------------------------------------------------
// Workspace
// ---------------------------------------------------------------------------

SchemeWorkspace::SchemeWorkspace(std::shared_ptr<const Mesh> mesh)
    : mesh_(std::move(mesh)),
      mass_(assembleMass(*mesh_)),
      stiffness_(assembleStiffness(*mesh_)) {}

SolveCache& SchemeWorkspace::cache(int slot) {
  while (static_cast<int>(caches_.size()) <= slot)
    caches_.push_back(std::make_unique<SolveCache>());
  return *caches_[slot];
}

// ---------------------------------------------------------------------------
// Initial states
// ---------------------------------------------------------------------------

PhaseState initState(std::shared_ptr<const Mesh> mesh,
                     const std::vector<std::function<double(double, double)>>& ics,
                     const ModelParams& params, bool l2Projection,
                     const SolverOptions& solver) {
  params.validate();
  if (static_cast<int>(ics.size()) != params.n())
    throw ParameterError("initState: one initial profile per phase required");
  std::vector<NodalField> phi;
  phi.reserve(ics.size());
  if (l2Projection) {
    const SparseMatrix mass = assembleMass(*mesh);
    for (const auto& ic : ics) {
      const QuadField g = evaluateAtQuad(*mesh, projectionRule(), ic);
      const std::vector<double> rhs = assembleLoad(*mesh, g);
      NodalField f;
      f.v = solveSparse(mass, rhs, solver);
      phi.push_back(std::move(f));
    }
  } else {
    for (const auto& ic : ics) {
      NodalField f(mesh->numVertices());
      for (int v = 0; v < mesh->numVertices(); ++v)
        f[v] = ic(mesh->vertices[v].x, mesh->vertices[v].y);
      phi.push_back(std::move(f));
    }
  }
  return PhaseState::create(std::move(mesh), std::move(phi));
}

PhaseState initStateNodal(std::shared_ptr<const Mesh> mesh, std::vector<NodalField> phi) {
  return PhaseState::create(std::move(mesh), std::move(phi));
}

// ---------------------------------------------------------------------------
// Decoupled engine (TD1 / NTD1 / NCOMP / flow substeps)
// ---------------------------------------------------------------------------

namespace detail {

double fPrimeInfNorm(const NodalField& phi, bool truncated) {
  double m = 0.0;
  for (double v : phi.v) {
    const WellValues w = truncated ? truncatedDoubleWell(v) : doubleWell(v);
    m = std::max(m, std::abs(w.fp));
  }
  return m;
}

PhaseState decoupledStep(const PhaseState& state, const ModelParams& params,
                         const SchemeConfig& config, SchemeWorkspace& ws, bool truncated,
                         const TransportProvider& transport) {
  params.validate();
  config.validate();
  const Mesh& mesh = *state.mesh;
  const int nv = mesh.numVertices();
  const int n = state.n();
  const double dt = config.dt;
  const double eps = params.epsilon;
  const double lam = params.lambda;
  const QuadRule& rule = potentialRule();

  const SparseMatrix& mass = ws.mass();
  const SparseMatrix& stiff = ws.stiffness();
  const std::vector<double> tau = resolveTau(state, params, config);

  // quadrature-point squares of each phase; replaced as phases update
  std::vector<QuadField> sq(n);
  for (int i = 0; i < n; ++i) {
    sq[i] = evaluateAtQuad(mesh, rule, state.phi[i]);
    for (double& v : sq[i].data) v *= v;
  }

  std::vector<double> penaltyLoad = mass.multiply(constraintVector(state));
  for (double& v : penaltyLoad) v /= lam;

  PhaseState next = state;
  next.t = state.t + dt;
  next.stepTau = tau;
  next.muValid = true;
  next.muHalf.clear();

  for (int i = 0; i < n; ++i) {
    const double sigma = params.spreading.sigma[i];
    const double mob = params.mobility[i];

    // F123-type weight: updated squares left of i, old squares right of i
    QuadField weight = constantQuadField(mesh, rule, 1.0);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (size_t k = 0; k < weight.data.size(); ++k) weight.data[k] *= sq[j].data[k];
    }
    const SparseMatrix wLambda = assembleWeightedMass(mesh, weight);

    QuadField phiQ = evaluateAtQuad(mesh, rule, state.phi[i]);
    QuadField fQ = phiQ, fpQ = phiQ;
    for (size_t k = 0; k < phiQ.data.size(); ++k) {
      const WellValues w =
          truncated ? truncatedDoubleWell(phiQ.data[k]) : doubleWell(phiQ.data[k]);
      fQ.data[k] = w.f;
      fpQ.data[k] = w.fp;
    }
    const SparseMatrix wFp = assembleWeightedMass(mesh, fpQ);
    const std::vector<double> fLoad = assembleLoad(mesh, fQ);

    BlockSystem sys;
    sys.blocks = 2;
    sys.blockDim = nv;
    sys.rhs.assign(2 * nv, 0.0);

    // mu-equation
    sys.add(0, 0, mass, 1.0 / dt);
    sys.add(0, 1, stiff, mob);
    {
      std::vector<double> r0 = mass.multiply(state.phi[i].v);
      for (int v = 0; v < nv; ++v) sys.rhs[v] = r0[v] / dt;
    }
    if (transport) {
      const TransportTerm tt = transport(i, next);
      if (tt.muStiffness) sys.add(0, 1, *tt.muStiffness, 1.0);
      if (tt.load)
        for (int v = 0; v < nv; ++v) sys.rhs[v] += (*tt.load)[v];
    }

    // phi-equation
    sys.add(1, 0, stiff, 0.375 * eps * sigma + tau[i] * dt);
    sys.add(1, 0, wLambda, 12.0 * params.bigLambda / eps);
    sys.add(1, 0, wFp, 12.0 * sigma / eps);
    sys.add(1, 0, mass, 0.5 / lam);
    sys.add(1, 1, mass, -1.0);
    {
      std::vector<double> r1 = stiff.multiply(state.phi[i].v);
      for (double& v : r1) v *= (tau[i] * dt - 0.375 * eps * sigma);
      addScaledInto(r1, -12.0 * params.bigLambda / eps, wLambda.multiply(state.phi[i].v));
      addScaledInto(r1, -24.0 * sigma / eps, fLoad);
      addScaledInto(r1, 12.0 * sigma / eps, wFp.multiply(state.phi[i].v));
      addScaledInto(r1, -1.0, penaltyLoad);
      addScaledInto(r1, 0.5 / lam, mass.multiply(state.phi[i].v));
      for (int j = 0; j < i; ++j) {
        const std::vector<double> dphi =
            axpy(-1.0, state.phi[j].v, std::vector<double>(next.phi[j].v));
        addScaledInto(r1, -1.0 / lam, mass.multiply(dphi));
      }
      for (int v = 0; v < nv; ++v) sys.rhs[nv + v] = r1[v];
    }

    SparseMatrix flat = flattenBlockSystem(sys);
    std::vector<double> rhs = std::move(sys.rhs);
    if (config.dirichletLastPhase >= 0.0 && i == n - 1) {
      std::vector<std::pair<int, double>> bc;
      bc.reserve(mesh.boundaryNodes.size());
      for (int v : mesh.boundaryNodes) bc.emplace_back(v, config.dirichletLastPhase);
      flat = applyDirichlet(flat, rhs, bc);
    }

    std::vector<double> x;
    try {
      x = solveSparse(flat, rhs, config.solver, &ws.cache(i));
    } catch (const SolverError& e) {
      throw StepError(std::string("substep ") + std::to_string(i + 1) + ": " + e.what(), i);
    }
    std::copy(x.begin(), x.begin() + nv, next.phi[i].v.begin());
    std::copy(x.begin() + nv, x.end(), next.mu[i].v.begin());

    sq[i] = evaluateAtQuad(mesh, rule, next.phi[i]);
    for (double& v : sq[i].data) v *= v;
  }
  return next;
}

void defineInitialMu(PhaseState& state, const ModelParams& params, SchemeWorkspace& ws,
                     const SolverOptions& solver) {
  const Mesh& mesh = *state.mesh;
  const int n = state.n();
  const QuadRule& rule = potentialRule();
  const double eps = params.epsilon;

  std::vector<QuadField> phiQ(n);
  for (int i = 0; i < n; ++i) phiQ[i] = evaluateAtQuad(mesh, rule, state.phi[i]);
  std::vector<double> penaltyLoad = ws.mass().multiply(constraintVector(state));
  for (double& v : penaltyLoad) v /= params.lambda;

  std::vector<double> phis(n);
  for (int i = 0; i < n; ++i) {
    QuadField fQ = phiQ[i];
    QuadField gQ = phiQ[i];
    for (size_t k = 0; k < fQ.data.size(); ++k) {
      fQ.data[k] = doubleWell(phiQ[i].data[k]).f;
      double rest = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) rest *= phiQ[j].data[k] * phiQ[j].data[k];
      gQ.data[k] = phiQ[i].data[k] * rest;
    }
    std::vector<double> rhs = ws.stiffness().multiply(state.phi[i].v);
    for (double& v : rhs) v *= 0.375 * eps * params.spreading.sigma[i];
    addScaledInto(rhs, 24.0 * params.spreading.sigma[i] / eps, assembleLoad(mesh, fQ));
    addScaledInto(rhs, 24.0 * params.bigLambda / eps, assembleLoad(mesh, gQ));
    addScaledInto(rhs, 1.0, penaltyLoad);
    state.mu[i].v = solveSparse(ws.mass(), rhs, solver);
  }
  state.muValid = true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public steps
// ---------------------------------------------------------------------------

PhaseState td1Step(const PhaseState& state, const ModelParams& params,
                   const SchemeConfig& config, SchemeWorkspace& ws) {
  if (state.n() != 3) throw ParameterError("td1: three phases required");
  SchemeConfig c = config;
  c.scheme = SchemeId::TD1;
  return detail::decoupledStep(state, params, c, ws, /*truncated=*/true);
}

PhaseState ntd1Step(const PhaseState& state, const ModelParams& params,
                    const SchemeConfig& config, SchemeWorkspace& ws) {
  if (state.n() != 3) throw ParameterError("ntd1: three phases required");
  SchemeConfig c = config;
  c.scheme = SchemeId::NTD1;
  return detail::decoupledStep(state, params, c, ws, /*truncated=*/false);
}

PhaseState ncompStep(const PhaseState& state, const ModelParams& params,
                     const SchemeConfig& config, SchemeWorkspace& ws) {
  if (state.n() < 2) throw ParameterError("ncomp: at least two phases required");
  SchemeConfig c = config;
  c.scheme = SchemeId::NCOMP;
  return detail::decoupledStep(state, params, c, ws, c.truncatedPotential);
}

PhaseState ntc2Step(const PhaseState& state, const ModelParams& params,
                    const SchemeConfig& config, SchemeWorkspace& ws) {
  if (state.n() != 3) throw ParameterError("ntc2: three phases required");
  params.validate();
  config.validate();
  const Mesh& mesh = *state.mesh;
  const int nv = mesh.numVertices();
  const double dt = config.dt;
  const double eps = params.epsilon;
  const double lam = params.lambda;
  const QuadRule& rule = potentialRule();

  PhaseState base = state;
  if (!base.muValid) detail::defineInitialMu(base, params, ws, config.solver);

  SchemeConfig c = config;
  c.scheme = SchemeId::NTC2;
  const std::vector<double> tau = resolveTau(base, params, c);

  const SparseMatrix& mass = ws.mass();
  const SparseMatrix& stiff = ws.stiffness();

  std::vector<QuadField> phiQ(3);
  for (int i = 0; i < 3; ++i) phiQ[i] = evaluateAtQuad(mesh, rule, base.phi[i]);

  // Hessian-weighted couplings H_ij(phi^n) and per-phase f-data
  SparseMatrix wH[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      QuadField w = constantQuadField(mesh, rule, 0.0);
      for (size_t k = 0; k < w.data.size(); ++k) {
        const auto h = f123Hessian(phiQ[0].data[k], phiQ[1].data[k], phiQ[2].data[k]);
        w.data[k] = h[i][j];
      }
      wH[i][j] = assembleWeightedMass(mesh, w);
      if (j != i) wH[j][i] = wH[i][j];
    }
  }

  std::vector<double> penaltyLoad = mass.multiply(constraintVector(base));
  for (double& v : penaltyLoad) v /= lam;

  BlockSystem sys;
  sys.blocks = 6;  // (phi_1, mu*_1, phi_2, mu*_2, phi_3, mu*_3)
  sys.blockDim = nv;
  sys.rhs.assign(6 * nv, 0.0);

  std::vector<SparseMatrix> wFp(3);
  for (int i = 0; i < 3; ++i) {
    const double sigma = params.spreading.sigma[i];
    const double mob = params.mobility[i];
    const int bPhi = 2 * i, bMu = 2 * i + 1;

    QuadField fQ = phiQ[i], fpQ = phiQ[i], gQ = phiQ[i];
    for (size_t k = 0; k < fQ.data.size(); ++k) {
      const WellValues w = doubleWell(phiQ[i].data[k]);
      fQ.data[k] = w.f;
      fpQ.data[k] = w.fp;
      const auto t = f123Grad(phiQ[0].data[k], phiQ[1].data[k], phiQ[2].data[k]);
      gQ.data[k] = t.grad[i];
    }
    wFp[i] = assembleWeightedMass(mesh, fpQ);

    // mu-equation
    sys.add(bPhi, bPhi, mass, 1.0 / dt);
    sys.add(bPhi, bMu, stiff, mob);
    {
      const std::vector<double> r = mass.multiply(base.phi[i].v);
      for (int v = 0; v < nv; ++v) sys.rhs[bPhi * nv + v] = r[v] / dt;
    }

    // phi-equation
    sys.add(bMu, bPhi, stiff, 0.375 * eps * sigma + tau[i] * dt);
    sys.add(bMu, bPhi, wFp[i], 12.0 * sigma / eps);
    for (int j = 0; j < 3; ++j) {
      sys.add(bMu, 2 * j, wH[i][j], 12.0 * params.bigLambda / eps);
      sys.add(bMu, 2 * j, mass, 0.5 / lam);
    }
    sys.add(bMu, bMu, mass, -1.0);
    {
      std::vector<double> r = stiff.multiply(base.phi[i].v);
      for (double& v : r) v *= (tau[i] * dt - 0.375 * eps * sigma);
      addScaledInto(r, -24.0 * sigma / eps, assembleLoad(mesh, fQ));
      addScaledInto(r, 12.0 * sigma / eps, wFp[i].multiply(base.phi[i].v));
      addScaledInto(r, -24.0 * params.bigLambda / eps, assembleLoad(mesh, gQ));
      for (int j = 0; j < 3; ++j) {
        addScaledInto(r, 12.0 * params.bigLambda / eps, wH[i][j].multiply(base.phi[j].v));
        addScaledInto(r, 0.5 / lam, mass.multiply(base.phi[j].v));
      }
      addScaledInto(r, -1.0, penaltyLoad);
      for (int v = 0; v < nv; ++v) sys.rhs[bMu * nv + v] = r[v];
    }
  }

  SparseMatrix flat = flattenBlockSystem(sys);
  std::vector<double> rhs = std::move(sys.rhs);
  if (config.dirichletLastPhase >= 0.0) {
    std::vector<std::pair<int, double>> bc;
    for (int v : mesh.boundaryNodes) bc.emplace_back(4 * nv + v, config.dirichletLastPhase);
    flat = applyDirichlet(flat, rhs, bc);
  }

  std::vector<double> x;
  try {
    x = solveSparse(flat, rhs, config.solver, &ws.cache(8));
  } catch (const SolverError& e) {
    throw StepError(std::string("coupled step: ") + e.what(), 0);
  }

  PhaseState next = base;
  next.t = base.t + dt;
  next.stepTau = tau;
  next.muValid = true;
  next.muHalf.assign(3, NodalField(nv, 0.0));
  for (int i = 0; i < 3; ++i) {
    for (int v = 0; v < nv; ++v) {
      next.phi[i][v] = x[2 * i * nv + v];
      const double muHalf = x[(2 * i + 1) * nv + v];
      next.muHalf[i][v] = muHalf;
      next.mu[i][v] = 2.0 * muHalf - base.mu[i][v];
    }
  }
  return next;
}

PhaseState advance(const PhaseState& state, const ModelParams& params,
                   const SchemeConfig& config, SchemeWorkspace& ws) {
  switch (config.scheme) {
    case SchemeId::TD1: return td1Step(state, params, config, ws);
    case SchemeId::NTD1: return ntd1Step(state, params, config, ws);
    case SchemeId::NTC2: return ntc2Step(state, params, config, ws);
    case SchemeId::NCOMP: return ncompStep(state, params, config, ws);
  }
  throw ParameterError("advance: unknown scheme");
}

PhaseState run(const PhaseState& initial, const ModelParams& params,
               const SchemeConfig& config, double tEnd, SchemeWorkspace& ws,
               const StepCallback& onStep) {
  config.validate();
  if (tEnd < initial.t) throw ParameterError("run: tEnd before initial time");

  if (config.tauMode == TauMode::Explicit) {
    const std::vector<double> tau = resolveTau(initial, params, config);
    for (int i = 0; i < params.n(); ++i) {
      const bool truncated =
          config.scheme == SchemeId::TD1 ||
          (config.scheme == SchemeId::NCOMP && config.truncatedPotential);
      const double bound =
          truncated ? 1.0 : detail::fPrimeInfNorm(initial.phi[i], false);
      const double thr =
          tauThreshold(params.mobility[i], params.spreading.sigma[i], params.epsilon, bound,
                       truncated ? TauFormula::Truncated : TauFormula::NonTruncated);
      if (tau[i] < thr)
        std::cerr << "[triphase] warning: tau_" << i + 1 << " = " << tau[i]
                  << " below stability threshold " << thr << "\n";
    }
  }

  PhaseState cur = initial;
  int step = 0;
  while (cur.t < tEnd - 1e-14 * std::max(1.0, std::abs(tEnd))) {
    SchemeConfig c = config;
    const double remaining = tEnd - cur.t;
    if (remaining < config.dt * (1.0 - 1e-12)) c.dt = remaining;
    PhaseState nextState = [&] {
      try {
        return advance(cur, params, c, ws);
      } catch (const std::exception& e) {
        throw StepError("step " + std::to_string(step) + ": " + e.what(), step);
      }
    }();
    nextState.t = std::min(nextState.t, tEnd);
    ++step;
    if (onStep) onStep(step, cur, nextState);
    cur = std::move(nextState);
  }
  return cur;
}

}  // namespace triphase
