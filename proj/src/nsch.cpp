#include "triphase/nsch.hpp"

#include <algorithm>
#include <cmath>

#include "decoupled_detail.hpp"
#include "triphase/quadrature.hpp"

namespace triphase {

namespace {

// cubic bubble normalized to 1 at the barycenter
inline double bubble(double l1, double l2, double l3) { return 27.0 * l1 * l2 * l3; }

struct TriQuadPoint {
  double lam[3];
  double w;       // area-scaled weight
  double x, y;
  double b;           // bubble value
  Vec2 gradB;         // bubble gradient
};

/// Per-triangle quadrature geometry for a rule.
std::vector<TriQuadPoint> triPoints(const Mesh& mesh, int t, const QuadRule& rule) {
  std::vector<TriQuadPoint> pts(rule.size());
  const auto& tri = mesh.triangles[t];
  const auto g = mesh.barycentricGradients(t);
  const double area = mesh.triangleArea(t);
  for (int k = 0; k < rule.size(); ++k) {
    const auto& p = rule.points[k];
    TriQuadPoint& q = pts[k];
    q.lam[0] = p.l1;
    q.lam[1] = p.l2;
    q.lam[2] = p.l3;
    q.w = p.w * area;
    q.x = p.l1 * mesh.vertices[tri[0]].x + p.l2 * mesh.vertices[tri[1]].x +
          p.l3 * mesh.vertices[tri[2]].x;
    q.y = p.l1 * mesh.vertices[tri[0]].y + p.l2 * mesh.vertices[tri[1]].y +
          p.l3 * mesh.vertices[tri[2]].y;
    q.b = bubble(p.l1, p.l2, p.l3);
    q.gradB.x = 27.0 * (p.l2 * p.l3 * g[0].x + p.l1 * p.l3 * g[1].x + p.l1 * p.l2 * g[2].x);
    q.gradB.y = 27.0 * (p.l2 * p.l3 * g[0].y + p.l1 * p.l3 * g[1].y + p.l1 * p.l2 * g[2].y);
  }
  return pts;
}

struct VelocityAt {
  double ux, uy;
  double dxux, dyux, dxuy, dyuy;
};

VelocityAt velocityAt(const FlowState& f, const Mesh& mesh, int t, const TriQuadPoint& q,
                      const std::array<Vec2, 3>& g) {
  const auto& tri = mesh.triangles[t];
  VelocityAt v{};
  for (int a = 0; a < 3; ++a) {
    v.ux += q.lam[a] * f.ux[tri[a]];
    v.uy += q.lam[a] * f.uy[tri[a]];
    v.dxux += g[a].x * f.ux[tri[a]];
    v.dyux += g[a].y * f.ux[tri[a]];
    v.dxuy += g[a].x * f.uy[tri[a]];
    v.dyuy += g[a].y * f.uy[tri[a]];
  }
  v.ux += q.b * f.bx[t];
  v.uy += q.b * f.by[t];
  v.dxux += q.gradB.x * f.bx[t];
  v.dyux += q.gradB.y * f.bx[t];
  v.dxuy += q.gradB.x * f.by[t];
  v.dyuy += q.gradB.y * f.by[t];
  return v;
}

/// Accumulated intermediate velocity uhat = u^n - dt sum_{j<upTo} phi_j^n
/// grad mu_j^{n+1}, sampled at the quadrature points of `rule`.
struct QuadVelocity {
  std::vector<double> ux, uy;  // triangle-major
};

QuadVelocity sampleUhat(const FlowState& flow, const PhaseState& oldState,
                        const PhaseState& partial, int upTo, double dt,
                        const QuadRule& rule) {
  const Mesh& mesh = *oldState.mesh;
  const int nq = rule.size();
  QuadVelocity out;
  out.ux.assign(static_cast<size_t>(mesh.numTriangles()) * nq, 0.0);
  out.uy.assign(out.ux.size(), 0.0);
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto g = mesh.barycentricGradients(t);
    // per-triangle gradients of the updated potentials
    std::vector<Vec2> gradMu(upTo, Vec2{});
    for (int j = 0; j < upTo; ++j)
      for (int a = 0; a < 3; ++a) {
        gradMu[j].x += g[a].x * partial.mu[j][tri[a]];
        gradMu[j].y += g[a].y * partial.mu[j][tri[a]];
      }
    const auto pts = triPoints(mesh, t, rule);
    for (int k = 0; k < nq; ++k) {
      const TriQuadPoint& q = pts[k];
      double ux = 0.0, uy = 0.0;
      for (int a = 0; a < 3; ++a) {
        ux += q.lam[a] * flow.ux[tri[a]];
        uy += q.lam[a] * flow.uy[tri[a]];
      }
      ux += q.b * flow.bx[t];
      uy += q.b * flow.by[t];
      for (int j = 0; j < upTo; ++j) {
        double phi = 0.0;
        for (int a = 0; a < 3; ++a) phi += q.lam[a] * oldState.phi[j][tri[a]];
        ux -= dt * phi * gradMu[j].x;
        uy -= dt * phi * gradMu[j].y;
      }
      out.ux[static_cast<size_t>(t) * nq + k] = ux;
      out.uy[static_cast<size_t>(t) * nq + k] = uy;
    }
  }
  return out;
}

double clippedViscosity(const ModelParams& params, const double* phi) {
  double nu = 0.0, nuMin = params.nu.empty() ? 1.0 : params.nu[0];
  for (size_t i = 0; i < params.nu.size(); ++i) {
    nu += params.nu[i] * phi[i];
    nuMin = std::min(nuMin, params.nu[i]);
  }
  if (params.nu.empty()) nu = 1.0;
  return std::max(nu, nuMin / 10.0);
}

}  // namespace

FlowState FlowState::zero(std::shared_ptr<const Mesh> mesh) {
  FlowState f;
  f.mesh = std::move(mesh);
  f.ux.assign(f.mesh->numVertices(), 0.0);
  f.uy.assign(f.mesh->numVertices(), 0.0);
  f.bx.assign(f.mesh->numTriangles(), 0.0);
  f.by.assign(f.mesh->numTriangles(), 0.0);
  f.p = NodalField(f.mesh->numVertices(), 0.0);
  return f;
}

bool FlowState::isZero() const {
  auto allZero = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  };
  return allZero(ux) && allZero(uy) && allZero(bx) && allZero(by);
}

double kineticEnergy(const FlowState& flow) {
  const Mesh& mesh = *flow.mesh;
  const QuadRule& rule = flowRule();
  double e = 0.0;
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const auto g = mesh.barycentricGradients(t);
    for (const auto& q : triPoints(mesh, t, rule)) {
      const VelocityAt v = velocityAt(flow, mesh, t, q, g);
      e += 0.5 * q.w * (v.ux * v.ux + v.uy * v.uy);
    }
  }
  return e;
}

VelocityProfile rotationProfile() {
  return [](double x, double y) {
    const double X = 4.0 * M_PI * (x - 0.125);
    const double Y = 4.0 * M_PI * (y - 0.125);
    const double sx = std::sin(X);
    return Vec2{2.0 * M_PI * sx * sx * std::cos(Y),
                -4.0 * M_PI * sx * std::cos(X) * std::sin(Y)};
  };
}

PhaseState nschPhaseSubsteps(const PhaseState& state, const FlowState& flow,
                             const ModelParams& params, const NschConfig& config,
                             SchemeWorkspace& ws) {
  if (state.mesh != flow.mesh && state.mesh->numVertices() != flow.mesh->numVertices())
    throw DimensionError("nsch: phase and flow states use different meshes");
  const Mesh& mesh = *state.mesh;
  const QuadRule& rule = potentialRule();
  const int nq = rule.size();
  const double dt = config.phase.dt;

  // precomputed dt-scaled (phi_i^n)^2-weighted stiffness blocks
  std::vector<SparseMatrix> kw(state.n());
  for (int i = 0; i < state.n(); ++i) {
    QuadField w = evaluateAtQuad(mesh, rule, state.phi[i]);
    for (double& v : w.data) v = dt * v * v;
    kw[i] = assembleWeightedStiffness(mesh, w);
  }

  struct Buffers {
    std::vector<double> load;
  };
  auto buffers = std::make_shared<Buffers>();

  detail::TransportProvider provider =
      [&, buffers](int phase, const PhaseState& partial) -> detail::TransportTerm {
    const QuadVelocity uhat = sampleUhat(flow, state, partial, phase, dt, rule);
    // load_v = integral phi_i^n uhat . grad(test_v)
    buffers->load.assign(mesh.numVertices(), 0.0);
    for (int t = 0; t < mesh.numTriangles(); ++t) {
      const auto& tri = mesh.triangles[t];
      const auto g = mesh.barycentricGradients(t);
      const double area = mesh.triangleArea(t);
      for (int k = 0; k < nq; ++k) {
        const auto& p = rule.points[k];
        double phi = p.l1 * state.phi[phase][tri[0]] + p.l2 * state.phi[phase][tri[1]] +
                     p.l3 * state.phi[phase][tri[2]];
        const double cx = area * p.w * phi * uhat.ux[static_cast<size_t>(t) * nq + k];
        const double cy = area * p.w * phi * uhat.uy[static_cast<size_t>(t) * nq + k];
        for (int a = 0; a < 3; ++a)
          buffers->load[tri[a]] += cx * g[a].x + cy * g[a].y;
      }
    }
    return detail::TransportTerm{&kw[phase], &buffers->load};
  };

  const bool truncated = config.phase.scheme == SchemeId::TD1 ||
                         (config.phase.scheme == SchemeId::NCOMP &&
                          config.phase.truncatedPotential);
  return detail::decoupledStep(state, params, config.phase, ws, truncated, provider);
}

FlowState nschFlowStep(const FlowState& flow, const PhaseState& oldPhase,
                       const PhaseState& newPhase, const ModelParams& params,
                       const NschConfig& config, SchemeWorkspace& ws) {
  const Mesh& mesh = *flow.mesh;
  const int nv = mesh.numVertices();
  const int nt = mesh.numTriangles();
  const QuadRule& rule = flowRule();
  const double dt = config.phase.dt;

  const QuadVelocity uhat = sampleUhat(flow, oldPhase, newPhase, oldPhase.n(), dt, rule);

  // unknown layout after bubble condensation: [ux_v | uy_v | p | gamma], with
  // gamma a scalar multiplier pinning the pressure to mass-weighted zero mean
  // while keeping every divergence row intact
  CooBuilder coo(3 * nv + 1);
  std::vector<double> rhs(3 * nv + 1, 0.0);

  // per-triangle condensation data for bubble recovery
  std::vector<double> cAbb(nt, 0.0);
  std::vector<std::array<double, 3>> cAbv(nt);       // A[3][a]
  std::vector<std::array<double, 3>> cAvb(nt);       // A[a][3]
  std::vector<std::array<double, 6>> cGb(nt);        // G[3][j][c], c-major: j + 3c
  std::vector<double> cFbx(nt, 0.0), cFby(nt, 0.0);  // bubble loads

  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const auto g = mesh.barycentricGradients(t);
    const auto pts = triPoints(mesh, t, rule);
    const int nq = rule.size();

    double A[4][4] = {};    // (1/dt) mass + viscous + convection, per component
    double G[4][3][2] = {}; // (d_c p_j, psi_a)
    double D[3][4][2] = {}; // (d_c psi_a, q_j)
    double fx[4] = {}, fy[4] = {};

    for (int k = 0; k < nq; ++k) {
      const TriQuadPoint& q = pts[k];
      const VelocityAt un = velocityAt(flow, mesh, t, q, g);
      const double divUn = un.dxux + un.dyuy;

      double phiAt[8];
      for (int i = 0; i < oldPhase.n() && i < 8; ++i) {
        phiAt[i] = 0.0;
        for (int a = 0; a < 3; ++a) phiAt[i] += q.lam[a] * oldPhase.phi[i][tri[a]];
      }
      const double nu = clippedViscosity(params, phiAt);

      double psi[4], gpx[4], gpy[4];
      for (int a = 0; a < 3; ++a) {
        psi[a] = q.lam[a];
        gpx[a] = g[a].x;
        gpy[a] = g[a].y;
      }
      psi[3] = q.b;
      gpx[3] = q.gradB.x;
      gpy[3] = q.gradB.y;

      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          const double massT = psi[a] * psi[b] / dt;
          const double visc = nu * (gpx[a] * gpx[b] + gpy[a] * gpy[b]);
          const double conv =
              (un.ux * gpx[b] + un.uy * gpy[b] + 0.5 * divUn * psi[b]) * psi[a];
          A[a][b] += q.w * (massT + visc + conv);
        }
        for (int j = 0; j < 3; ++j) {
          G[a][j][0] += q.w * g[j].x * psi[a];
          G[a][j][1] += q.w * g[j].y * psi[a];
        }
        const size_t idx = static_cast<size_t>(t) * nq + k;
        fx[a] += q.w * psi[a] * uhat.ux[idx] / dt;
        fy[a] += q.w * psi[a] * uhat.uy[idx] / dt;
      }
      for (int j = 0; j < 3; ++j)
        for (int a = 0; a < 4; ++a) {
          D[j][a][0] += q.w * gpx[a] * q.lam[j];
          D[j][a][1] += q.w * gpy[a] * q.lam[j];
        }
    }

    const double abb = A[3][3];
    cAbb[t] = abb;
    for (int a = 0; a < 3; ++a) {
      cAbv[t][a] = A[3][a];
      cAvb[t][a] = A[a][3];
    }
    for (int j = 0; j < 3; ++j) {
      cGb[t][j] = G[3][j][0];
      cGb[t][j + 3] = G[3][j][1];
    }
    cFbx[t] = fx[3];
    cFby[t] = fy[3];

    // condensed velocity-velocity (identical for both components)
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double v = A[a][b] - A[a][3] * A[3][b] / abb;
        coo.add(tri[a], tri[b], v);
        coo.add(nv + tri[a], nv + tri[b], v);
      }
      // condensed velocity-pressure and pressure-velocity
      for (int j = 0; j < 3; ++j) {
        coo.add(tri[a], 2 * nv + tri[j], G[a][j][0] - A[a][3] * G[3][j][0] / abb);
        coo.add(nv + tri[a], 2 * nv + tri[j], G[a][j][1] - A[a][3] * G[3][j][1] / abb);
        coo.add(2 * nv + tri[j], tri[a], D[j][a][0] - D[j][3][0] * A[3][a] / abb);
        coo.add(2 * nv + tri[j], nv + tri[a], D[j][a][1] - D[j][3][1] * A[3][a] / abb);
      }
      rhs[tri[a]] += fx[a] - A[a][3] * fx[3] / abb;
      rhs[nv + tri[a]] += fy[a] - A[a][3] * fy[3] / abb;
    }
    for (int j = 0; j < 3; ++j) {
      for (int jp = 0; jp < 3; ++jp)
        coo.add(2 * nv + tri[j], 2 * nv + tri[jp],
                -(D[j][3][0] * G[3][jp][0] + D[j][3][1] * G[3][jp][1]) / abb);
      rhs[2 * nv + tri[j]] -= (D[j][3][0] * fx[3] + D[j][3][1] * fy[3]) / abb;
    }
  }

  {
    std::vector<double> pm(nv, 0.0);  // integral of each pressure basis function
    for (int t = 0; t < nt; ++t) {
      const double third = mesh.triangleArea(t) / 3.0;
      for (int a = 0; a < 3; ++a) pm[mesh.triangles[t][a]] += third;
    }
    for (int j = 0; j < nv; ++j) {
      coo.add(2 * nv + j, 3 * nv, pm[j]);
      coo.add(3 * nv, 2 * nv + j, pm[j]);
    }
  }
  SparseMatrix mat = coo.finalize();

  std::vector<std::pair<int, double>> bc;
  for (int v : mesh.boundaryNodes) {
    Vec2 val{0.0, 0.0};
    if (config.bc.dirichlet) val = config.bc.dirichlet(mesh.vertices[v].x, mesh.vertices[v].y);
    bc.emplace_back(v, val.x);
    bc.emplace_back(nv + v, val.y);
  }
  mat = applyDirichlet(mat, rhs, bc);

  std::vector<double> x;
  try {
    x = solveSparse(mat, rhs, config.phase.solver, &ws.cache(9));
  } catch (const SolverError& e) {
    throw StepError(std::string("flow step: ") + e.what(), 0);
  }

  FlowState next = flow;
  std::copy(x.begin(), x.begin() + nv, next.ux.begin());
  std::copy(x.begin() + nv, x.begin() + 2 * nv, next.uy.begin());
  std::copy(x.begin() + 2 * nv, x.begin() + 3 * nv, next.p.v.begin());

  // bubble recovery
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    double rx = cFbx[t], ry = cFby[t];
    for (int a = 0; a < 3; ++a) {
      rx -= cAbv[t][a] * next.ux[tri[a]];
      ry -= cAbv[t][a] * next.uy[tri[a]];
    }
    for (int j = 0; j < 3; ++j) {
      rx -= cGb[t][j] * next.p[tri[j]];
      ry -= cGb[t][j + 3] * next.p[tri[j]];
    }
    next.bx[t] = rx / cAbb[t];
    next.by[t] = ry / cAbb[t];
  }

  return next;
}

NschStepResult nschStep(const PhaseState& state, const FlowState& flow,
                        const ModelParams& params, const NschConfig& config,
                        SchemeWorkspace& ws) {
  NschStepResult res;
  res.phase = nschPhaseSubsteps(state, flow, params, config, ws);
  res.flow = nschFlowStep(flow, state, res.phase, params, config, ws);
  res.kineticEnergy = kineticEnergy(res.flow);
  return res;
}

double divergenceResidual(const FlowState& flow) {
  const Mesh& mesh = *flow.mesh;
  const QuadRule& rule = flowRule();
  std::vector<double> r(mesh.numVertices(), 0.0);
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const auto g = mesh.barycentricGradients(t);
    const auto& tri = mesh.triangles[t];
    for (const auto& q : triPoints(mesh, t, rule)) {
      const VelocityAt v = velocityAt(flow, mesh, t, q, g);
      const double div = v.dxux + v.dyuy;
      for (int a = 0; a < 3; ++a) r[tri[a]] += q.w * div * q.lam[a];
    }
  }
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

double viscousDissipation(const FlowState& flow, const PhaseState& phase,
                          const ModelParams& params) {
  const Mesh& mesh = *flow.mesh;
  const QuadRule& rule = flowRule();
  double s = 0.0;
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const auto g = mesh.barycentricGradients(t);
    const auto& tri = mesh.triangles[t];
    for (const auto& q : triPoints(mesh, t, rule)) {
      double phiAt[8];
      for (int i = 0; i < phase.n() && i < 8; ++i) {
        phiAt[i] = 0.0;
        for (int a = 0; a < 3; ++a) phiAt[i] += q.lam[a] * phase.phi[i][tri[a]];
      }
      const VelocityAt v = velocityAt(flow, mesh, t, q, g);
      s += q.w * clippedViscosity(params, phiAt) *
           (v.dxux * v.dxux + v.dyux * v.dyux + v.dxuy * v.dxuy + v.dyuy * v.dyuy);
    }
  }
  return s;
}

double convectionForm(const FlowState& u, const FlowState& v, const FlowState& w) {
  const Mesh& mesh = *u.mesh;
  const QuadRule& rule = flowRule();
  double s = 0.0;
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const auto g = mesh.barycentricGradients(t);
    for (const auto& q : triPoints(mesh, t, rule)) {
      const VelocityAt uu = velocityAt(u, mesh, t, q, g);
      const VelocityAt vv = velocityAt(v, mesh, t, q, g);
      const VelocityAt ww = velocityAt(w, mesh, t, q, g);
      const double divU = uu.dxux + uu.dyuy;
      const double adv = (uu.ux * vv.dxux + uu.uy * vv.dyux) * ww.ux +
                         (uu.ux * vv.dxuy + uu.uy * vv.dyuy) * ww.uy;
      const double stab = 0.5 * divU * (vv.ux * ww.ux + vv.uy * ww.uy);
      s += q.w * (adv + stab);
    }
  }
  return s;
}

}  // namespace triphase
