#include "triphase/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "triphase/quadrature.hpp"

namespace triphase {

namespace {

std::vector<QuadField> phasesAtQuad(const PhaseState& s) {
  std::vector<QuadField> q(s.n());
  for (int i = 0; i < s.n(); ++i)
    q[i] = evaluateAtQuad(*s.mesh, potentialRule(), s.phi[i]);
  return q;
}

}  // namespace

double energy(const PhaseState& state, const ModelParams& params, bool truncated,
              const SparseMatrix& stiffness) {
  params.validate();
  const double eps = params.epsilon;
  double cap = 0.0;
  for (int i = 0; i < state.n(); ++i)
    cap += 0.375 * eps * params.spreading.sigma[i] *
           stiffness.bilinear(state.phi[i].v, state.phi[i].v);

  const auto q = phasesAtQuad(state);
  QuadField density = constantQuadField(*state.mesh, potentialRule(), 0.0);
  for (size_t k = 0; k < density.data.size(); ++k) {
    double wells = 0.0;
    double prod = 1.0;
    double sum = -1.0;
    for (int i = 0; i < state.n(); ++i) {
      const double p = q[i].data[k];
      const WellValues w = truncated ? truncatedDoubleWell(p) : doubleWell(p);
      wells += params.spreading.sigma[i] * w.F;
      prod *= p * p;
      sum += p;
    }
    density.data[k] = (24.0 / eps) * (wells + params.bigLambda * 0.5 * prod) +
                      0.5 * sum * sum / params.lambda;
  }
  return cap + integrateQuad(*state.mesh, density);
}

double energy(const PhaseState& state, const ModelParams& params, bool truncated) {
  return energy(state, params, truncated, assembleStiffness(*state.mesh));
}

DissipationBreakdown numericalDissipation(const PhaseState& before, const PhaseState& after,
                                          const ModelParams& params, SchemeId scheme,
                                          std::optional<bool> truncatedWells) {
  const Mesh& mesh = *after.mesh;
  const double dt = after.t - before.t;
  DissipationBreakdown out;
  out.nd.assign(after.n(), 0.0);
  out.tauTerm.assign(after.n(), 0.0);
  if (dt <= 0.0) return out;

  const bool truncated = truncatedWells.value_or(scheme == SchemeId::TD1);
  const auto qOld = phasesAtQuad(before);
  const auto qNew = phasesAtQuad(after);
  const QuadRule& rule = potentialRule();
  const SparseMatrix stiff = assembleStiffness(mesh);

  for (int i = 0; i < after.n(); ++i) {
    QuadField g = constantQuadField(mesh, rule, 0.0);
    for (size_t k = 0; k < g.data.size(); ++k) {
      const double po = qOld[i].data[k];
      const double pn = qNew[i].data[k];
      const WellValues w = truncated ? truncatedDoubleWell(po) : doubleWell(po);
      const double Fn = (truncated ? truncatedDoubleWell(pn) : doubleWell(pn)).F;
      const double d = pn - po;
      g.data[k] = od2(w.f, w.fp, po, pn) * d - (Fn - w.F);
    }
    out.nd[i] = (24.0 * params.spreading.sigma[i] / (params.epsilon * dt)) *
                integrateQuad(mesh, g);

    std::vector<double> dphi(after.phi[i].v);
    for (int v = 0; v < mesh.numVertices(); ++v) dphi[v] -= before.phi[i][v];
    const double tau = i < static_cast<int>(after.stepTau.size()) ? after.stepTau[i] : 0.0;
    out.tauTerm[i] = tau * stiff.bilinear(dphi, dphi);
  }

  if (scheme == SchemeId::NTC2) {
    QuadField g = constantQuadField(mesh, rule, 0.0);
    for (size_t k = 0; k < g.data.size(); ++k) {
      const double po[3] = {qOld[0].data[k], qOld[1].data[k], qOld[2].data[k]};
      const double pn[3] = {qNew[0].data[k], qNew[1].data[k], qNew[2].data[k]};
      const auto f = f123Grad(po[0], po[1], po[2]);
      const auto h = f123Hessian(po[0], po[1], po[2]);
      const double Fn = f123Grad(pn[0], pn[1], pn[2]).F123;
      double lin = 0.0;
      for (int a = 0; a < 3; ++a) {
        double hd = 0.0;
        for (int b = 0; b < 3; ++b) hd += h[a][b] * (pn[b] - po[b]);
        lin += (f.grad[a] + 0.5 * hd) * (pn[a] - po[a]);
      }
      g.data[k] = lin - (Fn - f.F123);
    }
    out.ndF123 =
        (24.0 * params.bigLambda / (params.epsilon * dt)) * integrateQuad(mesh, g);
  }

  out.tnd = out.ndF123;
  for (int i = 0; i < after.n(); ++i) out.tnd += out.nd[i] + out.tauTerm[i];
  return out;
}

double energyLawResidual(const PhaseState& before, const PhaseState& after,
                         const ModelParams& params, SchemeId scheme,
                         const SparseMatrix& stiffness,
                         std::optional<bool> truncatedWells) {
  const double dt = after.t - before.t;
  if (dt <= 0.0) return 0.0;
  const bool truncated = truncatedWells.value_or(scheme == SchemeId::TD1);
  const double dE = (energy(after, params, truncated, stiffness) -
                     energy(before, params, truncated, stiffness)) /
                    dt;
  double flux = 0.0;
  for (int i = 0; i < after.n(); ++i) {
    if (scheme == SchemeId::NTC2) {
      // the scheme's dissipation is in the half-step potentials
      if (i < static_cast<int>(after.muHalf.size())) {
        flux += params.mobility[i] *
                stiffness.bilinear(after.muHalf[i].v, after.muHalf[i].v);
      } else {
        std::vector<double> muHalf(after.mu[i].v);
        for (int v = 0; v < after.mesh->numVertices(); ++v)
          muHalf[v] = 0.5 * (muHalf[v] + before.mu[i][v]);
        flux += params.mobility[i] * stiffness.bilinear(muHalf, muHalf);
      }
    } else {
      flux += 0.5 * params.mobility[i] * stiffness.bilinear(after.mu[i].v, after.mu[i].v);
    }
  }
  return dE + flux;
}

ConstraintNorms constraintNorms(const PhaseState& state) {
  NodalField c(state.mesh->numVertices(), -1.0);
  for (const auto& phi : state.phi)
    for (int v = 0; v < c.size(); ++v) c[v] += phi[v];
  const FieldNorms n = norms(*state.mesh, c);
  return {n.l2, n.linf};
}

DiagnosticsRecord diagnose(const std::optional<PhaseState>& before, const PhaseState& state,
                           const ModelParams& params, SchemeId scheme,
                           const SparseMatrix& stiffness, double kineticEnergy,
                           std::optional<bool> truncatedWells) {
  DiagnosticsRecord rec;
  rec.t = state.t;
  rec.E = energy(state, params, false, stiffness);
  rec.Etrunc = energy(state, params, true, stiffness);
  rec.Ekin = kineticEnergy;
  rec.volumes.reserve(state.n());
  for (const auto& phi : state.phi) rec.volumes.push_back(integrate(*state.mesh, phi));
  const ConstraintNorms cn = constraintNorms(state);
  rec.constraintL2 = cn.l2;
  rec.constraintLinf = cn.linf;
  if (before) {
    rec.tnd = numericalDissipation(*before, state, params, scheme, truncatedWells).tnd;
    rec.energyLawResidual =
        energyLawResidual(*before, state, params, scheme, stiffness, truncatedWells);
  }
  return rec;
}

namespace {

struct StackedNorms {
  double l2 = 0.0;
  double h1 = 0.0;
};

StackedNorms stackedNorms(const std::vector<NodalField>& ref,
                          const std::vector<NodalField>* other, const SparseMatrix& mass,
                          const SparseMatrix& stiff) {
  StackedNorms out;
  double m2 = 0.0, k2 = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    std::vector<double> v = ref[i].v;
    if (other)
      for (size_t j = 0; j < v.size(); ++j) v[j] -= (*other)[i][j];
    m2 += mass.bilinear(v, v);
    k2 += stiff.bilinear(v, v);
  }
  out.l2 = std::sqrt(std::max(0.0, m2));
  out.h1 = std::sqrt(std::max(0.0, m2 + k2));
  return out;
}

}  // namespace

EocTable eoc(const PhaseState& reference, const std::vector<std::pair<double, PhaseState>>& runs) {
  const Mesh& mesh = *reference.mesh;
  const SparseMatrix mass = assembleMass(mesh);
  const SparseMatrix stiff = assembleStiffness(mesh);

  const StackedNorms phiRef = stackedNorms(reference.phi, nullptr, mass, stiff);
  const StackedNorms muRef = stackedNorms(reference.mu, nullptr, mass, stiff);
  if (phiRef.l2 == 0.0 || muRef.l2 == 0.0)
    throw EocError("eoc: reference norm is zero, rates undefined");

  std::vector<std::pair<double, PhaseState>> sorted;
  for (const auto& r : runs) sorted.emplace_back(r.first, r.second);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  EocTable table;
  for (const auto& [dt, state] : sorted) {
    if (state.mesh->numVertices() != mesh.numVertices())
      throw EocError("eoc: run mesh does not match reference mesh");
    if (std::abs(state.t - reference.t) > 1e-10 * std::max(1.0, std::abs(reference.t)))
      throw EocError("eoc: run final time does not match reference");
    EocRow row;
    row.dt = dt;
    const StackedNorms ePhi = stackedNorms(reference.phi, &state.phi, mass, stiff);
    const StackedNorms eMu = stackedNorms(reference.mu, &state.mu, mass, stiff);
    row.e2Phi = ePhi.l2 / phiRef.l2;
    row.e1Phi = ePhi.h1 / phiRef.h1;
    row.e2Mu = eMu.l2 / muRef.l2;
    row.e1Mu = eMu.h1 / muRef.h1;
    if (!table.rows.empty()) {
      const EocRow& prev = table.rows.back();
      const double logDt = std::log(prev.dt / row.dt);
      auto rate = [logDt](double ePrev, double eCur) {
        return std::log(ePrev / eCur) / logDt;
      };
      row.r2Phi = rate(prev.e2Phi, row.e2Phi);
      row.r1Phi = rate(prev.e1Phi, row.e1Phi);
      row.r2Mu = rate(prev.e2Mu, row.e2Mu);
      row.r1Mu = rate(prev.e1Mu, row.e1Mu);
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace triphase
