#include <doctest.h>

#include <cmath>

#include "triphase/benchmarks.hpp"
#include "triphase/diagnostics.hpp"
#include "triphase/quadrature.hpp"

using namespace triphase;

namespace {

PhaseState lensState(std::shared_ptr<const Mesh> mesh, const ModelParams& params) {
  return initState(mesh, analyticIc(BenchmarkId::Lens, params.epsilon), params);
}

ModelParams lensParams() {
  ModelParams p;
  p.epsilon = 2.5e-2;
  p.lambda = 1e-4;
  p.bigLambda = 7.0;
  p.spreading = SpreadingCoefficients::fromValues({1.0, 1.0, 1.0});
  p.mobility = {1e-3, 1e-3, 1e-3};
  return p;
}

// independent energy evaluation with a finer quadrature rule
double refinedEnergy(const PhaseState& s, const ModelParams& params, bool truncated) {
  const Mesh& mesh = *s.mesh;
  const QuadRule& rule = collapsedGaussRule(8);
  const SparseMatrix stiff = assembleStiffness(mesh);
  double cap = 0.0;
  for (int i = 0; i < s.n(); ++i)
    cap += 0.375 * params.epsilon * params.spreading.sigma[i] *
           stiff.bilinear(s.phi[i].v, s.phi[i].v);
  double pot = 0.0;
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const double area = mesh.triangleArea(t);
    const auto& tri = mesh.triangles[t];
    for (const auto& p : rule.points) {
      double wells = 0.0, prod = 1.0, sum = -1.0;
      for (int i = 0; i < s.n(); ++i) {
        const double ph =
            p.l1 * s.phi[i][tri[0]] + p.l2 * s.phi[i][tri[1]] + p.l3 * s.phi[i][tri[2]];
        const WellValues w = truncated ? truncatedDoubleWell(ph) : doubleWell(ph);
        wells += params.spreading.sigma[i] * w.F;
        prod *= ph * ph;
        sum += ph;
      }
      pot += area * p.w *
             ((24.0 / params.epsilon) * (wells + params.bigLambda * 0.5 * prod) +
              0.5 * sum * sum / params.lambda);
    }
  }
  return cap + pot;
}

}  // namespace

TEST_CASE("energy of simple constant states") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 4, 4));

  SUBCASE("pure phase has zero energy") {
    ModelParams p = lensParams();
    std::vector<NodalField> phi{NodalField(mesh->numVertices(), 1.0),
                                NodalField(mesh->numVertices(), 0.0),
                                NodalField(mesh->numVertices(), 0.0)};
    const PhaseState s = initStateNodal(mesh, phi);
    CHECK(energy(s, p, false) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(energy(s, p, true) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  }
  SUBCASE("half-half mixture on the unit square") {
    ModelParams p;
    p.epsilon = 1.0;
    p.lambda = 1.0;
    p.bigLambda = 0.0;
    p.spreading = SpreadingCoefficients::fromValues({1.0, 1.0, 1.0});
    p.mobility = {1.0, 1.0, 1.0};
    std::vector<NodalField> phi{NodalField(mesh->numVertices(), 0.5),
                                NodalField(mesh->numVertices(), 0.5),
                                NodalField(mesh->numVertices(), 0.0)};
    const PhaseState s = initStateNodal(mesh, phi);
    CHECK(energy(s, p, false) == doctest::Approx(0.75).epsilon(1e-13));
  }
}

TEST_CASE("energy matches a quadrature-refinement oracle on the lens state") {
  auto mesh =
      std::make_shared<const Mesh>(buildStructuredMesh({-0.25, 0.25, -0.1, 0.15}, 40, 20));
  const ModelParams params = lensParams();
  const PhaseState s = lensState(mesh, params);
  const double e = energy(s, params, false);
  const double eRef = refinedEnergy(s, params, false);
  CHECK(std::abs(e - eRef) <= 1e-6 * std::abs(eRef));
}

TEST_CASE("truncated energy equals plain energy inside the unit box") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 6, 6));
  const ModelParams params = lensParams();
  std::vector<NodalField> phi(3, NodalField(mesh->numVertices()));
  for (int v = 0; v < mesh->numVertices(); ++v) {
    const double x = mesh->vertices[v].x;
    phi[0][v] = 0.2 + 0.5 * x;
    phi[1][v] = 0.3;
    phi[2][v] = 1.0 - phi[0][v] - phi[1][v];
  }
  const PhaseState s = initStateNodal(mesh, phi);
  CHECK(energy(s, params, true) == doctest::Approx(energy(s, params, false)).epsilon(1e-14));
}

TEST_CASE("numerical dissipation and the discrete energy identities") {
  auto mesh =
      std::make_shared<const Mesh>(buildStructuredMesh({-0.25, 0.25, -0.1, 0.15}, 20, 10));
  const ModelParams params = lensParams();
  const PhaseState initial = lensState(mesh, params);
  const SparseMatrix stiff = assembleStiffness(*mesh);

  SUBCASE("identical states dissipate nothing") {
    PhaseState shifted = initial;
    shifted.t += 1e-4;
    const auto nd = numericalDissipation(initial, shifted, params, SchemeId::TD1);
    CHECK(nd.tnd == doctest::Approx(0.0));
    for (double v : nd.nd) CHECK(v == doctest::Approx(0.0));
  }

  SUBCASE("truncated scheme: exact ledger and signs") {
    SchemeConfig config;
    config.scheme = SchemeId::TD1;
    config.dt = 1e-4;
    SchemeWorkspace ws(mesh);
    PhaseState cur = initial;
    double prevEnergy = energy(cur, params, true, stiff);
    for (int step = 0; step < 8; ++step) {
      const PhaseState next = td1Step(cur, params, config, ws);
      const double e = energy(next, params, true, stiff);
      CHECK(e <= prevEnergy + 1e-12 * std::abs(prevEnergy));

      // the provable nonnegative combination: ND_i could be negative on its
      // own, but with tau at threshold it is dominated by the flux half
      const auto nd = numericalDissipation(cur, next, params, SchemeId::TD1);
      double flux = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double half =
            0.5 * params.mobility[i] * stiff.bilinear(next.mu[i].v, next.mu[i].v);
        flux += 2.0 * half;
        CHECK(nd.nd[i] + nd.tauTerm[i] + half >= -1e-12 * (std::abs(nd.nd[i]) + half + 1.0));
      }

      // delta_t Etrunc + sum M_i |grad mu_i|^2 + TND = 0 holds exactly
      const double dE = (e - prevEnergy) / config.dt;
      const double scale = std::abs(dE) + flux + std::abs(nd.tnd) + 1.0;
      CHECK(std::abs(dE + flux + nd.tnd) <= 1e-9 * scale);

      // the residual form of the law is nonpositive
      const double res = energyLawResidual(cur, next, params, SchemeId::TD1, stiff);
      CHECK(res <= 1e-10 * std::abs(e));

      prevEnergy = e;
      cur = next;
    }
  }

  SUBCASE("coupled scheme: residual plus dissipation vanishes") {
    SchemeConfig config;
    config.scheme = SchemeId::NTC2;
    config.dt = 1e-4;
    SchemeWorkspace ws(mesh);
    PhaseState cur = initial;
    for (int step = 0; step < 6; ++step) {
      const PhaseState next = ntc2Step(cur, params, config, ws);
      const auto nd = numericalDissipation(cur, next, params, SchemeId::NTC2);
      const double res = energyLawResidual(cur, next, params, SchemeId::NTC2, stiff);
      const double scale = std::abs(res) + std::abs(nd.tnd) + 1.0;
      CHECK(std::abs(res + nd.tnd) <= 1e-9 * scale);
      cur = next;
    }
  }

  SUBCASE("equilibrium constant state has zero residual") {
    std::vector<NodalField> phi{NodalField(mesh->numVertices(), 1.0),
                                NodalField(mesh->numVertices(), 0.0),
                                NodalField(mesh->numVertices(), 0.0)};
    PhaseState a = initStateNodal(mesh, phi);
    PhaseState b = a;
    b.t += 1e-4;
    b.muValid = true;
    CHECK(energyLawResidual(a, b, params, SchemeId::NTD1, stiff) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("constraint norms") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 5, 5));
  SUBCASE("exact partition") {
    std::vector<NodalField> phi{NodalField(mesh->numVertices(), 0.2),
                                NodalField(mesh->numVertices(), 0.5),
                                NodalField(mesh->numVertices(), 0.3)};
    const auto cn = constraintNorms(initStateNodal(mesh, phi));
    CHECK(cn.l2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK(cn.linf == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  }
  SUBCASE("constant offset") {
    std::vector<NodalField> phi(3, NodalField(mesh->numVertices(), 0.34));
    const auto cn = constraintNorms(initStateNodal(mesh, phi));
    CHECK(cn.l2 == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(cn.linf == doctest::Approx(0.02).epsilon(1e-12));
  }
}

TEST_CASE("experimental order of convergence harness") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 4, 4));
  std::vector<NodalField> phi(3, NodalField(mesh->numVertices()));
  for (int v = 0; v < mesh->numVertices(); ++v) {
    phi[0][v] = 0.3 + 0.1 * mesh->vertices[v].x;
    phi[1][v] = 0.4;
    phi[2][v] = 1.0 - phi[0][v] - phi[1][v];
  }
  PhaseState ref = initStateNodal(mesh, phi);
  for (int i = 0; i < 3; ++i)
    for (int v = 0; v < mesh->numVertices(); ++v) ref.mu[i][v] = 0.5 + 0.1 * i;
  ref.muValid = true;

  SUBCASE("synthetic quadratic error ladder recovers the exponent") {
    std::vector<std::pair<double, PhaseState>> runs;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      PhaseState s = ref;
      const double c = dt * dt;  // exact power law
      for (int i = 0; i < 3; ++i)
        for (int v = 0; v < mesh->numVertices(); ++v) {
          s.phi[i][v] += c;
          s.mu[i][v] += 2.0 * c;
        }
      runs.emplace_back(dt, s);
    }
    const EocTable t = eoc(ref, runs);
    REQUIRE(t.rows.size() == 3);
    // the perturbations survive one rounding when added to O(1) nodal values,
    // so the recovered exponent is exact to ~1e-10
    for (size_t r = 1; r < t.rows.size(); ++r) {
      CHECK(t.rows[r].r2Phi == doctest::Approx(2.0).epsilon(1e-9));
      CHECK(t.rows[r].r2Mu == doctest::Approx(2.0).epsilon(1e-9));
      CHECK(t.rows[r].r1Phi == doctest::Approx(2.0).epsilon(1e-9));
    }
  }
  SUBCASE("published error pair reproduces the reported rate") {
    // adjacent errors 1.680e-3 and 7.461e-4 between dt = 1e-5 and 5e-6
    const double r = std::log(1.680e-3 / 7.461e-4) / std::log(1e-5 / 5e-6);
    CHECK(r == doctest::Approx(1.171).epsilon(5e-4));
  }
  SUBCASE("identical run has zero errors") {
    std::vector<std::pair<double, PhaseState>> runs{{1e-3, ref}};
    const EocTable t = eoc(ref, runs);
    CHECK(t.rows[0].e2Phi == doctest::Approx(0.0));
    CHECK(t.rows[0].e2Mu == doctest::Approx(0.0));
  }
  SUBCASE("zero reference norm is an error") {
    PhaseState zero = ref;
    for (int i = 0; i < 3; ++i)
      for (int v = 0; v < mesh->numVertices(); ++v) {
        zero.phi[i][v] = 0.0;
        zero.mu[i][v] = 0.0;
      }
    std::vector<std::pair<double, PhaseState>> runs{{1e-3, ref}};
    CHECK_THROWS_AS(eoc(zero, runs), EocError);
  }
}

TEST_CASE("energy stays nonnegative on a lens run with the published Lambda") {
  auto mesh =
      std::make_shared<const Mesh>(buildStructuredMesh({-0.25, 0.25, -0.1, 0.15}, 20, 10));
  const ModelParams params = lensParams();
  SchemeConfig config;
  config.scheme = SchemeId::NTD1;
  config.dt = 1e-4;
  SchemeWorkspace ws(mesh);
  PhaseState cur = lensState(mesh, params);
  for (int step = 0; step < 10; ++step) {
    CHECK(energy(cur, params, false) >= 0.0);
    cur = ntd1Step(cur, params, config, ws);
  }
}
