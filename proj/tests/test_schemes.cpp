#include <doctest.h>

#include <cmath>
#include <random>

#include "support/dense_oracle.hpp"

#include "triphase/benchmarks.hpp"
#include "triphase/schemes.hpp"

using namespace triphase;

namespace {

using namespace triphase::oracle;

PhaseState manufacturedState(std::shared_ptr<const Mesh> mesh, int n = 3) {
  // smooth nodal data strictly inside (0,1) so both well families coincide
  std::vector<NodalField> phi(n, NodalField(mesh->numVertices()));
  for (int v = 0; v < mesh->numVertices(); ++v) {
    const double x = mesh->vertices[v].x, y = mesh->vertices[v].y;
    phi[0][v] = 0.35 + 0.2 * std::sin(M_PI * x) * std::cos(M_PI * y);
    phi[1][v] = 0.3 + 0.15 * std::cos(M_PI * x);
    for (int i = 2; i < n - 1; ++i) phi[i][v] = 0.15 + 0.05 * std::sin((i + 1) * x + y);
    double s = 1.0;
    for (int i = 0; i < n - 1; ++i) s -= phi[i][v];
    // deliberately off the partition of unity so penalty terms are exercised
    phi[n - 1][v] = s + 0.04 * std::sin(2.0 * x + y);
  }
  PhaseState s = initStateNodal(std::move(mesh), std::move(phi));
  for (int i = 0; i < n; ++i)
    for (int v = 0; v < s.mesh->numVertices(); ++v)
      s.mu[i][v] = 0.1 * std::cos((i + 1) * s.mesh->vertices[v].x);
  s.muValid = true;
  return s;
}

ModelParams oracleParams() {
  ModelParams p;
  p.epsilon = 0.25;
  p.lambda = 1e-2;
  p.bigLambda = 2.0;
  p.spreading = SpreadingCoefficients::fromValues({0.4, 1.6, 1.2});
  p.mobility = {1e-2, 2e-2, 3e-2};
  return p;
}

double maxDiff(const PhaseState& a, const PhaseState& b) {
  double m = 0.0;
  for (int i = 0; i < a.n(); ++i)
    for (int v = 0; v < a.phi[i].size(); ++v) {
      m = std::max(m, std::abs(a.phi[i][v] - b.phi[i][v]));
      m = std::max(m, std::abs(a.mu[i][v] - b.mu[i][v]));
    }
  return m;
}

}  // namespace

TEST_CASE("dense brute-force oracle: decoupled schemes on the 2x2 mesh") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 2, 2));
  const ModelParams params = oracleParams();
  const double dt = 1e-3;
  const std::vector<double> tau{0.3, 0.7, 1.1};

  PhaseState state = manufacturedState(mesh);
  SchemeConfig config;
  config.dt = dt;
  config.tauMode = TauMode::Explicit;
  ModelParams pTau = params;
  pTau.tau = tau;

  SUBCASE("truncated variant") {
    SchemeWorkspace ws(mesh);
    config.scheme = SchemeId::TD1;
    const PhaseState impl = td1Step(state, pTau, config, ws);
    const PhaseState ref = denseDecoupledStep(state, params, dt, tau, true);
    CHECK(maxDiff(impl, ref) < 1e-10);
  }
  SUBCASE("non-truncated variant") {
    SchemeWorkspace ws(mesh);
    config.scheme = SchemeId::NTD1;
    const PhaseState impl = ntd1Step(state, pTau, config, ws);
    const PhaseState ref = denseDecoupledStep(state, params, dt, tau, false);
    CHECK(maxDiff(impl, ref) < 1e-10);
  }
  SUBCASE("n-component engine at n = 3 matches the same oracle") {
    SchemeWorkspace ws(mesh);
    config.scheme = SchemeId::NCOMP;
    config.truncatedPotential = false;
    const PhaseState impl = ncompStep(state, pTau, config, ws);
    const PhaseState ref = denseDecoupledStep(state, params, dt, tau, false);
    CHECK(maxDiff(impl, ref) < 1e-10);
  }
}

TEST_CASE("dense brute-force oracle: coupled second-order scheme") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 2, 2));
  const ModelParams params = oracleParams();
  const double dt = 1e-3;
  const std::vector<double> tau{0.2, 0.4, 0.6};

  PhaseState state = manufacturedState(mesh);
  SchemeConfig config;
  config.scheme = SchemeId::NTC2;
  config.dt = dt;
  config.tauMode = TauMode::Explicit;
  ModelParams pTau = params;
  pTau.tau = tau;

  SchemeWorkspace ws(mesh);
  const PhaseState impl = ntc2Step(state, pTau, config, ws);
  const PhaseState ref = denseCoupledStep(state, params, dt, tau);
  CHECK(maxDiff(impl, ref) < 1e-10);
}

TEST_CASE("initial states") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 8, 8));
  ModelParams params = oracleParams();

  SUBCASE("projection of constants is nodal-exact") {
    std::vector<std::function<double(double, double)>> ics = {
        [](double, double) { return 0.25; }, [](double, double) { return 0.5; },
        [](double, double) { return 0.25; }};
    const PhaseState s = initState(mesh, ics, params);
    for (int v = 0; v < mesh->numVertices(); ++v) {
      CHECK(s.phi[0][v] == doctest::Approx(0.25).epsilon(1e-11));
      CHECK(s.phi[1][v] == doctest::Approx(0.5).epsilon(1e-11));
    }
    CHECK_FALSE(s.muValid);
  }
  SUBCASE("lens profiles sum to one at every node") {
    auto lensMesh =
        std::make_shared<const Mesh>(buildStructuredMesh({-0.25, 0.25, -0.1, 0.15}, 20, 10));
    params.epsilon = 1e-2;
    const PhaseState s = initState(lensMesh, analyticIc(BenchmarkId::Lens, params.epsilon),
                                   params);
    for (int v = 0; v < lensMesh->numVertices(); ++v) {
      const double sum = s.phi[0][v] + s.phi[1][v] + s.phi[2][v];
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("seeded random states are reproducible") {
    const Mesh& m = *mesh;
    const auto a = randomIc(BenchmarkId::Spinodal2, m, 42);
    const auto b = randomIc(BenchmarkId::Spinodal2, m, 42);
    const auto c = randomIc(BenchmarkId::Spinodal2, m, 43);
    double sumA = 0.0;
    bool allEqual = true, anyDiff = false;
    for (int i = 0; i < 3; ++i)
      for (int v = 0; v < m.numVertices(); ++v) {
        sumA += a[i][v];
        allEqual = allEqual && a[i][v] == b[i][v];
        anyDiff = anyDiff || a[i][v] != c[i][v];
      }
    CHECK(allEqual);
    CHECK(anyDiff);
    for (int v = 0; v < m.numVertices(); ++v)
      CHECK(a[0][v] + a[1][v] + a[2][v] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("pure-phase constants are fixed points of every scheme") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 4, 4));
  ModelParams params = oracleParams();
  std::vector<NodalField> phi{NodalField(mesh->numVertices(), 1.0),
                              NodalField(mesh->numVertices(), 0.0),
                              NodalField(mesh->numVertices(), 0.0)};
  const PhaseState state = initStateNodal(mesh, phi);

  for (SchemeId id : {SchemeId::TD1, SchemeId::NTD1, SchemeId::NTC2, SchemeId::NCOMP}) {
    SchemeWorkspace ws(mesh);
    SchemeConfig config;
    config.scheme = id;
    config.dt = 1e-3;
    const PhaseState next = advance(state, params, config, ws);
    for (int i = 0; i < 3; ++i)
      for (int v = 0; v < mesh->numVertices(); ++v)
        CHECK(std::abs(next.phi[i][v] - state.phi[i][v]) < 1e-10);
  }
}

TEST_CASE("conservation of per-phase volumes") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 8, 8));
  const ModelParams params = oracleParams();
  const double area = 1.0;
  PhaseState state = manufacturedState(mesh);
  for (SchemeId id : {SchemeId::TD1, SchemeId::NTD1, SchemeId::NTC2}) {
    SchemeWorkspace ws(mesh);
    SchemeConfig config;
    config.scheme = id;
    config.dt = 1e-3;
    PhaseState cur = state;
    for (int step = 0; step < 5; ++step) {
      const PhaseState next = advance(cur, params, config, ws);
      for (int i = 0; i < 3; ++i)
        CHECK(std::abs(integrate(*mesh, next.phi[i]) - integrate(*mesh, cur.phi[i])) <=
              1e-10 * area);
      cur = next;
    }
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(integrate(*mesh, cur.phi[i]) - state.initialVolumes[i]) <= 1e-9 * area);
  }
}

TEST_CASE("truncated and plain decoupled schemes agree on [0,1]-confined states") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 6, 6));
  const ModelParams params = oracleParams();
  ModelParams pTau = params;
  pTau.tau = {0.5, 0.5, 0.5};
  const PhaseState state = manufacturedState(mesh);
  SchemeConfig config;
  config.dt = 5e-4;
  config.tauMode = TauMode::Explicit;

  SchemeWorkspace ws1(mesh), ws2(mesh);
  const PhaseState a = td1Step(state, pTau, config, ws1);
  const PhaseState b = ntd1Step(state, pTau, config, ws2);
  CHECK(maxDiff(a, b) < 1e-12);
}

TEST_CASE("four and two component generalizations") {
  SUBCASE("four-component spinodal conserves every volume") {
    auto mesh = std::make_shared<const Mesh>(
        buildStructuredMesh({-0.125, 0.125, -0.125, 0.125}, 8, 8));
    ModelParams params;
    params.epsilon = 1e-2;
    params.lambda = 1e-4;
    params.bigLambda = 7.0;
    params.spreading = SpreadingCoefficients::fromValues({1.0, 1.0, 1.0, 4.0});
    params.mobility.assign(4, 1e-3);
    const PhaseState state =
        initStateNodal(mesh, randomIc(BenchmarkId::Spinodal4, *mesh, 7));
    SchemeWorkspace ws(mesh);
    SchemeConfig config;
    config.scheme = SchemeId::NCOMP;
    config.dt = 1e-4;
    PhaseState cur = state;
    for (int step = 0; step < 3; ++step) {
      const PhaseState next = ncompStep(cur, params, config, ws);
      for (int i = 0; i < 4; ++i)
        CHECK(std::abs(integrate(*mesh, next.phi[i]) - integrate(*mesh, cur.phi[i])) <=
              1e-10 * mesh->domain.area());
      cur = next;
    }
  }
  SUBCASE("two components keep the constraint under control") {
    auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 8, 8));
    ModelParams params;
    params.epsilon = 0.1;
    params.lambda = 1e-3;
    params.bigLambda = 0.0;
    params.spreading = SpreadingCoefficients::fromValues({1.0, 1.0});
    params.mobility = {1e-3, 1e-3};
    std::vector<NodalField> phi(2, NodalField(mesh->numVertices()));
    for (int v = 0; v < mesh->numVertices(); ++v) {
      const double x = mesh->vertices[v].x;
      const double y = mesh->vertices[v].y;
      phi[0][v] = 0.5 + 0.4 * std::tanh(10.0 * (x - 0.5));
      // imperfect partition: the penalty has to pull the violation down
      phi[1][v] = 1.0 - phi[0][v] + 0.02 * std::sin(M_PI * x) * std::sin(M_PI * y);
    }
    PhaseState cur = initStateNodal(mesh, phi);
    SchemeWorkspace ws(mesh);
    SchemeConfig config;
    config.scheme = SchemeId::NCOMP;
    config.dt = 1e-4;
    NodalField c0(mesh->numVertices());
    for (int v = 0; v < mesh->numVertices(); ++v)
      c0[v] = cur.phi[0][v] + cur.phi[1][v] - 1.0;
    double prev = norms(*mesh, c0).l2;
    for (int step = 0; step < 5; ++step) {
      cur = ncompStep(cur, params, config, ws);
      NodalField c(mesh->numVertices());
      for (int v = 0; v < mesh->numVertices(); ++v)
        c[v] = cur.phi[0][v] + cur.phi[1][v] - 1.0;
      const double now = norms(*mesh, c).l2;
      CHECK(now <= prev * (1.0 + 1e-8) + 1e-12);
      prev = now;
    }
  }
}

TEST_CASE("run loop semantics") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 4, 4));
  const ModelParams params = oracleParams();
  const PhaseState state = manufacturedState(mesh);
  SchemeConfig config;
  config.scheme = SchemeId::NTD1;
  config.dt = 1e-3;

  SUBCASE("zero horizon is the identity") {
    SchemeWorkspace ws(mesh);
    const PhaseState end = run(state, params, config, state.t, ws);
    CHECK(maxDiff(end, state) == 0.0);
  }
  SUBCASE("final step is truncated to land exactly on tEnd") {
    SchemeWorkspace ws(mesh);
    int steps = 0;
    const PhaseState end = run(state, params, config, 2.5e-3, ws,
                               [&](int, const PhaseState&, const PhaseState&) { ++steps; });
    CHECK(steps == 3);
    CHECK(end.t == doctest::Approx(2.5e-3).epsilon(1e-14));
  }
  SUBCASE("identical runs are bitwise identical") {
    SchemeWorkspace ws1(mesh), ws2(mesh);
    const PhaseState a = run(state, params, config, 3e-3, ws1);
    const PhaseState b = run(state, params, config, 3e-3, ws2);
    CHECK(maxDiff(a, b) == 0.0);
  }
}

TEST_CASE("coupled scheme is equivariant under phase relabeling") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 4, 4));
  ModelParams params = oracleParams();
  const PhaseState state = manufacturedState(mesh);

  SchemeConfig config;
  config.scheme = SchemeId::NTC2;
  config.dt = 1e-3;
  config.tauMode = TauMode::Explicit;
  params.tau = {0.2, 0.4, 0.6};

  SchemeWorkspace ws(mesh);
  const PhaseState base = ntc2Step(state, params, config, ws);

  const int perm[3] = {2, 0, 1};
  PhaseState permState = state;
  ModelParams permParams = params;
  for (int i = 0; i < 3; ++i) {
    permState.phi[i] = state.phi[perm[i]];
    permState.mu[i] = state.mu[perm[i]];
    permState.initialVolumes[i] = state.initialVolumes[perm[i]];
    permParams.spreading.sigma[i] = params.spreading.sigma[perm[i]];
    permParams.mobility[i] = params.mobility[perm[i]];
    permParams.tau[i] = params.tau[perm[i]];
  }
  SchemeWorkspace ws2(mesh);
  const PhaseState permBase = ntc2Step(permState, permParams, config, ws2);
  for (int i = 0; i < 3; ++i)
    for (int v = 0; v < mesh->numVertices(); ++v) {
      CHECK(permBase.phi[i][v] == doctest::Approx(base.phi[perm[i]][v]).epsilon(1e-11));
      CHECK(permBase.mu[i][v] == doctest::Approx(base.mu[perm[i]][v]).epsilon(1e-11));
    }
}

TEST_CASE("explicit tau below threshold only warns") {
  auto mesh = std::make_shared<const Mesh>(buildStructuredMesh({0, 1, 0, 1}, 3, 3));
  ModelParams params = oracleParams();
  params.tau = {0.0, 0.0, 0.0};
  const PhaseState state = manufacturedState(mesh);
  SchemeConfig config;
  config.scheme = SchemeId::TD1;
  config.dt = 1e-4;
  config.tauMode = TauMode::Explicit;
  SchemeWorkspace ws(mesh);
  CHECK_NOTHROW(run(state, params, config, 2e-4, ws));
}
