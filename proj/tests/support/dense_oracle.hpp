#pragma once

// Independent dense brute-force implementation of the decoupled and coupled
// schemes, used as the oracle by both the unit and the acceptance suites.
// Separate quadrature (collapsed 5x5 Gauss from hardcoded 1D nodes), dense
// matrices, hand-rolled Gaussian elimination.

#include <cmath>
#include <vector>

#include "triphase/schemes.hpp"

namespace triphase::oracle {

struct DensePoint {
  double l[3];
  double w;
};

inline std::vector<DensePoint> denseRule() {
  // 5-point Gauss-Legendre on [0,1]
  const double x5[5] = {0.5 - 0.9061798459386640 / 2, 0.5 - 0.5384693101056831 / 2, 0.5,
                        0.5 + 0.5384693101056831 / 2, 0.5 + 0.9061798459386640 / 2};
  const double w5[5] = {0.2369268850561891 / 2, 0.4786286704993665 / 2,
                        0.5688888888888889 / 2, 0.4786286704993665 / 2,
                        0.2369268850561891 / 2};
  std::vector<DensePoint> pts;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      DensePoint p;
      const double xi = x5[i], eta = x5[j];
      p.l[1] = xi;
      p.l[2] = eta * (1.0 - xi);
      p.l[0] = 1.0 - p.l[1] - p.l[2];
      p.w = 2.0 * w5[i] * w5[j] * (1.0 - xi);
      pts.push_back(p);
    }
  return pts;
}

using DenseMatrix = std::vector<std::vector<double>>;

inline std::vector<double> denseSolve(DenseMatrix a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

struct DenseWells {
  bool truncated;
  double F(double x) const {
    return (truncated ? truncatedDoubleWell(x) : doubleWell(x)).F;
  }
  double f(double x) const {
    return (truncated ? truncatedDoubleWell(x) : doubleWell(x)).f;
  }
  double fp(double x) const {
    return (truncated ? truncatedDoubleWell(x) : doubleWell(x)).fp;
  }
};

struct DenseOracle {
  const Mesh& mesh;
  std::vector<DensePoint> pts = denseRule();

  double interp(const NodalField& f, int t, const DensePoint& p) const {
    const auto& tri = mesh.triangles[t];
    return p.l[0] * f[tri[0]] + p.l[1] * f[tri[1]] + p.l[2] * f[tri[2]];
  }

  template <typename G>
  std::vector<double> load(G g) const {
    std::vector<double> out(mesh.numVertices(), 0.0);
    for (int t = 0; t < mesh.numTriangles(); ++t) {
      const double area = mesh.triangleArea(t);
      const auto& tri = mesh.triangles[t];
      for (const auto& p : pts) {
        const double gv = g(t, p);
        for (int a = 0; a < 3; ++a) out[tri[a]] += area * p.w * gv * p.l[a];
      }
    }
    return out;
  }

  template <typename W>
  DenseMatrix weightedMass(W w) const {
    DenseMatrix m(mesh.numVertices(), std::vector<double>(mesh.numVertices(), 0.0));
    for (int t = 0; t < mesh.numTriangles(); ++t) {
      const double area = mesh.triangleArea(t);
      const auto& tri = mesh.triangles[t];
      for (const auto& p : pts) {
        const double wv = w(t, p);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            m[tri[a]][tri[b]] += area * p.w * wv * p.l[a] * p.l[b];
      }
    }
    return m;
  }

  DenseMatrix mass() const {
    return weightedMass([](int, const DensePoint&) { return 1.0; });
  }

  DenseMatrix stiffness() const {
    DenseMatrix m(mesh.numVertices(), std::vector<double>(mesh.numVertices(), 0.0));
    for (int t = 0; t < mesh.numTriangles(); ++t) {
      const double area = mesh.triangleArea(t);
      const auto g = mesh.barycentricGradients(t);
      const auto& tri = mesh.triangles[t];
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          m[tri[a]][tri[b]] += area * (g[a].x * g[b].x + g[a].y * g[b].y);
    }
    return m;
  }
};

inline std::vector<double> matVec(const DenseMatrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline PhaseState denseDecoupledStep(const PhaseState& state, const ModelParams& params, double dt,
                              const std::vector<double>& tau, bool truncated) {
  const Mesh& mesh = *state.mesh;
  const int nv = mesh.numVertices();
  const int n = state.n();
  DenseOracle oracle{mesh};
  const DenseWells wells{truncated};
  const DenseMatrix mass = oracle.mass();
  const DenseMatrix stiff = oracle.stiffness();
  const double eps = params.epsilon;
  const double lam = params.lambda;

  PhaseState next = state;
  next.t = state.t + dt;
  next.stepTau = tau;
  next.muValid = true;

  NodalField constraintField(nv, -1.0);
  for (int i = 0; i < n; ++i)
    for (int v = 0; v < nv; ++v) constraintField[v] += state.phi[i][v];
  const std::vector<double> penaltyLoad = oracle.load(
      [&](int t, const DensePoint& p) { return oracle.interp(constraintField, t, p); });

  for (int i = 0; i < n; ++i) {
    const double sigma = params.spreading.sigma[i];
    const double mob = params.mobility[i];

    auto weight = [&](int t, const DensePoint& p) {
      double w = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double ph = oracle.interp(j < i ? next.phi[j] : state.phi[j], t, p);
        w *= ph * ph;
      }
      return w;
    };
    const DenseMatrix wLam = oracle.weightedMass(weight);
    const DenseMatrix wFp = oracle.weightedMass([&](int t, const DensePoint& p) {
      return wells.fp(oracle.interp(state.phi[i], t, p));
    });
    const std::vector<double> fLoad = oracle.load([&](int t, const DensePoint& p) {
      return wells.f(oracle.interp(state.phi[i], t, p));
    });

    DenseMatrix a(2 * nv, std::vector<double>(2 * nv, 0.0));
    std::vector<double> rhs(2 * nv, 0.0);
    for (int r = 0; r < nv; ++r) {
      for (int c = 0; c < nv; ++c) {
        a[r][c] = mass[r][c] / dt;
        a[r][nv + c] = mob * stiff[r][c];
        a[nv + r][c] = (0.375 * eps * sigma + tau[i] * dt) * stiff[r][c] +
                       (12.0 * params.bigLambda / eps) * wLam[r][c] +
                       (12.0 * sigma / eps) * wFp[r][c] + 0.5 / lam * mass[r][c];
        a[nv + r][nv + c] = -mass[r][c];
      }
    }
    const auto mPhiOld = matVec(mass, state.phi[i].v);
    const auto kPhiOld = matVec(stiff, state.phi[i].v);
    const auto wPhiOld = matVec(wLam, state.phi[i].v);
    const auto fpPhiOld = matVec(wFp, state.phi[i].v);
    for (int r = 0; r < nv; ++r) {
      rhs[r] = mPhiOld[r] / dt;
      rhs[nv + r] = (tau[i] * dt - 0.375 * eps * sigma) * kPhiOld[r] -
                    (12.0 * params.bigLambda / eps) * wPhiOld[r] -
                    (24.0 * sigma / eps) * fLoad[r] + (12.0 * sigma / eps) * fpPhiOld[r] -
                    penaltyLoad[r] / lam + 0.5 / lam * mPhiOld[r];
    }
    for (int j = 0; j < i; ++j) {
      std::vector<double> dphi(nv);
      for (int v = 0; v < nv; ++v) dphi[v] = next.phi[j][v] - state.phi[j][v];
      const auto mD = matVec(mass, dphi);
      for (int r = 0; r < nv; ++r) rhs[nv + r] -= mD[r] / lam;
    }

    const auto x = denseSolve(a, rhs);
    for (int v = 0; v < nv; ++v) {
      next.phi[i][v] = x[v];
      next.mu[i][v] = x[nv + v];
    }
  }
  return next;
}

inline PhaseState denseCoupledStep(const PhaseState& state, const ModelParams& params, double dt,
                            const std::vector<double>& tau) {
  const Mesh& mesh = *state.mesh;
  const int nv = mesh.numVertices();
  DenseOracle oracle{mesh};
  const DenseWells wells{false};
  const DenseMatrix mass = oracle.mass();
  const DenseMatrix stiff = oracle.stiffness();
  const double eps = params.epsilon;
  const double lam = params.lambda;

  NodalField constraintField(nv, -1.0);
  for (int i = 0; i < 3; ++i)
    for (int v = 0; v < nv; ++v) constraintField[v] += state.phi[i][v];
  const std::vector<double> penaltyLoad = oracle.load(
      [&](int t, const DensePoint& p) { return oracle.interp(constraintField, t, p); });

  DenseMatrix a(6 * nv, std::vector<double>(6 * nv, 0.0));
  std::vector<double> rhs(6 * nv, 0.0);

  auto hW = [&](int i, int j) {
    return oracle.weightedMass([&](int t, const DensePoint& p) {
      const double p1 = oracle.interp(state.phi[0], t, p);
      const double p2 = oracle.interp(state.phi[1], t, p);
      const double p3 = oracle.interp(state.phi[2], t, p);
      return f123Hessian(p1, p2, p3)[i][j];
    });
  };

  for (int i = 0; i < 3; ++i) {
    const double sigma = params.spreading.sigma[i];
    const double mob = params.mobility[i];
    const int rowMu = 2 * i * nv;
    const int rowPhi = (2 * i + 1) * nv;

    const DenseMatrix wFp = oracle.weightedMass([&](int t, const DensePoint& p) {
      return wells.fp(oracle.interp(state.phi[i], t, p));
    });
    const std::vector<double> fLoad = oracle.load([&](int t, const DensePoint& p) {
      return wells.f(oracle.interp(state.phi[i], t, p));
    });
    const std::vector<double> f123Load = oracle.load([&](int t, const DensePoint& p) {
      const double p1 = oracle.interp(state.phi[0], t, p);
      const double p2 = oracle.interp(state.phi[1], t, p);
      const double p3 = oracle.interp(state.phi[2], t, p);
      return f123Grad(p1, p2, p3).grad[i];
    });

    for (int r = 0; r < nv; ++r) {
      for (int c = 0; c < nv; ++c) {
        a[rowMu + r][2 * i * nv + c] = mass[r][c] / dt;
        a[rowMu + r][(2 * i + 1) * nv + c] = mob * stiff[r][c];
        a[rowPhi + r][2 * i * nv + c] +=
            (0.375 * eps * sigma + tau[i] * dt) * stiff[r][c] +
            (12.0 * sigma / eps) * wFp[r][c];
        a[rowPhi + r][(2 * i + 1) * nv + c] = -mass[r][c];
      }
    }
    for (int j = 0; j < 3; ++j) {
      const DenseMatrix wh = hW(i, j);
      for (int r = 0; r < nv; ++r)
        for (int c = 0; c < nv; ++c)
          a[rowPhi + r][2 * j * nv + c] +=
              (12.0 * params.bigLambda / eps) * wh[r][c] + 0.5 / lam * mass[r][c];
    }

    const auto mPhiOld = matVec(mass, state.phi[i].v);
    const auto kPhiOld = matVec(stiff, state.phi[i].v);
    const auto fpPhiOld = matVec(wFp, state.phi[i].v);
    for (int r = 0; r < nv; ++r) {
      rhs[rowMu + r] = mPhiOld[r] / dt;
      rhs[rowPhi + r] = (tau[i] * dt - 0.375 * eps * sigma) * kPhiOld[r] -
                        (24.0 * sigma / eps) * fLoad[r] + (12.0 * sigma / eps) * fpPhiOld[r] -
                        (24.0 * params.bigLambda / eps) * f123Load[r] - penaltyLoad[r] / lam;
    }
    for (int j = 0; j < 3; ++j) {
      const DenseMatrix wh = hW(i, j);
      const auto whPhi = matVec(wh, state.phi[j].v);
      const auto mPhiJ = matVec(mass, state.phi[j].v);
      for (int r = 0; r < nv; ++r)
        rhs[rowPhi + r] +=
            (12.0 * params.bigLambda / eps) * whPhi[r] + 0.5 / lam * mPhiJ[r];
    }
  }

  const auto x = denseSolve(a, rhs);
  PhaseState next = state;
  next.t = state.t + dt;
  next.stepTau = tau;
  next.muValid = true;
  for (int i = 0; i < 3; ++i)
    for (int v = 0; v < nv; ++v) {
      next.phi[i][v] = x[2 * i * nv + v];
      next.mu[i][v] = 2.0 * x[(2 * i + 1) * nv + v] - state.mu[i][v];
    }
  return next;
}


}  // namespace triphase::oracle
