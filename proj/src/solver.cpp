#include "triphase/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>

namespace triphase {

namespace {

using EigenCsc = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

EigenCsc toEigen(const SparseMatrix& a) {
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> trips;
  trips.reserve(a.nnz());
  for (int i = 0; i < a.n; ++i)
    for (int k = a.rowPtr[i]; k < a.rowPtr[i + 1]; ++k)
      trips.emplace_back(i, a.colInd[k], a.vals[k]);
  EigenCsc m(a.n, a.n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

uint64_t patternSignature(const SparseMatrix& a) {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(static_cast<uint64_t>(a.n));
  mix(static_cast<uint64_t>(a.nnz()));
  for (size_t k = 0; k < a.colInd.size(); k += 97) mix(static_cast<uint64_t>(a.colInd[k]));
  for (size_t i = 0; i < a.rowPtr.size(); i += 97) mix(static_cast<uint64_t>(a.rowPtr[i]));
  return h;
}

double residualNorm(const SparseMatrix& a, const std::vector<double>& x,
                    const std::vector<double>& b) {
  const auto ax = a.multiply(x);
  double r2 = 0.0;
  for (int i = 0; i < a.n; ++i) {
    const double r = ax[i] - b[i];
    r2 += r * r;
  }
  return std::sqrt(r2);
}

double vectorNorm(const std::vector<double>& b) {
  double s = 0.0;
  for (double v : b) s += v * v;
  return std::sqrt(s);
}

}  // namespace

struct SolveCache::Impl {
  Eigen::SparseLU<EigenCsc> lu;
  uint64_t signature = 0;
  bool analyzed = false;
};

SolveCache::SolveCache() : impl_(std::make_unique<Impl>()) {}
SolveCache::~SolveCache() = default;
SolveCache::SolveCache(SolveCache&&) noexcept = default;
SolveCache& SolveCache::operator=(SolveCache&&) noexcept = default;

std::vector<double> solveSparse(const SparseMatrix& a, const std::vector<double>& b,
                                const SolverOptions& opts, SolveCache* cache) {
  if (a.n != static_cast<int>(b.size()))
    throw DimensionError("solve: matrix/rhs dimension mismatch");
  const double bnorm = vectorNorm(b);
  const EigenCsc m = toEigen(a);
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), a.n);

  auto finish = [&](const Eigen::VectorXd& x) {
    std::vector<double> out(x.data(), x.data() + x.size());
    const double res = residualNorm(a, out, b);
    if (!(res <= opts.tol * std::max(bnorm, 1e-300)) && bnorm > 0.0)
      throw SolverError("solve: residual above tolerance", res / bnorm);
    return out;
  };

  if (opts.method == SolverMethod::Direct) {
    SolveCache local;
    SolveCache::Impl& c = cache ? *cache->impl_ : *local.impl_;
    const uint64_t sig = patternSignature(a);
    bool ok = true;
    if (!c.analyzed || c.signature != sig) {
      c.lu.analyzePattern(m);
      c.signature = sig;
      c.analyzed = true;
    }
    c.lu.factorize(m);
    ok = c.lu.info() == Eigen::Success;
    if (ok) {
      Eigen::VectorXd x = c.lu.solve(rhs);
      if (c.lu.info() == Eigen::Success) return finish(x);
      ok = false;
    }
    if (!ok && !opts.allowFallback)
      throw SolverError("solve: sparse LU factorization failed", std::nan(""));
    // fall through to the iterative path
  }

  Eigen::BiCGSTAB<EigenCsc, Eigen::IncompleteLUT<double>> it;
  it.setTolerance(opts.tol);
  it.setMaxIterations(opts.maxIterations);
  it.compute(m);
  Eigen::VectorXd x = it.solve(rhs);
  if (it.info() != Eigen::Success) {
    const double res = bnorm > 0.0 ? it.error() : 0.0;
    throw SolverError("solve: iterative solver did not converge", res);
  }
  return finish(x);
}

}  // namespace triphase
