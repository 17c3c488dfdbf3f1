#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "triphase/sparse.hpp"

namespace triphase {

enum class SolverMethod { Direct, BiCGStab };

struct SolverOptions {
  SolverMethod method = SolverMethod::Direct;
  double tol = 1e-10;   // relative residual target
  int maxIterations = 2000;
  bool allowFallback = true;  // retry iteratively if factorization breaks down
};

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), achievedResidual(residual) {}
  double achievedResidual;
};

/// Reusable symbolic factorization keyed on the sparsity pattern; safe to
/// pass across solves with matrices of identical structure.
class SolveCache {
public:
  SolveCache();
  ~SolveCache();
  SolveCache(SolveCache&&) noexcept;
  SolveCache& operator=(SolveCache&&) noexcept;

private:
  friend std::vector<double> solveSparse(const SparseMatrix&, const std::vector<double>&,
                                         const SolverOptions&, SolveCache*);
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Solves Ax = b to ||Ax-b|| <= tol*||b||. Deterministic for a fixed
/// configuration. Throws SolverError carrying the achieved residual on
/// breakdown or non-convergence.
std::vector<double> solveSparse(const SparseMatrix& a, const std::vector<double>& b,
                                const SolverOptions& opts = {}, SolveCache* cache = nullptr);

}  // namespace triphase
