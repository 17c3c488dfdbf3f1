#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace triphase {

class DimensionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Square CSR matrix. Finalized instances store no explicit zeros and keep
/// column indices sorted within each row.
struct SparseMatrix {
  int n = 0;
  std::vector<int> rowPtr;   // size n+1
  std::vector<int> colInd;   // size nnz
  std::vector<double> vals;  // size nnz

  int nnz() const { return static_cast<int>(colInd.size()); }
  double at(int i, int j) const;  // 0 if not stored

  std::vector<double> multiply(const std::vector<double>& x) const;
  /// x^T A y
  double bilinear(const std::vector<double>& x, const std::vector<double>& y) const;
  bool structurallySymmetric() const;
};

/// Accumulates COO triplets and compresses to CSR (duplicates summed,
/// exact zeros dropped).
class CooBuilder {
public:
  explicit CooBuilder(int n) : n_(n) {}
  void add(int i, int j, double v) {
    entries_.push_back({i, j, v});
  }
  int dim() const { return n_; }
  SparseMatrix finalize() const;

private:
  struct Entry {
    int i, j;
    double v;
  };
  int n_;
  std::vector<Entry> entries_;
};

SparseMatrix identityMatrix(int n);
/// A + alpha*B on the union pattern.
SparseMatrix addScaled(const SparseMatrix& a, double alpha, const SparseMatrix& b);

/// Coupled linear system described on a uniform block grid: every block row
/// and column has the same dimension blockDim, and entries reference shared
/// operators with scalar coefficients.
struct BlockSystem {
  struct Entry {
    int blockRow;
    int blockCol;
    const SparseMatrix* op;
    double coeff;
  };
  int blocks = 0;
  int blockDim = 0;
  std::vector<Entry> entries;
  std::vector<double> rhs;  // size blocks*blockDim

  void add(int bi, int bj, const SparseMatrix& op, double coeff) {
    entries.push_back({bi, bj, &op, coeff});
  }
};

/// Monolithic CSR with block-major unknown ordering (block 0 nodes first,
/// then block 1, ...). Returns the matrix; the RHS is already block-major.
SparseMatrix flattenBlockSystem(const BlockSystem& sys);

/// Row/column elimination for Dirichlet constraints: constrained rows become
/// identity rows with the prescribed value on the RHS, and constrained
/// columns are folded into the RHS.
SparseMatrix applyDirichlet(const SparseMatrix& a, std::vector<double>& rhs,
                            const std::vector<std::pair<int, double>>& constraints);

}  // namespace triphase
