#include "triphase/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace triphase {

double SparseMatrix::at(int i, int j) const {
  for (int k = rowPtr[i]; k < rowPtr[i + 1]; ++k)
    if (colInd[k] == j) return vals[k];
  return 0.0;
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n) throw DimensionError("spmv: dimension mismatch");
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = rowPtr[i]; k < rowPtr[i + 1]; ++k) s += vals[k] * x[colInd[k]];
    y[i] = s;
  }
  return y;
}

double SparseMatrix::bilinear(const std::vector<double>& x, const std::vector<double>& y) const {
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw DimensionError("bilinear: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = rowPtr[i]; k < rowPtr[i + 1]; ++k) s += x[i] * vals[k] * y[colInd[k]];
  return s;
}

bool SparseMatrix::structurallySymmetric() const {
  for (int i = 0; i < n; ++i) {
    for (int k = rowPtr[i]; k < rowPtr[i + 1]; ++k) {
      const int j = colInd[k];
      bool found = false;
      for (int m = rowPtr[j]; m < rowPtr[j + 1]; ++m)
        if (colInd[m] == i) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  }
  return true;
}

SparseMatrix CooBuilder::finalize() const {
  std::vector<int> order(entries_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [this](int a, int b) {
    if (entries_[a].i != entries_[b].i) return entries_[a].i < entries_[b].i;
    return entries_[a].j < entries_[b].j;
  });

  SparseMatrix m;
  m.n = n_;
  m.rowPtr.assign(n_ + 1, 0);
  int lastI = -1, lastJ = -1;
  for (int idx : order) {
    const Entry& e = entries_[idx];
    if (e.i < 0 || e.i >= n_ || e.j < 0 || e.j >= n_)
      throw DimensionError("coo: index out of range");
    if (e.i == lastI && e.j == lastJ) {
      m.vals.back() += e.v;
    } else {
      m.colInd.push_back(e.j);
      m.vals.push_back(e.v);
      m.rowPtr[e.i + 1]++;
      lastI = e.i;
      lastJ = e.j;
    }
  }
  // drop exact zeros left after duplicate summation
  {
    size_t out = 0;
    std::vector<int> rowCount(n_, 0);
    size_t k = 0;
    for (int row = 0; row < n_; ++row) {
      const size_t rowEnd = k + m.rowPtr[row + 1];
      for (; k < rowEnd; ++k) {
        if (m.vals[k] != 0.0) {
          m.colInd[out] = m.colInd[k];
          m.vals[out] = m.vals[k];
          ++out;
          ++rowCount[row];
        }
      }
    }
    m.colInd.resize(out);
    m.vals.resize(out);
    m.rowPtr[0] = 0;
    for (int i = 0; i < n_; ++i) m.rowPtr[i + 1] = m.rowPtr[i] + rowCount[i];
  }
  return m;
}

SparseMatrix identityMatrix(int n) {
  SparseMatrix m;
  m.n = n;
  m.rowPtr.resize(n + 1);
  m.colInd.resize(n);
  m.vals.assign(n, 1.0);
  for (int i = 0; i <= n; ++i) m.rowPtr[i] = i;
  std::iota(m.colInd.begin(), m.colInd.end(), 0);
  return m;
}

SparseMatrix addScaled(const SparseMatrix& a, double alpha, const SparseMatrix& b) {
  if (a.n != b.n) throw DimensionError("addScaled: dimension mismatch");
  CooBuilder coo(a.n);
  for (int i = 0; i < a.n; ++i) {
    for (int k = a.rowPtr[i]; k < a.rowPtr[i + 1]; ++k) coo.add(i, a.colInd[k], a.vals[k]);
    for (int k = b.rowPtr[i]; k < b.rowPtr[i + 1]; ++k)
      coo.add(i, b.colInd[k], alpha * b.vals[k]);
  }
  return coo.finalize();
}

SparseMatrix flattenBlockSystem(const BlockSystem& sys) {
  if (sys.blocks <= 0 || sys.blockDim <= 0)
    throw DimensionError("flatten: empty block grid");
  if (static_cast<int>(sys.rhs.size()) != sys.blocks * sys.blockDim)
    throw DimensionError("flatten: rhs size does not match block grid");
  const int d = sys.blockDim;
  CooBuilder coo(sys.blocks * d);
  for (const auto& e : sys.entries) {
    if (e.blockRow < 0 || e.blockRow >= sys.blocks || e.blockCol < 0 ||
        e.blockCol >= sys.blocks)
      throw DimensionError("flatten: block index out of range");
    const SparseMatrix& op = *e.op;
    if (op.n != d) throw DimensionError("flatten: block operator dimension mismatch");
    const int r0 = e.blockRow * d;
    const int c0 = e.blockCol * d;
    for (int i = 0; i < d; ++i)
      for (int k = op.rowPtr[i]; k < op.rowPtr[i + 1]; ++k)
        coo.add(r0 + i, c0 + op.colInd[k], e.coeff * op.vals[k]);
  }
  return coo.finalize();
}

SparseMatrix applyDirichlet(const SparseMatrix& a, std::vector<double>& rhs,
                            const std::vector<std::pair<int, double>>& constraints) {
  if (static_cast<int>(rhs.size()) != a.n)
    throw DimensionError("dirichlet: rhs dimension mismatch");
  std::vector<char> fixed(a.n, 0);
  std::vector<double> value(a.n, 0.0);
  for (const auto& [dof, val] : constraints) {
    fixed[dof] = 1;
    value[dof] = val;
  }
  CooBuilder coo(a.n);
  for (int i = 0; i < a.n; ++i) {
    if (fixed[i]) {
      coo.add(i, i, 1.0);
      rhs[i] = value[i];
      continue;
    }
    for (int k = a.rowPtr[i]; k < a.rowPtr[i + 1]; ++k) {
      const int j = a.colInd[k];
      if (fixed[j])
        rhs[i] -= a.vals[k] * value[j];
      else
        coo.add(i, j, a.vals[k]);
    }
  }
  return coo.finalize();
}

}  // namespace triphase
