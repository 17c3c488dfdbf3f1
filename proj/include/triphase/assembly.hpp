#pragma once

#include <functional>
#include <vector>

#include "triphase/mesh.hpp"
#include "triphase/quadrature.hpp"
#include "triphase/sparse.hpp"

namespace triphase {

/// One scalar per mesh vertex.
struct NodalField {
  std::vector<double> v;

  NodalField() = default;
  explicit NodalField(int n, double fill = 0.0) : v(n, fill) {}
  int size() const { return static_cast<int>(v.size()); }
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
};

void requireMatch(const Mesh& mesh, const NodalField& f);

/// Values of some integrand at every quadrature point of a fixed rule,
/// laid out triangle-major: q(t, k) = data[t*rule.size() + k].
struct QuadField {
  const QuadRule* rule = nullptr;
  std::vector<double> data;

  double& at(int t, int k) { return data[static_cast<size_t>(t) * rule->size() + k]; }
  double at(int t, int k) const { return data[static_cast<size_t>(t) * rule->size() + k]; }
};

QuadField evaluateAtQuad(const Mesh& mesh, const QuadRule& rule, const NodalField& f);
QuadField evaluateAtQuad(const Mesh& mesh, const QuadRule& rule,
                         const std::function<double(double, double)>& f);
QuadField constantQuadField(const Mesh& mesh, const QuadRule& rule, double value);

/// P1 mass matrix, exact element integration. SPD.
SparseMatrix assembleMass(const Mesh& mesh);
/// P1 stiffness matrix, exact. PSD with constants in the kernel.
SparseMatrix assembleStiffness(const Mesh& mesh);
/// integral of w_h u v with w_h the P1 interpolant of `weight` evaluated at
/// the quadrature points of potentialRule().
SparseMatrix assembleWeightedMass(const Mesh& mesh, const NodalField& weight);
/// integral of w u v with w given pointwise at quadrature points.
SparseMatrix assembleWeightedMass(const Mesh& mesh, const QuadField& weight);
/// integral of w grad(u).grad(v) with w given at quadrature points.
SparseMatrix assembleWeightedStiffness(const Mesh& mesh, const QuadField& weight);
/// Load vector integral of g v, g given at quadrature points.
std::vector<double> assembleLoad(const Mesh& mesh, const QuadField& g);

/// integral of f over the domain: 1^T M f.
double integrate(const Mesh& mesh, const NodalField& f);
/// Quadrature of a pointwise integrand.
double integrateQuad(const Mesh& mesh, const QuadField& g);

struct FieldNorms {
  double l2 = 0.0;
  double h1 = 0.0;
  double linf = 0.0;
};
FieldNorms norms(const Mesh& mesh, const NodalField& f);
FieldNorms norms(const Mesh& mesh, const NodalField& f, const SparseMatrix& mass,
                 const SparseMatrix& stiffness);

}  // namespace triphase
