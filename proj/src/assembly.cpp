#include "triphase/assembly.hpp"

#include <algorithm>
#include <cmath>

namespace triphase {

void requireMatch(const Mesh& mesh, const NodalField& f) {
  if (f.size() != mesh.numVertices())
    throw DimensionError("field length does not match mesh vertex count");
}

QuadField evaluateAtQuad(const Mesh& mesh, const QuadRule& rule, const NodalField& f) {
  requireMatch(mesh, f);
  QuadField q;
  q.rule = &rule;
  q.data.resize(static_cast<size_t>(mesh.numTriangles()) * rule.size());
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double f0 = f[tri[0]], f1 = f[tri[1]], f2 = f[tri[2]];
    for (int k = 0; k < rule.size(); ++k) {
      const auto& p = rule.points[k];
      q.at(t, k) = p.l1 * f0 + p.l2 * f1 + p.l3 * f2;
    }
  }
  return q;
}

QuadField evaluateAtQuad(const Mesh& mesh, const QuadRule& rule,
                         const std::function<double(double, double)>& f) {
  QuadField q;
  q.rule = &rule;
  q.data.resize(static_cast<size_t>(mesh.numTriangles()) * rule.size());
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec2& a = mesh.vertices[tri[0]];
    const Vec2& b = mesh.vertices[tri[1]];
    const Vec2& c = mesh.vertices[tri[2]];
    for (int k = 0; k < rule.size(); ++k) {
      const auto& p = rule.points[k];
      const double x = p.l1 * a.x + p.l2 * b.x + p.l3 * c.x;
      const double y = p.l1 * a.y + p.l2 * b.y + p.l3 * c.y;
      q.at(t, k) = f(x, y);
    }
  }
  return q;
}

QuadField constantQuadField(const Mesh& mesh, const QuadRule& rule, double value) {
  QuadField q;
  q.rule = &rule;
  q.data.assign(static_cast<size_t>(mesh.numTriangles()) * rule.size(), value);
  return q;
}

SparseMatrix assembleMass(const Mesh& mesh) {
  CooBuilder coo(mesh.numVertices());
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const double area = mesh.triangleArea(t);
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        coo.add(tri[a], tri[b], area * (a == b ? 1.0 / 6.0 : 1.0 / 12.0));
  }
  return coo.finalize();
}

SparseMatrix assembleStiffness(const Mesh& mesh) {
  CooBuilder coo(mesh.numVertices());
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const double area = mesh.triangleArea(t);
    const auto g = mesh.barycentricGradients(t);
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        coo.add(tri[a], tri[b], area * (g[a].x * g[b].x + g[a].y * g[b].y));
  }
  return coo.finalize();
}

SparseMatrix assembleWeightedMass(const Mesh& mesh, const NodalField& weight) {
  return assembleWeightedMass(mesh, evaluateAtQuad(mesh, potentialRule(), weight));
}

SparseMatrix assembleWeightedMass(const Mesh& mesh, const QuadField& weight) {
  const QuadRule& rule = *weight.rule;
  CooBuilder coo(mesh.numVertices());
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const double area = mesh.triangleArea(t);
    const auto& tri = mesh.triangles[t];
    double local[3][3] = {};
    for (int k = 0; k < rule.size(); ++k) {
      const auto& p = rule.points[k];
      const double lam[3] = {p.l1, p.l2, p.l3};
      const double c = area * p.w * weight.at(t, k);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) local[a][b] += c * lam[a] * lam[b];
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) coo.add(tri[a], tri[b], local[a][b]);
  }
  return coo.finalize();
}

SparseMatrix assembleWeightedStiffness(const Mesh& mesh, const QuadField& weight) {
  const QuadRule& rule = *weight.rule;
  CooBuilder coo(mesh.numVertices());
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const double area = mesh.triangleArea(t);
    const auto g = mesh.barycentricGradients(t);
    const auto& tri = mesh.triangles[t];
    double wsum = 0.0;
    for (int k = 0; k < rule.size(); ++k) wsum += rule.points[k].w * weight.at(t, k);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        coo.add(tri[a], tri[b], area * wsum * (g[a].x * g[b].x + g[a].y * g[b].y));
  }
  return coo.finalize();
}

std::vector<double> assembleLoad(const Mesh& mesh, const QuadField& g) {
  const QuadRule& rule = *g.rule;
  std::vector<double> load(mesh.numVertices(), 0.0);
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const double area = mesh.triangleArea(t);
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < rule.size(); ++k) {
      const auto& p = rule.points[k];
      const double c = area * p.w * g.at(t, k);
      load[tri[0]] += c * p.l1;
      load[tri[1]] += c * p.l2;
      load[tri[2]] += c * p.l3;
    }
  }
  return load;
}

double integrate(const Mesh& mesh, const NodalField& f) {
  requireMatch(mesh, f);
  double s = 0.0;
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    s += mesh.triangleArea(t) * (f[tri[0]] + f[tri[1]] + f[tri[2]]) / 3.0;
  }
  return s;
}

double integrateQuad(const Mesh& mesh, const QuadField& g) {
  const QuadRule& rule = *g.rule;
  double s = 0.0;
  for (int t = 0; t < mesh.numTriangles(); ++t) {
    const double area = mesh.triangleArea(t);
    double local = 0.0;
    for (int k = 0; k < rule.size(); ++k) local += rule.points[k].w * g.at(t, k);
    s += area * local;
  }
  return s;
}

FieldNorms norms(const Mesh& mesh, const NodalField& f, const SparseMatrix& mass,
                 const SparseMatrix& stiffness) {
  requireMatch(mesh, f);
  FieldNorms out;
  const double mm = mass.bilinear(f.v, f.v);
  const double kk = stiffness.bilinear(f.v, f.v);
  out.l2 = std::sqrt(std::max(0.0, mm));
  out.h1 = std::sqrt(std::max(0.0, mm + kk));
  for (double v : f.v) out.linf = std::max(out.linf, std::abs(v));
  return out;
}

FieldNorms norms(const Mesh& mesh, const NodalField& f) {
  return norms(mesh, f, assembleMass(mesh), assembleStiffness(mesh));
}

}  // namespace triphase
