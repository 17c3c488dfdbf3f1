#include "triphase/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace triphase {

double Mesh::triangleArea(int t) const {
  const auto& tri = triangles[t];
  const Vec2& a = vertices[tri[0]];
  const Vec2& b = vertices[tri[1]];
  const Vec2& c = vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::array<Vec2, 3> Mesh::barycentricGradients(int t) const {
  const auto& tri = triangles[t];
  const Vec2& a = vertices[tri[0]];
  const Vec2& b = vertices[tri[1]];
  const Vec2& c = vertices[tri[2]];
  const double twoA = 2.0 * triangleArea(t);
  // grad lambda_i is the inward normal of the opposite edge over 2|T|
  return {Vec2{(b.y - c.y) / twoA, (c.x - b.x) / twoA},
          Vec2{(c.y - a.y) / twoA, (a.x - c.x) / twoA},
          Vec2{(a.y - b.y) / twoA, (b.x - a.x) / twoA}};
}

Mesh buildStructuredMesh(const Rect& domain, int nx, int ny) {
  if (nx < 1 || ny < 1) throw MeshError("mesh: nx and ny must be at least 1");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
    throw MeshError("mesh: degenerate rectangle");

  Mesh mesh;
  mesh.domain = domain;
  mesh.nx = nx;
  mesh.ny = ny;
  const double dx = domain.width() / nx;
  const double dy = domain.height() / ny;
  mesh.h = std::max(dx, dy);

  mesh.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.push_back({domain.x0 + i * dx, domain.y0 + j * dy});

  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.triangles.reserve(static_cast<size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      // split along the a-c diagonal, both triangles CCW
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }

  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      if (i == 0 || i == nx || j == 0 || j == ny) mesh.boundaryNodes.push_back(vid(i, j));

  return mesh;
}

}  // namespace triphase
