#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace triphase {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Rect {
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

class MeshError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Structured triangulation of an axis-aligned rectangle. Each grid cell is
/// split along its lower-left to upper-right diagonal into two CCW triangles.
/// Vertices are numbered lexicographically: v = j*(nx+1) + i.
struct Mesh {
  Rect domain;
  int nx = 0;
  int ny = 0;
  double h = 0.0;  // characteristic size max(dx, dy)
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundaryNodes;  // sorted, unique

  int numVertices() const { return static_cast<int>(vertices.size()); }
  int numTriangles() const { return static_cast<int>(triangles.size()); }

  double triangleArea(int t) const;
  /// Gradients of the three P1 barycentric basis functions on triangle t,
  /// constant per triangle.
  std::array<Vec2, 3> barycentricGradients(int t) const;
};

Mesh buildStructuredMesh(const Rect& domain, int nx, int ny);

}  // namespace triphase
