#pragma once

#include <vector>

namespace triphase {

/// Quadrature rule on the reference triangle in barycentric coordinates.
/// Weights sum to one; physical integrals scale by the triangle area.
struct QuadRule {
  struct Point {
    double l1, l2, l3;  // barycentric coordinates
    double w;           // weight, relative to unit total
  };
  std::vector<Point> points;
  int size() const { return static_cast<int>(points.size()); }
};

/// Classic 3-point mid-edge rule, exact for total degree 2.
const QuadRule& midEdgeRule();

/// Collapsed (Duffy) tensor Gauss rule with n*n points, exact for polynomials
/// of total degree <= 2n-2 on the triangle.
const QuadRule& collapsedGaussRule(int n);

/// Rule used for all nonlinear volume terms of the scalar solver
/// (degree-6 exact).
const QuadRule& potentialRule();

/// Rule used for mini-element flow assembly (degree-8 exact).
const QuadRule& flowRule();

/// Rule used when projecting analytic initial data (degree-10 exact).
const QuadRule& projectionRule();

}  // namespace triphase
