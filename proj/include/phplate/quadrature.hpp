#pragma once

#include "phplate/types.hpp"

#include <vector>

namespace phplate {

enum class CellKind { Triangle, Square };

/// Quadrature rule on a reference cell: the unit triangle {(0,0),(1,0),(0,1)}
/// or the unit square [0,1]^2. On the square the exactness degree is
/// per-variable, on the triangle it is the total degree.
struct QuadRule {
  CellKind cell = CellKind::Triangle;
  int exactness = 0;
  std::vector<Vec2> points;
  std::vector<double> weights;

  Index size() const { return static_cast<Index>(points.size()); }
  double weight_sum() const;
};

/// Largest exactness degree served by quad_rule().
inline constexpr int kMaxQuadExactness = 30;

/// Nodes and weights of the n-point Gauss-Legendre rule on [0,1].
void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights);

/// Rule integrating polynomials up to the requested degree exactly.
/// Square: tensor Gauss-Legendre. Triangle: collapsed Gauss-Legendre product
/// with the map (u,v) -> (u, v(1-u)) and the Jacobian folded into the weights,
/// so all weights stay positive at every degree.
QuadRule quad_rule(CellKind cell, int exactness);

/// Value of the Legendre polynomial P_n on [-1,1].
double legendre(int n, double x);

} // namespace phplate
