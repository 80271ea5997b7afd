#pragma once

#include <vector>

#include "stokesdpg/geometry.hpp"

namespace stokesdpg {

// Quadrature rule on the reference triangle {x,y >= 0, x+y <= 1} or, for
// edge rules, on [0,1] (the y component of the points is then zero).
struct QuadRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness = 0;
};

// Smallest embedded triangle rule integrating total degree <= exactness
// exactly.  Supported up to exactness 12.
QuadRule tri_rule(int exactness);

// Gauss-Legendre rule with n points on [0,1]; exact to degree 2n-1, n in 1..10.
QuadRule edge_rule(int n_points);

// Defaults used by the assembly (volume exactness 10, 6-point edge Gauss).
const QuadRule& default_tri_rule();
const QuadRule& default_edge_rule();

}  // namespace stokesdpg
