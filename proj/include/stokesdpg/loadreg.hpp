#pragma once

#include <functional>
#include <vector>

#include "stokesdpg/mesh.hpp"
#include "stokesdpg/quadrature.hpp"

namespace stokesdpg {

// Piecewise-P1 field, 3 nodal coefficients per element (vertex order of the
// triangle), discontinuous across elements.
struct PiecewiseP1 {
  std::vector<double> nodal;  // 3 per element

  double eval(const Mesh& m, int elem, Vec2 p) const;
};

// P1 system bi-orthogonal to the interior-vertex hat functions.  On each
// element of the patch around vertex x, psi_x is the patch-averaged local
// dual of the barycentric coordinate of x.
struct DualBasis {
  // For interior vertex v: psi coefficient scale per incident element,
  // psi_x|_T = scale * (3*lam_x - lam_y - lam_z), scale = 3/(m_x*|T|).
  std::vector<int> patch_size;  // per vertex; 0 for boundary vertices
};

DualBasis build_dual_basis(const Mesh& m);

// Nodal values of psi_x on element t (0 unless x is a vertex of t).
void psi_nodal_on_element(const Mesh& m, const DualBasis& db, int x, int t,
                          double out[3]);

// Integral of the hat function eta_x (sum of |T|/3 over the patch).
double hat_integral(const Mesh& m, int x);

// curl w = (dy w, -dx w).  Both loads act through (f, curl w) only.
//
// Applies P_h' to the functional rot f, producing the piecewise-P1
// regularized load J_h' phi + (1 - J_h') B_h' phi with phi = rot f.
PiecewiseP1 apply_Ph_rot(const Mesh& m, const std::function<Vec2(Vec2)>& f,
                         const QuadRule& volume_rule);

// <load, eta_x> for a piecewise-P1 load and the hat function at vertex x.
double pair_with_hat(const Mesh& m, const PiecewiseP1& load, int x);

// (f, curl eta_x) over the patch of x, by quadrature.
double f_curl_hat(const Mesh& m, const std::function<Vec2(Vec2)>& f, int x,
                  const QuadRule& volume_rule);

}  // namespace stokesdpg
