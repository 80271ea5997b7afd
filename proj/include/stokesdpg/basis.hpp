#pragma once

#include <span>
#include <vector>

#include "stokesdpg/geometry.hpp"
#include "stokesdpg/quadrature.hpp"

namespace stokesdpg {

// Bernstein basis of total degree k on a physical triangle, tabulated at a
// point set.  Tables are point-major: entry(q, i) = tab[q * dim + i].
struct ScalarBasis {
  int degree = 0;
  int dim = 0;
  int npts = 0;
  std::vector<double> val;
  std::vector<double> gx, gy;
  std::vector<double> hxx, hxy, hyy;

  double v(int q, int i) const { return val[q * dim + i]; }
  Vec2 grad(int q, int i) const { return {gx[q * dim + i], gy[q * dim + i]}; }
  SymTensor hess(int q, int i) const {
    return {hxx[q * dim + i], hyy[q * dim + i], hxy[q * dim + i]};
  }
};

inline int poly_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

// Tabulate at arbitrary physical points.  Throws GeometryError when the
// triangle is degenerate (signed area <= 0).
ScalarBasis tabulate_basis(int degree, std::span<const Vec2> phys_points,
                           const Triangle& tri);

// Tabulate at the physical images of a reference-triangle rule.
ScalarBasis basis_tables(int degree, const QuadRule& rule, const Triangle& tri);

// Physical images of reference rule points under the affine map of tri.
std::vector<Vec2> map_to_physical(const QuadRule& rule, const Triangle& tri);

// divDiv of the symmetric tensor field (scalar basis member i) * sym_unit(alpha)
// at tabulated point q.
inline double div_div(const ScalarBasis& b, int q, int i, int alpha) {
  switch (alpha) {
    case 0: return b.hxx[q * b.dim + i];
    case 1: return b.hyy[q * b.dim + i];
    default: return 2.0 * b.hxy[q * b.dim + i];
  }
}

}  // namespace stokesdpg
