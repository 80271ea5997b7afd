#include "stokesdpg/quadrature.hpp"

#include <string>

#include "stokesdpg/errors.hpp"

namespace stokesdpg {

#include "quadrature_tables.inc"

namespace {

QuadRule from_tri_table(const double* tab, int n, int exactness) {
  QuadRule r;
  r.exactness = exactness;
  r.points.reserve(n);
  r.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    r.points.push_back({tab[3 * i], tab[3 * i + 1]});
    r.weights.push_back(tab[3 * i + 2]);
  }
  return r;
}

}  // namespace

QuadRule tri_rule(int exactness) {
  if (exactness > 12) {
    throw UnsupportedDegreeError("tri_rule: exactness " +
                                 std::to_string(exactness) +
                                 " above embedded tables (max 12)");
  }
  if (exactness <= 2) return from_tri_table(kTri2, 4, 2);
  if (exactness <= 4) return from_tri_table(kTri4, 9, 4);
  if (exactness <= 6) return from_tri_table(kTri6, 16, 6);
  if (exactness <= 8) return from_tri_table(kTri8, 25, 8);
  if (exactness <= 10) return from_tri_table(kTri10, 36, 10);
  return from_tri_table(kTri12, 49, 12);
}

QuadRule edge_rule(int n_points) {
  static const double* tables[10] = {kGauss1, kGauss2, kGauss3, kGauss4,
                                     kGauss5, kGauss6, kGauss7, kGauss8,
                                     kGauss9, kGauss10};
  if (n_points < 1 || n_points > 10) {
    throw UnsupportedDegreeError("edge_rule: n_points must be in 1..10");
  }
  const double* tab = tables[n_points - 1];
  QuadRule r;
  r.exactness = 2 * n_points - 1;
  for (int i = 0; i < n_points; ++i) {
    r.points.push_back({tab[2 * i], 0.0});
    r.weights.push_back(tab[2 * i + 1]);
  }
  return r;
}

const QuadRule& default_tri_rule() {
  static const QuadRule r = tri_rule(10);
  return r;
}

const QuadRule& default_edge_rule() {
  static const QuadRule r = edge_rule(6);
  return r;
}

}  // namespace stokesdpg
