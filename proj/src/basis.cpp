#include "stokesdpg/basis.hpp"

#include <array>
#include <cmath>

#include "stokesdpg/errors.hpp"

namespace stokesdpg {

namespace {

// Multi-indices (i,j,k), i+j+k = n, in a fixed deterministic order.
std::vector<std::array<int, 3>> multi_indices(int n) {
  std::vector<std::array<int, 3>> out;
  for (int i = n; i >= 0; --i)
    for (int j = n - i; j >= 0; --j) out.push_back({i, j, n - i - j});
  return out;
}

double coeff_multinomial(int n, int i, int j, int k) {
  double c = 1.0;
  int num = n;
  for (int m = 1; m <= i; ++m) c *= static_cast<double>(num--) / m;
  for (int m = 1; m <= j; ++m) c *= static_cast<double>(num--) / m;
  (void)k;
  return c;
}

double ipow(double x, int p) {
  double r = 1.0;
  for (int m = 0; m < p; ++m) r *= x;
  return r;
}

}  // namespace

std::vector<Vec2> map_to_physical(const QuadRule& rule, const Triangle& tri) {
  std::vector<Vec2> pts;
  pts.reserve(rule.points.size());
  for (const Vec2& rp : rule.points) {
    pts.push_back(tri[0] + rp.x * (tri[1] - tri[0]) + rp.y * (tri[2] - tri[0]));
  }
  return pts;
}

ScalarBasis tabulate_basis(int degree, std::span<const Vec2> phys_points,
                           const Triangle& tri) {
  const double area2 = cross(tri[1] - tri[0], tri[2] - tri[0]);
  if (!(area2 > 0.0)) {
    throw GeometryError("tabulate_basis: degenerate or misoriented triangle");
  }

  // Barycentric gradients (constant on the element).
  const Vec2 glam[3] = {
      {(tri[1].y - tri[2].y) / area2, (tri[2].x - tri[1].x) / area2},
      {(tri[2].y - tri[0].y) / area2, (tri[0].x - tri[2].x) / area2},
      {(tri[0].y - tri[1].y) / area2, (tri[1].x - tri[0].x) / area2}};

  const auto mi = multi_indices(degree);
  ScalarBasis b;
  b.degree = degree;
  b.dim = static_cast<int>(mi.size());
  b.npts = static_cast<int>(phys_points.size());
  const size_t total = static_cast<size_t>(b.dim) * b.npts;
  b.val.assign(total, 0.0);
  b.gx.assign(total, 0.0);
  b.gy.assign(total, 0.0);
  b.hxx.assign(total, 0.0);
  b.hxy.assign(total, 0.0);
  b.hyy.assign(total, 0.0);

  std::vector<double> cmult(mi.size());
  for (size_t i = 0; i < mi.size(); ++i)
    cmult[i] = coeff_multinomial(degree, mi[i][0], mi[i][1], mi[i][2]);

  for (int q = 0; q < b.npts; ++q) {
    const Vec2 p = phys_points[q];
    double lam[3];
    lam[0] = cross(tri[1] - p, tri[2] - p) / area2;
    lam[1] = cross(tri[2] - p, tri[0] - p) / area2;
    lam[2] = cross(tri[0] - p, tri[1] - p) / area2;

    for (size_t i = 0; i < mi.size(); ++i) {
      const int e[3] = {mi[i][0], mi[i][1], mi[i][2]};
      const double c = cmult[i];

      // Partial derivatives with respect to the barycentric coordinates.
      double d1[3];   // d/dlam_m
      double d2[3][3];  // d2/dlam_m dlam_l
      double base = c;
      for (int m = 0; m < 3; ++m) base *= ipow(lam[m], e[m]);
      for (int m = 0; m < 3; ++m) {
        d1[m] = e[m] > 0 ? c * e[m] * ipow(lam[m], e[m] - 1) *
                               ipow(lam[(m + 1) % 3], e[(m + 1) % 3]) *
                               ipow(lam[(m + 2) % 3], e[(m + 2) % 3])
                         : 0.0;
      }
      for (int m = 0; m < 3; ++m) {
        for (int l = 0; l < 3; ++l) {
          if (m == l) {
            d2[m][l] = e[m] > 1 ? c * e[m] * (e[m] - 1) * ipow(lam[m], e[m] - 2) *
                                      ipow(lam[(m + 1) % 3], e[(m + 1) % 3]) *
                                      ipow(lam[(m + 2) % 3], e[(m + 2) % 3])
                                : 0.0;
          } else {
            const int o = 3 - m - l;
            d2[m][l] = (e[m] > 0 && e[l] > 0)
                           ? c * e[m] * e[l] * ipow(lam[m], e[m] - 1) *
                                 ipow(lam[l], e[l] - 1) * ipow(lam[o], e[o])
                           : 0.0;
          }
        }
      }

      const size_t idx = static_cast<size_t>(q) * b.dim + i;
      b.val[idx] = base;
      double gx = 0.0, gy = 0.0, hxx = 0.0, hxy = 0.0, hyy = 0.0;
      for (int m = 0; m < 3; ++m) {
        gx += d1[m] * glam[m].x;
        gy += d1[m] * glam[m].y;
        for (int l = 0; l < 3; ++l) {
          hxx += d2[m][l] * glam[m].x * glam[l].x;
          hxy += d2[m][l] * glam[m].x * glam[l].y;
          hyy += d2[m][l] * glam[m].y * glam[l].y;
        }
      }
      b.gx[idx] = gx;
      b.gy[idx] = gy;
      b.hxx[idx] = hxx;
      b.hxy[idx] = hxy;
      b.hyy[idx] = hyy;
    }
  }
  return b;
}

ScalarBasis basis_tables(int degree, const QuadRule& rule, const Triangle& tri) {
  const std::vector<Vec2> pts = map_to_physical(rule, tri);
  return tabulate_basis(degree, pts, tri);
}

}  // namespace stokesdpg
