// Shared test-only helpers: independent oracles kept separate from the
// library implementation paths they check.
#pragma once

#include <cmath>
#include <random>

#include "stokesdpg/geometry.hpp"
#include "stokesdpg/mesh.hpp"

namespace testing_oracles {

using stokesdpg::Mesh;
using stokesdpg::Triangle;
using stokesdpg::Vec2;

// int_T l0^a l1^b l2^c = 2|T| a! b! c! / (a+b+c+2)!
inline double bary_factorial_integral(double area, int a, int b, int c) {
  double val = 2.0 * area;
  auto mul_fact = [&](int m) {
    for (int i = 1; i <= m; ++i) val *= i;
  };
  mul_fact(a);
  mul_fact(b);
  mul_fact(c);
  for (int i = 1; i <= a + b + c + 2; ++i) val /= i;
  return val;
}

// On the reference triangle, int x^a y^b = a! b! / (a+b+2)!
inline double ref_monomial_integral(int a, int b) {
  return bary_factorial_integral(0.5, 0, a, b);
}

inline Triangle random_triangle(std::mt19937_64& rng, double min_area = 0.15) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (;;) {
    Triangle t{Vec2{uni(rng), uni(rng)}, Vec2{uni(rng), uni(rng)},
               Vec2{uni(rng), uni(rng)}};
    if (stokesdpg::signed_area(t) < 0.0) std::swap(t[1], t[2]);
    if (stokesdpg::signed_area(t) >= min_area) return t;
  }
}

inline Mesh single_triangle_mesh(const Triangle& tri) {
  Mesh m;
  m.vertices = {tri[0], tri[1], tri[2]};
  m.triangles = {{0, 1, 2}};
  stokesdpg::build_topology(m);
  return m;
}

// Extended-precision SPD solve, for oracle-side evaluation of identities
// whose double-precision error floor sits above the tolerance under test.
inline std::vector<long double> cholesky_solve_ld(
    const std::vector<long double>& a, std::vector<long double> b, int n) {
  std::vector<long double> L(static_cast<size_t>(n) * n, 0.0L);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      long double s = a[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        L[i * n + i] = std::sqrt(s);
      } else {
        L[i * n + j] = s / L[j * n + j];
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    long double s = b[i];
    for (int k = 0; k < i; ++k) s -= L[i * n + k] * b[k];
    b[i] = s / L[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    long double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= L[k * n + i] * b[k];
    b[i] = s / L[i * n + i];
  }
  return b;
}

// Central finite differences for scalar fields.
template <class F>
Vec2 fd_gradient(const F& f, Vec2 p, double h = 1e-5) {
  return {(f({p.x + h, p.y}) - f({p.x - h, p.y})) / (2.0 * h),
          (f({p.x, p.y + h}) - f({p.x, p.y - h})) / (2.0 * h)};
}

template <class F>
stokesdpg::SymTensor fd_hessian(const F& f, Vec2 p, double h = 1e-4) {
  const double fxx =
      (f({p.x + h, p.y}) - 2.0 * f(p) + f({p.x - h, p.y})) / (h * h);
  const double fyy =
      (f({p.x, p.y + h}) - 2.0 * f(p) + f({p.x, p.y - h})) / (h * h);
  const double fxy = (f({p.x + h, p.y + h}) - f({p.x + h, p.y - h}) -
                      f({p.x - h, p.y + h}) + f({p.x - h, p.y - h})) /
                     (4.0 * h * h);
  return {fxx, fyy, fxy};
}

}  // namespace testing_oracles
