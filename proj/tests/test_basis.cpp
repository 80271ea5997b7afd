#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "stokesdpg/basis.hpp"
#include "stokesdpg/errors.hpp"

#include "oracles.hpp"

using namespace stokesdpg;

TEST_CASE("dimensions") {
  CHECK(poly_dim(3) == 10);
  CHECK(poly_dim(4) == 15);
  CHECK(3 * poly_dim(4) == 45);
}

TEST_CASE("partition of unity at every tabulated point") {
  std::mt19937_64 rng(42);
  const Triangle tri = testing_oracles::random_triangle(rng);
  const QuadRule r = tri_rule(8);
  for (int k : {1, 2, 3, 4}) {
    const ScalarBasis b = basis_tables(k, r, tri);
    for (int q = 0; q < b.npts; ++q) {
      double s = 0.0, sgx = 0.0, sgy = 0.0;
      for (int i = 0; i < b.dim; ++i) {
        s += b.v(q, i);
        sgx += b.gx[q * b.dim + i];
        sgy += b.gy[q * b.dim + i];
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::abs(sgx) < 1e-12);
      CHECK(std::abs(sgy) < 1e-12);
    }
  }
}

TEST_CASE("derivative consistency with finite differences") {
  std::mt19937_64 rng(7);
  const Triangle tri = testing_oracles::random_triangle(rng);
  const Vec2 probe = (1.0 / 3.0) * (tri[0] + tri[1] + tri[2]);
  const double h = 1e-5;

  for (int k : {3, 4}) {
    const ScalarBasis at_probe = tabulate_basis(k, std::vector<Vec2>{probe}, tri);
    for (int i = 0; i < at_probe.dim; ++i) {
      auto value_of = [&](Vec2 p) {
        return tabulate_basis(k, std::vector<Vec2>{p}, tri).v(0, i);
      };
      const Vec2 g_fd = testing_oracles::fd_gradient(value_of, probe, h);
      CHECK(std::abs(g_fd.x - at_probe.grad(0, i).x) < 1e-6);
      CHECK(std::abs(g_fd.y - at_probe.grad(0, i).y) < 1e-6);

      auto grad_of = [&](Vec2 p) {
        return tabulate_basis(k, std::vector<Vec2>{p}, tri).grad(0, i);
      };
      const double hxx =
          (grad_of({probe.x + h, probe.y}).x - grad_of({probe.x - h, probe.y}).x) /
          (2.0 * h);
      const double hyy =
          (grad_of({probe.x, probe.y + h}).y - grad_of({probe.x, probe.y - h}).y) /
          (2.0 * h);
      const double hxy =
          (grad_of({probe.x, probe.y + h}).x - grad_of({probe.x, probe.y - h}).x) /
          (2.0 * h);
      const SymTensor hs = at_probe.hess(0, i);
      CHECK(std::abs(hxx - hs.t11) < 1e-6);
      CHECK(std::abs(hyy - hs.t22) < 1e-6);
      CHECK(std::abs(hxy - hs.t12) < 1e-6);
    }
  }
}

TEST_CASE("constant member has zero derivatives; x^2 on the reference element") {
  const Triangle ref{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
  const ScalarBasis b0 = tabulate_basis(0, std::vector<Vec2>{{0.3, 0.2}}, ref);
  CHECK(b0.v(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(b0.gx[0]) == 0.0);
  CHECK(std::abs(b0.hxx[0]) == 0.0);

  // Represent x^2 in the degree-2 Bernstein basis via nodal interpolation and
  // check the tabulated Hessian is (2, 0, 0).
  const Vec2 probe{0.37, 0.21};
  const ScalarBasis b2 = tabulate_basis(2, std::vector<Vec2>{probe}, ref);
  // x^2 = lam1^2 on the reference triangle; B_{020} = lam1^2 is basis index
  // of multi-index (0,2,0).  Locate it by checking values at a point.
  // Instead solve: coefficients in Bernstein form for x^2 are c_{ijk} = (j/2)^2
  // evaluated at domain points -- for degree 2, x^2 has Bernstein
  // coefficients c = (j(j-1) + ... ) ; use the simpler route: compare against
  // an interpolation through tabulated values.
  double hxx = 0.0, hxy = 0.0, hyy = 0.0, val = 0.0;
  // Bernstein coefficients of x^2: with lam1 = x, c_{ijk} = j(j-1)/(n(n-1)) = j(j-1)/2
  int idx = 0;
  for (int i = 2; i >= 0; --i) {
    for (int j = 2 - i; j >= 0; --j) {
      const double c = j * (j - 1) / 2.0;
      val += c * b2.v(0, idx);
      hxx += c * b2.hess(0, idx).t11;
      hyy += c * b2.hess(0, idx).t22;
      hxy += c * b2.hess(0, idx).t12;
      ++idx;
    }
  }
  CHECK(val == doctest::Approx(probe.x * probe.x).epsilon(1e-13));
  CHECK(hxx == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(hxy) < 1e-12);
  CHECK(std::abs(hyy) < 1e-12);
}

TEST_CASE("degenerate triangle is rejected") {
  const Triangle bad{Vec2{0, 0}, Vec2{1, 0}, Vec2{2, 0}};
  CHECK_THROWS_AS(tabulate_basis(3, std::vector<Vec2>{{0.1, 0.1}}, bad),
                  GeometryError);
}
