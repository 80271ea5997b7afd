#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "stokesdpg/basis.hpp"
#include "stokesdpg/errors.hpp"
#include "stokesdpg/linalg.hpp"
#include "stokesdpg/problems.hpp"
#include "stokesdpg/tracespace.hpp"

#include "oracles.hpp"

using namespace stokesdpg;
using testing_oracles::random_triangle;
using testing_oracles::single_triangle_mesh;

namespace {

// Bernstein coefficients of a callable polynomial of the given degree via
// interpolation at the domain points (i/n, j/n, k/n).
template <class F>
std::vector<double> bernstein_coeffs(int degree, const Triangle& tri, F&& f) {
  std::vector<Vec2> nodes;
  for (int i = degree; i >= 0; --i) {
    for (int j = degree - i; j >= 0; --j) {
      const int k = degree - i - j;
      nodes.push_back((1.0 / degree) *
                      (static_cast<double>(i) * tri[0] +
                       static_cast<double>(j) * tri[1] +
                       static_cast<double>(k) * tri[2]));
    }
  }
  const ScalarBasis b = tabulate_basis(degree, nodes, tri);
  const int n = b.dim;
  std::vector<double> vm(static_cast<size_t>(n) * n), rhs(n);
  for (int q = 0; q < n; ++q) {
    for (int i = 0; i < n; ++i) vm[q * n + i] = b.v(q, i);
    rhs[q] = f(nodes[q]);
  }
  return dense_lu_solve(std::move(vm), std::move(rhs), n);
}

struct Quadratic {
  double c[6];
  double value(Vec2 p) const {
    return c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x +
           c[4] * p.x * p.y + c[5] * p.y * p.y;
  }
  Vec2 grad(Vec2 p) const {
    return {c[1] + 2.0 * c[3] * p.x + c[4] * p.y,
            c[2] + c[4] * p.x + 2.0 * c[5] * p.y};
  }
  SymTensor hess() const { return {2.0 * c[3], 2.0 * c[5], c[4]}; }
};

// (z, divDiv Q)_T - (Hess z, Q)_T by quadrature, the volume-form oracle.
double volume_pairing(const Mesh& m, int elem, const Quadratic& z,
                      std::span<const double> qc) {
  const Triangle tri = m.triangle(elem);
  const QuadRule& vq = default_tri_rule();
  const ScalarBasis b4 = basis_tables(4, vq, tri);
  const auto phys = map_to_physical(vq, tri);
  const double jac = 2.0 * m.area(elem);
  const SymTensor hz = z.hess();
  double s = 0.0;
  for (size_t q = 0; q < phys.size(); ++q) {
    double dd = 0.0;
    SymTensor Q{};
    for (int a = 0; a < 3; ++a) {
      for (int j = 0; j < b4.dim; ++j) {
        const double cj = qc[a * b4.dim + j];
        dd += cj * div_div(b4, q, j, a);
        const double v = cj * b4.v(q, j);
        if (a == 0)
          Q.t11 += v;
        else if (a == 1)
          Q.t22 += v;
        else
          Q.t12 += v;
      }
    }
    s += jac * vq.weights[q] * (z.value(phys[q]) * dd - frobenius(hz, Q));
  }
  return s;
}

// -(Hess v, M)_T for constant M and a cubic v given by coefficients.
double volume_pairing_const_tensor(const Mesh& m, int elem, const SymTensor& M,
                                   std::span<const double> vc) {
  const Triangle tri = m.triangle(elem);
  const QuadRule& vq = default_tri_rule();
  const ScalarBasis b3 = basis_tables(3, vq, tri);
  const double jac = 2.0 * m.area(elem);
  double s = 0.0;
  for (int q = 0; q < b3.npts; ++q) {
    SymTensor hv{};
    for (int i = 0; i < b3.dim; ++i) {
      const SymTensor h = b3.hess(q, i);
      hv.t11 += vc[i] * h.t11;
      hv.t22 += vc[i] * h.t22;
      hv.t12 += vc[i] * h.t12;
    }
    s -= jac * vq.weights[q] * frobenius(hv, M);
  }
  return s;
}

}  // namespace

TEST_CASE("dimension formulas and unknown counts") {
  const Mesh meshes[] = {unit_square_mesh(1), refine_red(unit_square_mesh(2)),
                         channel_step_mesh()};
  for (const Mesh& m : meshes) {
    const TrialDofMap d = build_dof_map(m, nullptr);
    const int n0 = m.num_interior_vertices();
    CHECK(d.uhat_unknowns == 3 * n0);
    CHECK(d.qhat_unknowns == 2 * m.num_edges() + 3 * m.num_triangles() - n0);
    CHECK(d.n_unknowns ==
          6 * m.num_triangles() + d.uhat_unknowns + d.qhat_unknowns);
  }

  const Mesh m1 = unit_square_mesh(1);
  const TrialDofMap d1 = build_dof_map(m1, nullptr);
  CHECK(d1.qhat_unknowns == 27);
  CHECK(d1.uhat_unknowns == 3);
}

TEST_CASE("homogeneous data zeroes all boundary trios") {
  const Mesh m = refine_red(unit_square_mesh(2));
  const TrialDofMap d = build_dof_map(m, nullptr);
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (!m.boundary_vertex[v]) continue;
    for (int c = 0; c < 3; ++c) {
      CHECK(d.uhat_gid[3 * v + c] == -1);
      CHECK(d.uhat_value[3 * v + c] == 0.0);
    }
  }
}

TEST_CASE("cavity top node carries (0,0,1)") {
  const Mesh m = unit_square_mesh(2);
  const ProblemSpec cav = cavity_problem();
  const TrialDofMap d = build_dof_map(m, &cav.bc);
  int vtop = -1;
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (std::abs(m.vertices[v].x - 0.5) < 1e-14 &&
        std::abs(m.vertices[v].y - 1.0) < 1e-14)
      vtop = v;
  }
  REQUIRE(vtop >= 0);
  CHECK(d.uhat_value[3 * vtop + 0] == 0.0);
  CHECK(d.uhat_value[3 * vtop + 1] == 0.0);
  CHECK(d.uhat_value[3 * vtop + 2] == doctest::Approx(1.0));
}

TEST_CASE("incompatible corner gradients are rejected") {
  const Mesh m = unit_square_mesh(1);
  BoundaryData bad;
  bad.value = [](Vec2) { return 0.0; };
  bad.gradient = [](Vec2, Vec2 mid) {
    const bool horizontal = std::abs(mid.y) < 1e-9 || std::abs(mid.y - 1.0) < 1e-9;
    return horizontal ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
  };
  CHECK_THROWS_AS(build_dof_map(m, &bad), DataCompatibilityError);
}

TEST_CASE("uhat_edge_values basics") {
  const Mesh m = unit_square_mesh(1);

  const auto [z0, dn0] = uhat_edge_values(m, 0, {}, {}, 0.37);
  CHECK(z0 == 0.0);
  CHECK(dn0 == 0.0);

  VertexTrio one{1.0, 0.0, 0.0};
  const auto [z1, dn1] = uhat_edge_values(m, 0, one, one, 0.5);
  CHECK(z1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dn1 == 0.0);
}

TEST_CASE("edge traces reproduce a global quadratic exactly") {
  Quadratic z{{0.3, -1.1, 0.7, 0.9, -0.4, 1.3}};
  const Mesh m = refine_red(unit_square_mesh(2));
  for (int e = 0; e < m.num_edges(); ++e) {
    const Vec2 a = m.vertices[m.edges[e][0]];
    const Vec2 b = m.vertices[m.edges[e][1]];
    const Vec2 n = perp((1.0 / norm(b - a)) * (b - a));
    VertexTrio ta{z.value(a), z.grad(a).x, z.grad(a).y};
    VertexTrio tb{z.value(b), z.grad(b).x, z.grad(b).y};
    for (double s : {0.0, 0.21, 0.5, 0.83, 1.0}) {
      const Vec2 p = a + s * (b - a);
      const auto [zv, dnv] = uhat_edge_values(m, e, ta, tb, s);
      CHECK(std::abs(zv - z.value(p)) < 1e-12);
      CHECK(std::abs(dnv - dot(n, z.grad(p))) < 1e-12);
    }
  }
}

TEST_CASE("essential-BC round trip on boundary edges") {
  Quadratic z{{-0.2, 0.8, -0.6, 0.5, 1.1, -0.9}};
  BoundaryData bc;
  bc.value = [&](Vec2 p) { return z.value(p); };
  bc.gradient = [&](Vec2 p, Vec2) { return z.grad(p); };
  const Mesh m = refine_red(unit_square_mesh(2));
  const TrialDofMap d = build_dof_map(m, &bc);
  for (int e = 0; e < m.num_edges(); ++e) {
    if (!m.boundary_edge[e]) continue;
    const int vlo = m.edges[e][0], vhi = m.edges[e][1];
    const VertexTrio ta{d.uhat_value[3 * vlo], d.uhat_value[3 * vlo + 1],
                        d.uhat_value[3 * vlo + 2]};
    const VertexTrio tb{d.uhat_value[3 * vhi], d.uhat_value[3 * vhi + 1],
                        d.uhat_value[3 * vhi + 2]};
    const Vec2 a = m.vertices[vlo], b = m.vertices[vhi];
    const Vec2 n = perp((1.0 / norm(b - a)) * (b - a));
    for (double s : {0.1, 0.45, 0.98}) {
      const Vec2 p = a + s * (b - a);
      const auto [zv, dnv] = uhat_edge_values(m, e, ta, tb, s);
      CHECK(std::abs(zv - z.value(p)) < 1e-12);
      CHECK(std::abs(dnv - dot(n, z.grad(p))) < 1e-12);
    }
  }
}

TEST_CASE("pair_uhat: frozen reference values") {
  const Triangle ref{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
  const Mesh m = single_triangle_mesh(ref);

  // z = x^2, Q = e11 constant: volume oracle gives -2|T| = -1.
  Quadratic zx2{{0, 0, 0, 1, 0, 0}};
  VertexTrio vd[3];
  for (int k = 0; k < 3; ++k) {
    vd[k] = {zx2.value(ref[k]), zx2.grad(ref[k]).x, zx2.grad(ref[k]).y};
  }
  std::vector<double> q_e11(45, 0.0);
  for (int j = 0; j < 15; ++j) q_e11[j] = 1.0;  // partition of unity
  CHECK(pair_uhat_with_test(m, 0, vd, q_e11) ==
        doctest::Approx(-1.0).epsilon(1e-12));

  // zero trace data pairs to zero with any constant Q.
  VertexTrio zero[3] = {};
  CHECK(std::abs(pair_uhat_with_test(m, 0, zero, q_e11)) < 1e-14);
}

TEST_CASE("integration-by-parts identity: 200 seeded random pairs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double max_rel = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Triangle tri = random_triangle(rng);
    const Mesh m = single_triangle_mesh(tri);
    Quadratic z;
    for (double& c : z.c) c = uni(rng);
    std::vector<double> qc(45);
    for (double& c : qc) c = uni(rng);
    VertexTrio vd[3];
    for (int k = 0; k < 3; ++k) {
      vd[k] = {z.value(tri[k]), z.grad(tri[k]).x, z.grad(tri[k]).y};
    }
    const double bdry = pair_uhat_with_test(m, 0, vd, qc);
    const double vol = volume_pairing(m, 0, z, qc);
    max_rel = std::max(max_rel,
                       std::abs(bdry - vol) / std::max(std::abs(vol), 1e-12));
  }
  CHECK(max_rel <= 1e-10);
}

TEST_CASE("pair_phat: frozen single-dof values") {
  const Triangle ref{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
  const Mesh m = single_triangle_mesh(ref);
  const double zero3[3] = {0, 0, 0};
  const std::vector<double> v_one(10, 1.0);

  // lam1 alone against v = 1: normal derivative of a constant vanishes.
  double lam1[3] = {1.0, 0.0, 0.0};
  CHECK(std::abs(pair_phat_with_test(m, 0, lam1, zero3, zero3, v_one)) < 1e-14);

  // lam1 = 1 on the bottom edge, v = y: dn v = -1 there, so the pairing is
  // -lam1 * (-1) * |E| = 1.
  const auto vy = bernstein_coeffs(3, ref, [](Vec2 p) { return p.y; });
  CHECK(pair_phat_with_test(m, 0, lam1, zero3, zero3, vy) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // single jump against v with v(x_1) = 1 gives -1.
  double jmp[3] = {0.0, 1.0, 0.0};
  const auto vx = bernstein_coeffs(3, ref, [](Vec2 p) { return p.x; });
  CHECK(pair_phat_with_test(m, 0, zero3, zero3, jmp, vx) ==
        doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pair_phat consistency: constant tensor trace data") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const Triangle tri = random_triangle(rng);
    const Mesh m = single_triangle_mesh(tri);
    const SymTensor M{uni(rng), uni(rng), uni(rng)};

    double lam1[3], lam2[3] = {0, 0, 0}, jumps[3], tMn[3];
    for (int e = 0; e < 3; ++e) {
      const Vec2 p = tri[e], q = tri[(e + 1) % 3];
      const Vec2 t = (1.0 / norm(q - p)) * (q - p);
      const Vec2 n = perp(t);
      lam1[e] = dot(n, apply(M, n));  // orientation invariant
      tMn[e] = dot(t, apply(M, n));
    }
    for (int v = 0; v < 3; ++v) jumps[v] = tMn[(v + 2) % 3] - tMn[v];

    std::vector<double> vc(10);
    for (double& c : vc) c = uni(rng);
    const double bdry = pair_phat_with_test(m, 0, lam1, lam2, jumps, vc);
    const double vol = volume_pairing_const_tensor(m, 0, M, vc);
    CHECK(std::abs(bdry - vol) < 1e-11 * std::max(1.0, std::abs(vol)));
  }
}

TEST_CASE("pair_phat consistency: linear tensor with nonzero effective shear") {
  // M = x*A with A = [[1,-1/2],[-1/2,0]] has constant edge densities on the
  // reference triangle: lam1 = 0 everywhere, local shear (1, 1/sqrt2, -1),
  // jump 1 at vertex (1,0).
  const Triangle ref{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
  const Mesh m = single_triangle_mesh(ref);

  const double lam1[3] = {0.0, 0.0, 0.0};
  // global lam2 = sigma * local shear; sigma = (+1, +1, -1) here.
  const double lam2[3] = {1.0, 1.0 / std::sqrt(2.0), 1.0};
  const double jumps[3] = {0.0, 1.0, 0.0};

  // Frozen value for v = x^2: -(Hess v, M) integrates to -1/3.
  const auto vx2 = bernstein_coeffs(3, ref, [](Vec2 p) { return p.x * p.x; });
  CHECK(pair_phat_with_test(m, 0, lam1, lam2, jumps, vx2) ==
        doctest::Approx(-1.0 / 3.0).epsilon(1e-12));

  // Same against the quadrature oracle for random cubics.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const SymTensor A{1.0, 0.0, -0.5};
  const QuadRule& vq = default_tri_rule();
  const ScalarBasis b3 = basis_tables(3, vq, ref);
  const auto phys = map_to_physical(vq, ref);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> vc(10);
    for (double& c : vc) c = uni(rng);
    double vol = 0.0;
    for (int q = 0; q < b3.npts; ++q) {
      SymTensor hv{};
      for (int i = 0; i < 10; ++i) {
        const SymTensor h = b3.hess(q, i);
        hv.t11 += vc[i] * h.t11;
        hv.t22 += vc[i] * h.t22;
        hv.t12 += vc[i] * h.t12;
      }
      const SymTensor M{A.t11 * phys[q].x, A.t22 * phys[q].x,
                        A.t12 * phys[q].x};
      vol -= frobenius(hv, M) * vq.weights[q];  // jac = 2*|T| = 1
    }
    const double bdry = pair_phat_with_test(m, 0, lam1, lam2, jumps, vc);
    CHECK(std::abs(bdry - vol) < 1e-12 * std::max(1.0, std::abs(vol)));
  }
}

TEST_CASE("conformity telescope: interior contributions cancel") {
  const Mesh m = refine_red(unit_square_mesh(2));
  const TrialDofMap d = build_dof_map(m, nullptr);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> x(d.n_unknowns);
  for (double& v : x) v = uni(rng);

  auto local_value = [&](const GatherEntry& e) {
    double v = e.constant;
    for (const GatherTerm& t : e.terms) v += t.weight * x[t.gid];
    return v;
  };

  // Reconstructed jumps sum to zero at interior vertices.
  std::vector<double> vertex_sum(m.num_vertices(), 0.0);
  std::vector<double> local_jumps(3 * m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const double j = local_value(d.gather[t][21 + k]);
      local_jumps[3 * t + k] = j;
      vertex_sum[m.triangles[t][k]] += j;
    }
  }
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (!m.boundary_vertex[v]) CHECK(std::abs(vertex_sum[v]) < 1e-14);
  }

  // Sum of <phat, 1>_dT over elements telescopes to pure boundary terms.
  const std::vector<double> v_one(10, 1.0);
  double total = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    double lam1[3], lam2[3], jumps[3];
    for (int e = 0; e < 3; ++e) {
      lam1[e] = local_value(d.gather[t][15 + 2 * e]);
      lam2[e] = local_value(d.gather[t][15 + 2 * e + 1]);
    }
    for (int k = 0; k < 3; ++k) jumps[k] = local_jumps[3 * t + k];
    total += pair_phat_with_test(m, t, lam1, lam2, jumps, v_one);
  }
  double expected = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int e = m.elem_edges[t][k];
      if (m.boundary_edge[e]) {
        expected +=
            m.elem_edge_sign[t][k] * x[d.lam2_gid[e]] * m.edge_length(e);
      }
      if (m.boundary_vertex[m.triangles[t][k]]) {
        expected -= local_jumps[3 * t + k];
      }
    }
  }
  CHECK(std::abs(total - expected) < 1e-11);
}

TEST_CASE("gather lists reference shared DOFs consistently") {
  const Mesh m = refine_red(unit_square_mesh(1));
  const TrialDofMap d = build_dof_map(m, nullptr);
  for (int t = 0; t < m.num_triangles(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const int ge = m.elem_edges[t][e];
      REQUIRE(d.gather[t][15 + 2 * e].terms.size() == 1);
      CHECK(d.gather[t][15 + 2 * e].terms[0].gid == d.lam1_gid[ge]);
      CHECK(d.gather[t][15 + 2 * e + 1].terms[0].gid == d.lam2_gid[ge]);
    }
  }
}
