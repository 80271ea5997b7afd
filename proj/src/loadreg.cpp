#include "stokesdpg/loadreg.hpp"

#include <array>

#include "stokesdpg/basis.hpp"

namespace stokesdpg {

namespace {

std::vector<std::vector<std::pair<int, int>>> vertex_patches(const Mesh& m) {
  std::vector<std::vector<std::pair<int, int>>> p(m.num_vertices());
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int k = 0; k < 3; ++k) p[m.triangles[t][k]].push_back({t, k});
  return p;
}

// Barycentric gradients of a triangle.
std::array<Vec2, 3> bary_gradients(const Triangle& tri) {
  const double area2 = cross(tri[1] - tri[0], tri[2] - tri[0]);
  return {Vec2{(tri[1].y - tri[2].y) / area2, (tri[2].x - tri[1].x) / area2},
          Vec2{(tri[2].y - tri[0].y) / area2, (tri[0].x - tri[2].x) / area2},
          Vec2{(tri[0].y - tri[1].y) / area2, (tri[1].x - tri[0].x) / area2}};
}

}  // namespace

double PiecewiseP1::eval(const Mesh& m, int elem, Vec2 p) const {
  const Triangle tri = m.triangle(elem);
  const double area2 = cross(tri[1] - tri[0], tri[2] - tri[0]);
  const double l0 = cross(tri[1] - p, tri[2] - p) / area2;
  const double l1 = cross(tri[2] - p, tri[0] - p) / area2;
  const double l2 = 1.0 - l0 - l1;
  return nodal[3 * elem] * l0 + nodal[3 * elem + 1] * l1 + nodal[3 * elem + 2] * l2;
}

DualBasis build_dual_basis(const Mesh& m) {
  DualBasis db;
  db.patch_size.assign(m.num_vertices(), 0);
  const auto patches = vertex_patches(m);
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (!m.boundary_vertex[v]) db.patch_size[v] = static_cast<int>(patches[v].size());
  }
  return db;
}

void psi_nodal_on_element(const Mesh& m, const DualBasis& db, int x, int t,
                          double out[3]) {
  out[0] = out[1] = out[2] = 0.0;
  const int mx = db.patch_size[x];
  if (mx == 0) return;
  const auto& tr = m.triangles[t];
  int k = -1;
  for (int i = 0; i < 3; ++i)
    if (tr[i] == x) k = i;
  if (k < 0) return;
  const double scale = 3.0 / (mx * m.area(t));
  for (int i = 0; i < 3; ++i) out[i] = scale * (i == k ? 3.0 : -1.0);
}

double hat_integral(const Mesh& m, int x) {
  double s = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k)
      if (m.triangles[t][k] == x) s += m.area(t) / 3.0;
  }
  return s;
}

double f_curl_hat(const Mesh& m, const std::function<Vec2(Vec2)>& f, int x,
                  const QuadRule& volume_rule) {
  double s = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tr = m.triangles[t];
    int k = -1;
    for (int i = 0; i < 3; ++i)
      if (tr[i] == x) k = i;
    if (k < 0) continue;
    const Triangle tri = m.triangle(t);
    const Vec2 curl_hat = perp(bary_gradients(tri)[k]);
    const double jac = 2.0 * m.area(t);
    const auto pts = map_to_physical(volume_rule, tri);
    for (size_t q = 0; q < pts.size(); ++q) {
      s += jac * volume_rule.weights[q] * dot(f(pts[q]), curl_hat);
    }
  }
  return s;
}

PiecewiseP1 apply_Ph_rot(const Mesh& m, const std::function<Vec2(Vec2)>& f,
                         const QuadRule& volume_rule) {
  const int nt = m.num_triangles();
  const auto patches = vertex_patches(m);
  const DualBasis db = build_dual_basis(m);

  // Bubble part: g|_T = (f, curl eta_bT)_T with eta_bT = (60/|T|) l0 l1 l2.
  std::vector<double> g(nt, 0.0);
  for (int t = 0; t < nt; ++t) {
    const Triangle tri = m.triangle(t);
    const auto gl = bary_gradients(tri);
    const double jac = 2.0 * m.area(t);
    const double scale = 60.0 / m.area(t);
    double s = 0.0;
    for (size_t q = 0; q < volume_rule.points.size(); ++q) {
      const double l1 = volume_rule.points[q].x;
      const double l2 = volume_rule.points[q].y;
      const double l0 = 1.0 - l1 - l2;
      const Vec2 grad_bubble =
          scale * (l1 * l2 * gl[0] + l0 * l2 * gl[1] + l0 * l1 * gl[2]);
      const Vec2 p = tri[0] + l1 * (tri[1] - tri[0]) + l2 * (tri[2] - tri[0]);
      s += jac * volume_rule.weights[q] * dot(f(p), perp(grad_bubble));
    }
    g[t] = s;
  }

  PiecewiseP1 out;
  out.nodal.assign(3 * nt, 0.0);
  for (int t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k) out.nodal[3 * t + k] = g[t];

  for (int x = 0; x < m.num_vertices(); ++x) {
    if (m.boundary_vertex[x]) continue;
    const double cx = f_curl_hat(m, f, x, volume_rule);
    double g_eta = 0.0;
    for (const auto& [t, k] : patches[x]) g_eta += g[t] * m.area(t) / 3.0;
    const double w = cx - g_eta;
    for (const auto& [t, k] : patches[x]) {
      double psi[3];
      psi_nodal_on_element(m, db, x, t, psi);
      for (int i = 0; i < 3; ++i) out.nodal[3 * t + i] += w * psi[i];
    }
  }
  return out;
}

double pair_with_hat(const Mesh& m, const PiecewiseP1& load, int x) {
  // Exact P1 x P1 mass: int_T li lj = |T|/12 (1 + delta_ij).
  double s = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tr = m.triangles[t];
    int k = -1;
    for (int i = 0; i < 3; ++i)
      if (tr[i] == x) k = i;
    if (k < 0) continue;
    const double a = m.area(t) / 12.0;
    for (int i = 0; i < 3; ++i) {
      s += a * load.nodal[3 * t + i] * (i == k ? 2.0 : 1.0);
    }
  }
  return s;
}

}  // namespace stokesdpg
