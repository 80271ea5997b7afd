#include "stokesdpg/tracespace.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "stokesdpg/basis.hpp"
#include "stokesdpg/errors.hpp"

namespace stokesdpg {

namespace {

// Cubic Hermite shape functions on [0,1].
inline double h00(double s) { return 1.0 + s * s * (2.0 * s - 3.0); }
inline double h10(double s) { return s * (1.0 + s * (s - 2.0)); }
inline double h01(double s) { return s * s * (3.0 - 2.0 * s); }
inline double h11(double s) { return s * s * (s - 1.0); }

struct EdgeFrame {
  Vec2 p, q;   // endpoints in element-CCW order
  double len;
  Vec2 t, n;   // local tangent and outward normal
};

EdgeFrame local_edge_frame(const Triangle& tri, int e) {
  EdgeFrame f;
  f.p = tri[e];
  f.q = tri[(e + 1) % 3];
  f.len = norm(f.q - f.p);
  f.t = (1.0 / f.len) * (f.q - f.p);
  f.n = perp(f.t);
  return f;
}

}  // namespace

std::pair<double, double> uhat_edge_values(const Mesh& m, int edge,
                                           const VertexTrio& at_lo,
                                           const VertexTrio& at_hi, double s) {
  const Vec2 a = m.vertices[m.edges[edge][0]];
  const Vec2 b = m.vertices[m.edges[edge][1]];
  const double len = norm(b - a);
  const Vec2 t = (1.0 / len) * (b - a);
  const Vec2 n = perp(t);
  const double ta = t.x * at_lo.gx + t.y * at_lo.gy;
  const double tb = t.x * at_hi.gx + t.y * at_hi.gy;
  const double na = n.x * at_lo.gx + n.y * at_lo.gy;
  const double nb = n.x * at_hi.gx + n.y * at_hi.gy;
  const double z = h00(s) * at_lo.z + h10(s) * len * ta + h01(s) * at_hi.z +
                   h11(s) * len * tb;
  const double dn = (1.0 - s) * na + s * nb;
  return {z, dn};
}

void uhat_pairing_block(const Mesh& m, int elem, const QuadRule& edge_q,
                        double* out) {
  const Triangle tri = m.triangle(elem);
  const int nq = static_cast<int>(edge_q.points.size());

  // Tabulation points: nq per edge, then the 3 vertices.
  std::vector<Vec2> pts;
  pts.reserve(3 * nq + 3);
  EdgeFrame fr[3];
  for (int e = 0; e < 3; ++e) {
    fr[e] = local_edge_frame(tri, e);
    for (int iq = 0; iq < nq; ++iq) {
      const double s = edge_q.points[iq].x;
      pts.push_back(fr[e].p + s * (fr[e].q - fr[e].p));
    }
  }
  for (int v = 0; v < 3; ++v) pts.push_back(tri[v]);
  const ScalarBasis b4 = tabulate_basis(4, pts, tri);
  const int nb = b4.dim;  // 15

  std::memset(out, 0, sizeof(double) * 45 * 9);

  for (int e = 0; e < 3; ++e) {
    const EdgeFrame& f = fr[e];
    const int vp = e, vq = (e + 1) % 3;
    for (int iq = 0; iq < nq; ++iq) {
      const double s = edge_q.points[iq].x;
      const double ds = edge_q.weights[iq] * f.len;
      const int q = e * nq + iq;

      // Trace values of the 9 unit vertex dofs at this edge point.
      double zv[9] = {0}, dnv[9] = {0};
      for (int mdof = 0; mdof < 9; ++mdof) {
        const int vtx = mdof / 3, comp = mdof % 3;
        if (vtx != vp && vtx != vq) continue;
        double za = 0, zb = 0, ta = 0, tb = 0, na = 0, nb_ = 0;
        if (comp == 0) {
          (vtx == vp ? za : zb) = 1.0;
        } else {
          const Vec2 g = comp == 1 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
          if (vtx == vp) {
            ta = dot(f.t, g);
            na = dot(f.n, g);
          } else {
            tb = dot(f.t, g);
            nb_ = dot(f.n, g);
          }
        }
        zv[mdof] = h00(s) * za + h10(s) * f.len * ta + h01(s) * zb +
                   h11(s) * f.len * tb;
        dnv[mdof] = (1.0 - s) * na + s * nb_;
      }

      for (int alpha = 0; alpha < kNumSymUnits; ++alpha) {
        const SymTensor E = sym_unit(alpha);
        const Vec2 En = apply(E, f.n);
        const double tEn = dot(f.t, En);
        const double nEn = dot(f.n, En);
        for (int j = 0; j < nb; ++j) {
          const Vec2 g = b4.grad(q, j);
          const double phi = b4.v(q, j);
          // n.Div(phi E) + d_t(t.(phi E)n) and n.(phi E)n on the edge.
          const double shear = dot(En, g) + tEn * dot(f.t, g);
          const double nn = phi * nEn;
          double* row = out + (alpha * nb + j) * 9;
          for (int mdof = 0; mdof < 9; ++mdof) {
            if (zv[mdof] == 0.0 && dnv[mdof] == 0.0) continue;
            row[mdof] += ds * (zv[mdof] * shear - dnv[mdof] * nn);
          }
        }
      }
    }
  }

  // Vertex jump terms: only the value dofs carry point values.
  for (int v = 0; v < 3; ++v) {
    const int e_in = (v + 2) % 3, e_out = v;
    const int q = 3 * nq + v;
    for (int alpha = 0; alpha < kNumSymUnits; ++alpha) {
      const SymTensor E = sym_unit(alpha);
      const double tEn_in = dot(fr[e_in].t, apply(E, fr[e_in].n));
      const double tEn_out = dot(fr[e_out].t, apply(E, fr[e_out].n));
      for (int j = 0; j < nb; ++j) {
        const double jump = b4.v(q, j) * (tEn_in - tEn_out);
        out[(alpha * nb + j) * 9 + 3 * v] -= jump;
      }
    }
  }
}

void phat_pairing_block(const Mesh& m, int elem, const QuadRule& edge_q,
                        double* out) {
  const Triangle tri = m.triangle(elem);
  const int nq = static_cast<int>(edge_q.points.size());

  std::vector<Vec2> pts;
  pts.reserve(3 * nq + 3);
  EdgeFrame fr[3];
  for (int e = 0; e < 3; ++e) {
    fr[e] = local_edge_frame(tri, e);
    for (int iq = 0; iq < nq; ++iq) {
      const double s = edge_q.points[iq].x;
      pts.push_back(fr[e].p + s * (fr[e].q - fr[e].p));
    }
  }
  for (int v = 0; v < 3; ++v) pts.push_back(tri[v]);
  const ScalarBasis b3 = tabulate_basis(3, pts, tri);
  const int nb = b3.dim;  // 10

  std::memset(out, 0, sizeof(double) * 10 * 9);

  for (int i = 0; i < nb; ++i) {
    double* row = out + i * 9;
    for (int e = 0; e < 3; ++e) {
      const EdgeFrame& f = fr[e];
      double int_v = 0.0, int_dnv = 0.0;
      for (int iq = 0; iq < nq; ++iq) {
        const int q = e * nq + iq;
        const double ds = edge_q.weights[iq] * f.len;
        int_v += ds * b3.v(q, i);
        int_dnv += ds * dot(f.n, b3.grad(q, i));
      }
      const double sigma = m.elem_edge_sign[elem][e];
      row[2 * e + 0] += -int_dnv;        // lam1: -<n.Mn, dn v>
      row[2 * e + 1] += sigma * int_v;   // lam2: effective shear
    }
    for (int v = 0; v < 3; ++v) {
      row[6 + v] -= b3.v(3 * nq + v, i);
    }
  }
}

double pair_uhat_with_test(const Mesh& m, int elem, const VertexTrio vd[3],
                           std::span<const double> q_coeffs) {
  double block[45 * 9];
  uhat_pairing_block(m, elem, default_edge_rule(), block);
  double dofs[9];
  for (int v = 0; v < 3; ++v) {
    dofs[3 * v + 0] = vd[v].z;
    dofs[3 * v + 1] = vd[v].gx;
    dofs[3 * v + 2] = vd[v].gy;
  }
  double sum = 0.0;
  for (int r = 0; r < 45; ++r) {
    double rowdot = 0.0;
    for (int c = 0; c < 9; ++c) rowdot += block[r * 9 + c] * dofs[c];
    sum += q_coeffs[r] * rowdot;
  }
  return sum;
}

double pair_phat_with_test(const Mesh& m, int elem, const double lam1[3],
                           const double lam2[3], const double jumps[3],
                           std::span<const double> v_coeffs) {
  double block[10 * 9];
  phat_pairing_block(m, elem, default_edge_rule(), block);
  double dofs[9];
  for (int e = 0; e < 3; ++e) {
    dofs[2 * e + 0] = lam1[e];
    dofs[2 * e + 1] = lam2[e];
  }
  for (int v = 0; v < 3; ++v) dofs[6 + v] = jumps[v];
  double sum = 0.0;
  for (int r = 0; r < 10; ++r) {
    double rowdot = 0.0;
    for (int c = 0; c < 9; ++c) rowdot += block[r * 9 + c] * dofs[c];
    sum += v_coeffs[r] * rowdot;
  }
  return sum;
}

TrialDofMap build_dof_map(const Mesh& m, const BoundaryData* bc) {
  TrialDofMap d;
  d.n_elems = m.num_triangles();
  const int nv = m.num_vertices();
  const int ne = m.num_edges();
  const int nt = m.num_triangles();

  // Incident boundary edges per vertex, for data evaluation and checking.
  std::vector<std::vector<int>> vertex_bedges(nv);
  for (int e = 0; e < ne; ++e) {
    if (m.boundary_edge[e]) {
      vertex_bedges[m.edges[e][0]].push_back(e);
      vertex_bedges[m.edges[e][1]].push_back(e);
    }
  }

  int next = 6 * nt;  // u and P fields come first, element-major

  d.uhat_gid.assign(3 * nv, -1);
  d.uhat_value.assign(3 * nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    if (!m.boundary_vertex[v]) {
      for (int c = 0; c < 3; ++c) d.uhat_gid[3 * v + c] = next++;
      continue;
    }
    if (bc == nullptr) continue;  // homogeneous
    const Vec2 p = m.vertices[v];
    d.uhat_value[3 * v + 0] = bc->value(p);
    Vec2 g{0.0, 0.0};
    bool have = false;
    for (int e : vertex_bedges[v]) {
      const Vec2 mid = 0.5 * (m.vertices[m.edges[e][0]] + m.vertices[m.edges[e][1]]);
      const Vec2 ge = bc->gradient(p, mid);
      if (have) {
        if (std::abs(ge.x - g.x) > 1e-12 || std::abs(ge.y - g.y) > 1e-12) {
          throw DataCompatibilityError(
              "build_dof_map: incompatible corner gradient data at vertex " +
              std::to_string(v));
        }
      } else {
        g = ge;
        have = true;
      }
    }
    d.uhat_value[3 * v + 1] = g.x;
    d.uhat_value[3 * v + 2] = g.y;
  }
  d.uhat_unknowns = next - 6 * nt;

  d.lam1_gid.resize(ne);
  d.lam2_gid.resize(ne);
  for (int e = 0; e < ne; ++e) {
    d.lam1_gid[e] = next++;
    d.lam2_gid[e] = next++;
  }

  // Jumps: one per (element, vertex); at each interior vertex the jump of the
  // lowest-indexed incident element is eliminated against the others.
  std::vector<std::vector<std::pair<int, int>>> vertex_elems(nv);
  for (int t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) vertex_elems[m.triangles[t][k]].push_back({t, k});
  }
  std::vector<int> eliminated(nv, -1);  // element owning the eliminated jump
  for (int v = 0; v < nv; ++v) {
    if (!m.boundary_vertex[v]) eliminated[v] = vertex_elems[v].front().first;
  }
  d.jump_gid.assign(3 * nt, -1);
  for (int t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      const int v = m.triangles[t][k];
      if (eliminated[v] == t) continue;
      d.jump_gid[3 * t + k] = next++;
    }
  }
  d.qhat_unknowns = next - 6 * nt - d.uhat_unknowns;
  d.n_unknowns = next;

  d.gather.resize(nt);
  for (int t = 0; t < nt; ++t) {
    auto& g = d.gather[t];
    for (int k = 0; k < 3; ++k) g[k].terms = {{d.u_gid(t, k), 1.0}};
    for (int k = 0; k < 3; ++k) g[3 + k].terms = {{d.p_gid(t, k), 1.0}};
    for (int k = 0; k < 3; ++k) {
      const int v = m.triangles[t][k];
      for (int c = 0; c < 3; ++c) {
        GatherEntry& ge = g[6 + 3 * k + c];
        const int gid = d.uhat_gid[3 * v + c];
        if (gid >= 0) {
          ge.terms = {{gid, 1.0}};
        } else {
          ge.constant = d.uhat_value[3 * v + c];
        }
      }
    }
    for (int e = 0; e < 3; ++e) {
      const int ge_id = m.elem_edges[t][e];
      g[15 + 2 * e + 0].terms = {{d.lam1_gid[ge_id], 1.0}};
      g[15 + 2 * e + 1].terms = {{d.lam2_gid[ge_id], 1.0}};
    }
    for (int k = 0; k < 3; ++k) {
      GatherEntry& ge = g[21 + k];
      const int gid = d.jump_gid[3 * t + k];
      if (gid >= 0) {
        ge.terms = {{gid, 1.0}};
        continue;
      }
      const int v = m.triangles[t][k];
      for (const auto& [ot, ok] : vertex_elems[v]) {
        if (ot == t) continue;
        ge.terms.push_back({d.jump_gid[3 * ot + ok], -1.0});
      }
    }
  }
  return d;
}

}  // namespace stokesdpg
