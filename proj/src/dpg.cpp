#include "stokesdpg/dpg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "stokesdpg/basis.hpp"
#include "stokesdpg/errors.hpp"
#include "stokesdpg/quadrature.hpp"

namespace stokesdpg {

namespace {

// Frobenius products of the unit symmetric tensors (e11,e22,e12).
inline double frob_units(int a, int b) {
  if (a != b) return 0.0;
  return a == 2 ? 2.0 : 1.0;
}

// rho' G^{-1} rho in extended precision.  The Gram conditioning (~1e8 on the
// benchmark meshes) leaves a double-precision Cholesky with ~1e-11 relative
// error, too coarse for the 1e-12 estimator identity.
double residual_energy_ld(const std::array<double, kLocalTestDofs * kLocalTestDofs>& g,
                          const std::array<double, kLocalTestDofs>& rho) {
  constexpr int n = kLocalTestDofs;
  static thread_local std::array<long double, n * n> L;
  std::array<long double, n> y;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      long double s = g[i * n + j];
      for (int k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (!(s > 0.0L)) {
          throw SpdError("estimate: Gram factorization failed at pivot " +
                         std::to_string(i), i);
        }
        L[i * n + i] = std::sqrt(s);
      } else {
        L[i * n + j] = s / L[j * n + j];
      }
    }
    long double s = rho[i];
    for (int k = 0; k < i; ++k) s -= L[i * n + k] * y[k];
    y[i] = s / L[i * n + i];
  }
  long double sq = 0.0L;
  for (int i = 0; i < n; ++i) sq += y[i] * y[i];
  return static_cast<double>(sq);
}

inline double hess_component(const ScalarBasis& b, int q, int i, int beta) {
  switch (beta) {
    case 0: return b.hxx[q * b.dim + i];
    case 1: return b.hyy[q * b.dim + i];
    default: return 2.0 * b.hxy[q * b.dim + i];
  }
}

}  // namespace

DiscreteLoad make_load(const Mesh& m, const ProblemSpec& problem) {
  DiscreteLoad load;
  load.mode = problem.mode;
  switch (problem.mode) {
    case LoadMode::zero:
      break;
    case LoadMode::vector_rot:
      load.p1 = apply_Ph_rot(m, problem.f, default_tri_rule());
      break;
    case LoadMode::scalar_l2:
      load.g = problem.g;
      break;
  }
  return load;
}

void build_local_system(const Mesh& m, int elem, double gamma,
                        const DiscreteLoad& load, LocalSystem& ls) {
  const Triangle tri = m.triangle(elem);
  const QuadRule& vq = default_tri_rule();
  const int nq = static_cast<int>(vq.points.size());
  const double jac = 2.0 * m.area(elem);

  const ScalarBasis b3 = basis_tables(3, vq, tri);
  const ScalarBasis b4 = basis_tables(4, vq, tri);
  const int n3 = b3.dim, n4 = b4.dim;

  std::fill(ls.G.begin(), ls.G.end(), 0.0);
  std::fill(ls.B.begin(), ls.B.end(), 0.0);
  std::fill(ls.l.begin(), ls.l.end(), 0.0);

  auto G = [&](int r, int c) -> double& { return ls.G[r * kLocalTestDofs + c]; };
  auto B = [&](int r, int c) -> double& { return ls.B[r * kLocalTrialDofs + c]; };

  const auto phys = map_to_physical(vq, tri);

  std::vector<double> loadval(nq, 0.0);
  if (load.mode == LoadMode::vector_rot) {
    for (int q = 0; q < nq; ++q) loadval[q] = load.p1.eval(m, elem, phys[q]);
  } else if (load.mode == LoadMode::scalar_l2) {
    for (int q = 0; q < nq; ++q) loadval[q] = load.g(phys[q]);
  }

  for (int q = 0; q < nq; ++q) {
    const double w = jac * vq.weights[q];
    const double lam[3] = {1.0 - vq.points[q].x - vq.points[q].y,
                           vq.points[q].x, vq.points[q].y};

    // Scalar test block: (v,v') + (Hess v, Hess v').
    for (int i = 0; i < n3; ++i) {
      const SymTensor hi = b3.hess(q, i);
      for (int j = 0; j <= i; ++j) {
        const SymTensor hj = b3.hess(q, j);
        const double add = w * (b3.v(q, i) * b3.v(q, j) + frobenius(hi, hj));
        G(i, j) += add;
      }
      // gamma (u, v) and (P, Hess v) columns, and the load row.
      for (int k = 0; k < 3; ++k) {
        if (gamma != 0.0) B(i, k) += w * gamma * lam[k] * b3.v(q, i);
      }
      for (int beta = 0; beta < 3; ++beta) {
        B(i, 3 + beta) += w * hess_component(b3, q, i, beta);
      }
      ls.l[i] += w * loadval[q] * b3.v(q, i);
    }

    // Tensor test block: (Q,Q') + (divDiv Q, divDiv Q').
    for (int a = 0; a < 3; ++a) {
      for (int i = 0; i < n4; ++i) {
        const int ri = kScalarTestDofs + a * n4 + i;
        const double dd_i = div_div(b4, q, i, a);
        for (int b = 0; b <= a; ++b) {
          const int jmax = (b == a) ? i : n4 - 1;
          for (int j = 0; j <= jmax; ++j) {
            const int rj = kScalarTestDofs + b * n4 + j;
            const double add = w * (frob_units(a, b) * b4.v(q, i) * b4.v(q, j) +
                                    dd_i * div_div(b4, q, j, b));
            G(ri, rj) += add;
          }
        }
        // -(u, divDiv Q) and (P, Q) columns.
        for (int k = 0; k < 3; ++k) B(ri, k) -= w * lam[k] * dd_i;
        B(ri, 3 + a) += w * frob_units(a, a) * b4.v(q, i);
      }
    }
  }

  // Mirror the lower triangle.
  for (int r = 0; r < kLocalTestDofs; ++r)
    for (int c = r + 1; c < kLocalTestDofs; ++c) G(r, c) = G(c, r);

  // Trace couplings.
  double ublock[45 * 9];
  uhat_pairing_block(m, elem, default_edge_rule(), ublock);
  for (int t = 0; t < 45; ++t)
    for (int c = 0; c < 9; ++c)
      B(kScalarTestDofs + t, 6 + c) += ublock[t * 9 + c];

  double pblock[10 * 9];
  phat_pairing_block(m, elem, default_edge_rule(), pblock);
  for (int i = 0; i < kScalarTestDofs; ++i)
    for (int c = 0; c < 9; ++c) B(i, 15 + c) += pblock[i * 9 + c];
}

CondensedLocal condense(const LocalSystem& ls) {
  const DenseSpd chol = DenseSpd::factor(ls.G, kLocalTestDofs);

  // Y = G^{-1} [B | l], column-major.
  std::array<double, kLocalTestDofs*(kLocalTrialDofs + 1)> y;
  for (int c = 0; c < kLocalTrialDofs; ++c)
    for (int r = 0; r < kLocalTestDofs; ++r)
      y[c * kLocalTestDofs + r] = ls.B[r * kLocalTrialDofs + c];
  for (int r = 0; r < kLocalTestDofs; ++r)
    y[kLocalTrialDofs * kLocalTestDofs + r] = ls.l[r];
  chol.solve_many(y.data(), kLocalTrialDofs + 1);

  CondensedLocal out;
  for (int i = 0; i < kLocalTrialDofs; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int r = 0; r < kLocalTestDofs; ++r)
        s += ls.B[r * kLocalTrialDofs + i] * y[j * kLocalTestDofs + r];
      out.S[i * kLocalTrialDofs + j] = s;
      out.S[j * kLocalTrialDofs + i] = s;
    }
    double s = 0.0;
    for (int r = 0; r < kLocalTestDofs; ++r)
      s += ls.B[r * kLocalTrialDofs + i] * y[kLocalTrialDofs * kLocalTestDofs + r];
    out.r[i] = s;
  }
  return out;
}

std::array<double, kLocalTrialDofs> Solution::local_trial(const Mesh& m,
                                                          int elem) const {
  std::array<double, kLocalTrialDofs> x;
  for (int k = 0; k < 3; ++k) x[k] = u[3 * elem + k];
  for (int k = 0; k < 3; ++k) x[3 + k] = pperp[3 * elem + k];
  for (int k = 0; k < 3; ++k) {
    const VertexTrio& t = uhat[m.triangles[elem][k]];
    x[6 + 3 * k + 0] = t.z;
    x[6 + 3 * k + 1] = t.gx;
    x[6 + 3 * k + 2] = t.gy;
  }
  for (int e = 0; e < 3; ++e) {
    x[15 + 2 * e + 0] = lam1[m.elem_edges[elem][e]];
    x[15 + 2 * e + 1] = lam2[m.elem_edges[elem][e]];
  }
  for (int k = 0; k < 3; ++k) x[21 + k] = jumps[3 * elem + k];
  return x;
}

GlobalSystem assemble_system(const Mesh& m, const TrialDofMap& dofs,
                             const ProblemSpec& problem,
                             const DiscreteLoad& load) {
  const int nt = m.num_triangles();
  Triplets trip;
  std::vector<double> rhs(dofs.n_unknowns, 0.0);

  LocalSystem ls;
  for (int t = 0; t < nt; ++t) {
    build_local_system(m, t, problem.gamma, load, ls);
    const CondensedLocal cl = condense(ls);
    const auto& gather = dofs.gather[t];

    // r_local minus columns of prescribed values (lifting).
    std::array<double, kLocalTrialDofs> reff = cl.r;
    for (int j = 0; j < kLocalTrialDofs; ++j) {
      const double c = gather[j].constant;
      if (c == 0.0) continue;
      for (int i = 0; i < kLocalTrialDofs; ++i)
        reff[i] -= cl.S[i * kLocalTrialDofs + j] * c;
    }
    for (int i = 0; i < kLocalTrialDofs; ++i) {
      for (const GatherTerm& gi : gather[i].terms) {
        rhs[gi.gid] += gi.weight * reff[i];
        for (int j = 0; j < kLocalTrialDofs; ++j) {
          const double sij = cl.S[i * kLocalTrialDofs + j];
          if (sij == 0.0) continue;
          for (const GatherTerm& gj : gather[j].terms) {
            trip.add(gi.gid, gj.gid, gi.weight * gj.weight * sij);
          }
        }
      }
    }
  }
  return {csr_from_triplets(dofs.n_unknowns, trip), std::move(rhs)};
}

Solution assemble_solve(const Mesh& m, const TrialDofMap& dofs,
                        const ProblemSpec& problem, const DiscreteLoad& load,
                        SolverMethod method) {
  const GlobalSystem sys = assemble_system(m, dofs, problem, load);
  SolveStats stats;
  const std::vector<double> x = sparse_solve(sys.S, sys.rhs, method, &stats);
  Solution sol = scatter_solution(m, dofs, problem, x);
  sol.stats = stats;
  return sol;
}

Solution scatter_solution(const Mesh& m, const TrialDofMap& dofs,
                          const ProblemSpec& problem,
                          std::span<const double> x) {
  const int nt = m.num_triangles();
  Solution sol;
  sol.gamma = problem.gamma;
  sol.problem = problem.name;
  sol.u.assign(3 * nt, 0.0);
  sol.pperp.assign(3 * nt, 0.0);
  sol.uhat.assign(m.num_vertices(), {});
  sol.lam1.assign(m.num_edges(), 0.0);
  sol.lam2.assign(m.num_edges(), 0.0);
  sol.jumps.assign(3 * nt, 0.0);

  auto eval_entry = [&](const GatherEntry& e) {
    double v = e.constant;
    for (const GatherTerm& t : e.terms) v += t.weight * x[t.gid];
    return v;
  };
  for (int t = 0; t < nt; ++t) {
    const auto& gather = dofs.gather[t];
    for (int k = 0; k < 3; ++k) sol.u[3 * t + k] = eval_entry(gather[k]);
    for (int k = 0; k < 3; ++k) sol.pperp[3 * t + k] = eval_entry(gather[3 + k]);
    for (int k = 0; k < 3; ++k) {
      VertexTrio& vt = sol.uhat[m.triangles[t][k]];
      vt.z = eval_entry(gather[6 + 3 * k + 0]);
      vt.gx = eval_entry(gather[6 + 3 * k + 1]);
      vt.gy = eval_entry(gather[6 + 3 * k + 2]);
    }
    for (int e = 0; e < 3; ++e) {
      sol.lam1[m.elem_edges[t][e]] = eval_entry(gather[15 + 2 * e + 0]);
      sol.lam2[m.elem_edges[t][e]] = eval_entry(gather[15 + 2 * e + 1]);
    }
    for (int k = 0; k < 3; ++k) sol.jumps[3 * t + k] = eval_entry(gather[21 + k]);
  }
  return sol;
}

void estimate(const Mesh& m, const ProblemSpec& problem,
              const DiscreteLoad& load, Solution& sol) {
  const int nt = m.num_triangles();
  sol.eta_elem.assign(nt, 0.0);
  double total = 0.0;
  LocalSystem ls;
  for (int t = 0; t < nt; ++t) {
    build_local_system(m, t, problem.gamma, load, ls);
    const auto x = sol.local_trial(m, t);
    std::array<double, kLocalTestDofs> rho;
    for (int r = 0; r < kLocalTestDofs; ++r) {
      double s = ls.l[r];
      for (int c = 0; c < kLocalTrialDofs; ++c)
        s -= ls.B[r * kLocalTrialDofs + c] * x[c];
      rho[r] = s;
    }
    const double sq = residual_energy_ld(ls.G, rho);
    sol.eta_elem[t] = std::sqrt(sq);
    total += sq;
  }
  sol.eta = std::sqrt(total);
}

std::vector<Vec2> postprocess_velocity(const Mesh& m, const Solution& sol) {
  std::vector<Vec2> vel(m.num_triangles());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Triangle tri = m.triangle(t);
    const double area2 = cross(tri[1] - tri[0], tri[2] - tri[0]);
    Vec2 grad{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      const Vec2 gl = {(tri[(k + 1) % 3].y - tri[(k + 2) % 3].y) / area2,
                       (tri[(k + 2) % 3].x - tri[(k + 1) % 3].x) / area2};
      grad = grad + sol.u[3 * t + k] * gl;
    }
    vel[t] = perp(grad);
  }
  return vel;
}

ErrorReport compute_errors(const Mesh& m, const Solution& sol,
                           const ExactSolution& exact) {
  const QuadRule& vq = default_tri_rule();
  const std::vector<Vec2> vel = postprocess_velocity(m, sol);
  double e_u = 0.0, e_vel = 0.0, e_P = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Triangle tri = m.triangle(t);
    const double jac = 2.0 * m.area(t);
    const auto phys = map_to_physical(vq, tri);
    const SymTensor ph{sol.pperp[3 * t], sol.pperp[3 * t + 1],
                       sol.pperp[3 * t + 2]};
    for (size_t q = 0; q < phys.size(); ++q) {
      const double w = jac * vq.weights[q];
      const double lam[3] = {1.0 - vq.points[q].x - vq.points[q].y,
                             vq.points[q].x, vq.points[q].y};
      double uh = 0.0;
      for (int k = 0; k < 3; ++k) uh += sol.u[3 * t + k] * lam[k];
      const double du = exact.u(phys[q]) - uh;
      e_u += w * du * du;

      const Vec2 dv = perp(exact.grad(phys[q])) - vel[t];
      e_vel += w * dot(dv, dv);

      const SymTensor he = exact.hess(phys[q]);
      const SymTensor dP{he.t11 - ph.t11, he.t22 - ph.t22, he.t12 - ph.t12};
      e_P += w * frobenius(dP, dP);
    }
  }
  ErrorReport rep;
  rep.err_u = std::sqrt(e_u);
  rep.err_vel = std::sqrt(e_vel);
  rep.err_P = std::sqrt(e_P);
  rep.eta = sol.eta;
  rep.h_max = m.h_max();
  return rep;
}

double cross_section_flux(const Mesh& m, const Solution& sol, double x0) {
  double xmin = m.vertices[0].x, xmax = m.vertices[0].x;
  for (const Vec2& v : m.vertices) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
  }
  if (!(x0 > xmin && x0 < xmax)) {
    throw GeometryError("cross_section_flux: section outside the mesh");
  }
  for (const Vec2& v : m.vertices) {
    if (std::abs(v.x - x0) < 1e-12) {
      x0 += 1e-9;
      break;
    }
  }

  const std::vector<Vec2> vel = postprocess_velocity(m, sol);
  double flux = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Triangle tri = m.triangle(t);
    double ys[2];
    int ncut = 0;
    for (int k = 0; k < 3; ++k) {
      const Vec2 a = tri[k], b = tri[(k + 1) % 3];
      if ((a.x - x0) * (b.x - x0) < 0.0) {
        const double s = (x0 - a.x) / (b.x - a.x);
        if (ncut < 2) ys[ncut++] = a.y + s * (b.y - a.y);
      }
    }
    if (ncut == 2) flux += vel[t].x * std::abs(ys[1] - ys[0]);
  }
  return flux;
}

}  // namespace stokesdpg
