#include "stokesdpg/study.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "stokesdpg/basis.hpp"
#include "stokesdpg/errors.hpp"
#include "stokesdpg/loadreg.hpp"
#include "stokesdpg/quadrature.hpp"
#include "stokesdpg/vtk.hpp"

namespace stokesdpg {

namespace {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_num(*v) : std::string();
}

std::optional<double> eoc(const std::optional<double>& prev,
                          const std::optional<double>& cur) {
  if (!prev || !cur || !(*prev > 0.0) || !(*cur > 0.0)) return std::nullopt;
  return std::log2(*prev / *cur);
}

}  // namespace

std::string ConvergenceRecord::csv() const {
  std::ostringstream os;
  os << "level,nT,dofs,eta,err_u,err_vel,err_P,eoc_u,eoc_vel,eoc_P,eoc_eta\n";
  for (const LevelRecord& r : levels) {
    os << r.level << ',' << r.n_triangles << ',' << r.dofs << ','
       << fmt_num(r.eta) << ',' << fmt_opt(r.err_u) << ',' << fmt_opt(r.err_vel)
       << ',' << fmt_opt(r.err_P) << ',' << fmt_opt(r.eoc_u) << ','
       << fmt_opt(r.eoc_vel) << ',' << fmt_opt(r.eoc_P) << ','
       << fmt_opt(r.eoc_eta) << '\n';
  }
  return os.str();
}

ConvergenceRecord run_convergence(const RunConfig& cfg) {
  if (cfg.levels < 1) throw std::invalid_argument("run_convergence: levels >= 1");
  ProblemSpec problem = problem_by_name(cfg.problem);
  problem.gamma = cfg.gamma;

  const bool dump = !cfg.out_dir.empty();
  if (dump) std::filesystem::create_directories(cfg.out_dir);

  ConvergenceRecord rec;
  Mesh mesh = generate(problem.domain);
  std::optional<double> prev_eta;
  for (int level = 1; level <= cfg.levels; ++level) {
    mesh = refine_red(mesh);
    const TrialDofMap dofs = build_dof_map(mesh, &problem.bc);
    const DiscreteLoad load = make_load(mesh, problem);
    Solution sol;
    try {
      sol = assemble_solve(mesh, dofs, problem, load, cfg.method);
    } catch (const std::exception& e) {
      throw SolveError("level " + std::to_string(level) + ": " + e.what());
    }
    estimate(mesh, problem, load, sol);

    LevelRecord r;
    r.level = level;
    r.n_triangles = mesh.num_triangles();
    r.dofs = dofs.n_unknowns;
    r.eta = sol.eta;
    if (problem.exact) {
      ErrorReport er = compute_errors(mesh, sol, *problem.exact);
      er.trial_dofs = dofs.n_unknowns;
      r.err_u = er.err_u;
      r.err_vel = er.err_vel;
      r.err_P = er.err_P;
    }
    if (!rec.levels.empty()) {
      const LevelRecord& p = rec.levels.back();
      r.eoc_u = eoc(p.err_u, r.err_u);
      r.eoc_vel = eoc(p.err_vel, r.err_vel);
      r.eoc_P = eoc(p.err_P, r.err_P);
      r.eoc_eta = eoc(prev_eta, r.eta);
    }
    prev_eta = r.eta;
    rec.levels.push_back(r);

    if (dump) {
      std::ofstream vf(std::filesystem::path(cfg.out_dir) /
                       ("fields_level" + std::to_string(level) + ".vtk"));
      write_vtk_fields(mesh, sol, vf, cfg.problem.c_str());
    }
  }
  if (dump) {
    std::ofstream cf(std::filesystem::path(cfg.out_dir) / (cfg.problem + ".csv"));
    cf << rec.csv();
  }
  return rec;
}

std::string run_flux_csv(const RunConfig& cfg) {
  if (cfg.problem != "channel") {
    throw std::invalid_argument("run_flux_csv: flux sections need the channel problem");
  }
  ProblemSpec problem = problem_by_name(cfg.problem);
  problem.gamma = cfg.gamma;

  Mesh mesh = generate(problem.domain);
  for (int level = 1; level <= cfg.levels; ++level) mesh = refine_red(mesh);
  const TrialDofMap dofs = build_dof_map(mesh, &problem.bc);
  const DiscreteLoad load = make_load(mesh, problem);
  const Solution sol = assemble_solve(mesh, dofs, problem, load, cfg.method);

  std::ostringstream os;
  os << "x,flux,deviation\n";
  for (double x0 : cfg.flux_sections) {
    const double f = cross_section_flux(mesh, sol, x0);
    os << fmt_num(x0) << ',' << fmt_num(f) << ',' << fmt_num(f - 1.0 / 6.0)
       << '\n';
  }
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream cf(std::filesystem::path(cfg.out_dir) / "flux.csv");
    cf << os.str();
  }
  return os.str();
}

std::vector<double> gather_unknowns(const Mesh& m, const TrialDofMap& dofs,
                                    const Solution& sol) {
  std::vector<double> x(dofs.n_unknowns, 0.0);
  for (int t = 0; t < m.num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      x[dofs.u_gid(t, k)] = sol.u[3 * t + k];
      x[dofs.p_gid(t, k)] = sol.pperp[3 * t + k];
      const int jg = dofs.jump_gid[3 * t + k];
      if (jg >= 0) x[jg] = sol.jumps[3 * t + k];
    }
  }
  for (int v = 0; v < m.num_vertices(); ++v) {
    const int g0 = dofs.uhat_gid[3 * v];
    if (g0 < 0) continue;
    x[g0] = sol.uhat[v].z;
    x[dofs.uhat_gid[3 * v + 1]] = sol.uhat[v].gx;
    x[dofs.uhat_gid[3 * v + 2]] = sol.uhat[v].gy;
  }
  for (int e = 0; e < m.num_edges(); ++e) {
    x[dofs.lam1_gid[e]] = sol.lam1[e];
    x[dofs.lam2_gid[e]] = sol.lam2[e];
  }
  return x;
}

std::vector<double> saddle_point_solution(const Mesh& m, const TrialDofMap& dofs,
                                          const ProblemSpec& problem,
                                          const DiscreteLoad& load) {
  const int nt = m.num_triangles();
  const int ntest = kLocalTestDofs * nt;
  const int n = ntest + dofs.n_unknowns;
  std::vector<double> A(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> rhs(n, 0.0);

  LocalSystem ls;
  for (int t = 0; t < nt; ++t) {
    build_local_system(m, t, problem.gamma, load, ls);
    const int row0 = kLocalTestDofs * t;
    for (int r = 0; r < kLocalTestDofs; ++r) {
      for (int c = 0; c < kLocalTestDofs; ++c) {
        A[static_cast<size_t>(row0 + r) * n + (row0 + c)] =
            ls.G[r * kLocalTestDofs + c];
      }
      rhs[row0 + r] = ls.l[r];
    }
    const auto& gather = dofs.gather[t];
    for (int i = 0; i < kLocalTrialDofs; ++i) {
      const GatherEntry& ge = gather[i];
      for (int r = 0; r < kLocalTestDofs; ++r) {
        const double bri = ls.B[r * kLocalTrialDofs + i];
        if (bri == 0.0) continue;
        rhs[row0 + r] -= bri * ge.constant;
        for (const GatherTerm& gt : ge.terms) {
          A[static_cast<size_t>(row0 + r) * n + (ntest + gt.gid)] +=
              bri * gt.weight;
          A[static_cast<size_t>(ntest + gt.gid) * n + (row0 + r)] +=
              bri * gt.weight;
        }
      }
    }
  }

  const std::vector<double> xfull = dense_lu_solve(std::move(A), std::move(rhs), n);
  return std::vector<double>(xfull.begin() + ntest, xfull.end());
}

bool OracleReport::all_pass() const {
  for (const Item& i : items)
    if (!i.pass) return false;
  return true;
}

std::string OracleReport::text() const {
  std::ostringstream os;
  for (const Item& i : items) {
    os << (i.pass ? "pass" : "FAIL") << "  " << i.name << "  defect="
       << fmt_num(i.defect);
    if (!i.detail.empty()) os << "  (" << i.detail << ")";
    os << '\n';
  }
  return os.str();
}

namespace {

struct Quadratic {
  // z = c0 + c1 x + c2 y + c3 x^2 + c4 x y + c5 y^2
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

// (z, divDiv Q)_T - (Hess z, Q)_T by volume quadrature; the independent
// counterpart of the boundary-formula pairing.
double volume_pairing(const Mesh& m, int elem, const Quadratic& z,
                      std::span<const double> q_coeffs) {
  const Triangle tri = m.triangle(elem);
  const QuadRule& vq = default_tri_rule();
  const ScalarBasis b4 = basis_tables(4, vq, tri);
  const auto phys = map_to_physical(vq, tri);
  const double jac = 2.0 * m.area(elem);
  const SymTensor hz = z.hess();
  double s = 0.0;
  for (size_t q = 0; q < phys.size(); ++q) {
    double dd = 0.0;
    SymTensor Q{0.0, 0.0, 0.0};
    for (int a = 0; a < 3; ++a) {
      for (int j = 0; j < b4.dim; ++j) {
        const double cj = q_coeffs[a * b4.dim + j];
        if (cj == 0.0) continue;
        dd += cj * div_div(b4, q, j, a);
        const double v = cj * b4.v(q, j);
        if (a == 0) Q.t11 += v;
        else if (a == 1) Q.t22 += v;
        else Q.t12 += v;
      }
    }
    s += jac * vq.weights[q] * (z.value(phys[q]) * dd - frobenius(hz, Q));
  }
  return s;
}

Mesh single_triangle_mesh(const Triangle& tri) {
  Mesh m;
  m.vertices = {tri[0], tri[1], tri[2]};
  m.triangles = {{0, 1, 2}};
  build_topology(m);
  return m;
}

}  // namespace

OracleReport run_oracles(std::uint64_t seed) {
  OracleReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  // Integration-by-parts identity sweep.
  {
    double max_rel = 0.0;
    int done = 0;
    while (done < 200) {
      Triangle tri;
      for (int k = 0; k < 3; ++k) tri[k] = {uni(rng), uni(rng)};
      if (signed_area(tri) < 0.0) std::swap(tri[1], tri[2]);
      if (signed_area(tri) < 0.15) continue;
      ++done;
      const Mesh m1 = single_triangle_mesh(tri);
      Quadratic z;
      for (double& c : z.c) c = uni(rng);
      std::vector<double> qc(45);
      for (double& c : qc) c = uni(rng);
      VertexTrio vd[3];
      for (int k = 0; k < 3; ++k) {
        vd[k].z = z.value(tri[k]);
        const Vec2 g = z.grad(tri[k]);
        vd[k].gx = g.x;
        vd[k].gy = g.y;
      }
      const double bdry = pair_uhat_with_test(m1, 0, vd, qc);
      const double vol = volume_pairing(m1, 0, z, qc);
      const double rel = std::abs(bdry - vol) / std::max(std::abs(vol), 1e-12);
      max_rel = std::max(max_rel, rel);
    }
    rep.items.push_back({"integration-by-parts sweep (200 samples)",
                         max_rel <= 1e-9, max_rel, ""});
  }

  // Biorthogonality of the dual basis on unit_square(2).
  {
    const Mesh m = unit_square_mesh(2);
    const DualBasis db = build_dual_basis(m);
    double max_def = 0.0;
    for (int x = 0; x < m.num_vertices(); ++x) {
      if (m.boundary_vertex[x]) continue;
      for (int y = 0; y < m.num_vertices(); ++y) {
        double s = 0.0;
        for (int t = 0; t < m.num_triangles(); ++t) {
          int ky = -1;
          for (int k = 0; k < 3; ++k)
            if (m.triangles[t][k] == y) ky = k;
          if (ky < 0) continue;
          double psi[3];
          psi_nodal_on_element(m, db, x, t, psi);
          const double a = m.area(t) / 12.0;
          for (int i = 0; i < 3; ++i)
            s += a * psi[i] * (i == ky ? 2.0 : 1.0);
        }
        max_def = std::max(max_def, std::abs(s - (x == y ? 1.0 : 0.0)));
      }
    }
    rep.items.push_back({"dual-basis biorthogonality (unit_square(2))",
                         max_def <= 1e-12, max_def, ""});
  }

  // Dimension formulas.
  {
    bool ok = true;
    std::string detail;
    const Mesh meshes[3] = {unit_square_mesh(1), refine_red(unit_square_mesh(2)),
                            channel_step_mesh()};
    const char* names[3] = {"unit_square(1)", "unit_square(2)+1", "channel"};
    for (int i = 0; i < 3; ++i) {
      const Mesh& m = meshes[i];
      const TrialDofMap d = build_dof_map(m, nullptr);
      const int n0 = m.num_interior_vertices();
      const int expect_uhat = 3 * n0;
      const int expect_qhat = 2 * m.num_edges() + 3 * m.num_triangles() - n0;
      if (d.uhat_unknowns != expect_uhat || d.qhat_unknowns != expect_qhat) {
        ok = false;
        detail += std::string(names[i]) + " mismatch; ";
      }
    }
    rep.items.push_back({"trace-space dimension formulas", ok, 0.0, detail});
  }

  // Mixed-form equivalence on unit_square(1), both load modes.
  {
    double max_rel = 0.0;
    const Mesh m = unit_square_mesh(1);
    for (const char* pname : {"plate", "smooth"}) {
      const ProblemSpec problem = problem_by_name(pname);
      const TrialDofMap dofs = build_dof_map(m, &problem.bc);
      const DiscreteLoad load = make_load(m, problem);
      const Solution sol =
          assemble_solve(m, dofs, problem, load, SolverMethod::direct);
      const std::vector<double> x1 = gather_unknowns(m, dofs, sol);
      const std::vector<double> x2 = saddle_point_solution(m, dofs, problem, load);
      double scale = 0.0;
      for (double v : x2) scale = std::max(scale, std::abs(v));
      for (size_t i = 0; i < x1.size(); ++i) {
        max_rel = std::max(max_rel, std::abs(x1[i] - x2[i]) /
                                        std::max(scale, 1e-12));
      }
    }
    rep.items.push_back({"mixed-form equivalence (unit_square(1))",
                         max_rel <= 1e-8, max_rel, ""});
  }

  // Gram matrices SPD (Cholesky succeeds).
  {
    bool ok = true;
    std::string detail;
    const Mesh meshes[2] = {refine_red(unit_square_mesh(2)), channel_step_mesh()};
    DiscreteLoad zero;
    try {
      for (const Mesh& m : meshes) {
        LocalSystem ls;
        for (int t = 0; t < m.num_triangles(); ++t) {
          build_local_system(m, t, 0.0, zero, ls);
          (void)condense(ls);
        }
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    rep.items.push_back({"test Gram SPD / condensation", ok, 0.0, detail});
  }

  return rep;
}

}  // namespace stokesdpg
