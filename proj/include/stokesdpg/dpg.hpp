#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "stokesdpg/linalg.hpp"
#include "stokesdpg/loadreg.hpp"
#include "stokesdpg/mesh.hpp"
#include "stokesdpg/problems.hpp"
#include "stokesdpg/tracespace.hpp"

namespace stokesdpg {

// Broken test space on an element: 10 scalar (P3) + 45 tensor (P4, symmetric)
// members.  Tensor test index: 10 + alpha*15 + j.
inline constexpr int kLocalTestDofs = 55;
inline constexpr int kScalarTestDofs = 10;

// Per-element system: test Gram matrix G, trial-to-test coupling B, load l.
struct LocalSystem {
  std::array<double, kLocalTestDofs * kLocalTestDofs> G;
  std::array<double, kLocalTestDofs * kLocalTrialDofs> B;
  std::array<double, kLocalTestDofs> l;
};

// Load in assembled form: the regularized piecewise-P1 field for the
// vector mode, a pointwise-evaluable density for the L2 mode, or zero.
struct DiscreteLoad {
  LoadMode mode = LoadMode::zero;
  PiecewiseP1 p1;
  std::function<double(Vec2)> g;
};

DiscreteLoad make_load(const Mesh& m, const ProblemSpec& problem);

void build_local_system(const Mesh& m, int elem, double gamma,
                        const DiscreteLoad& load, LocalSystem& ls);

struct CondensedLocal {
  std::array<double, kLocalTrialDofs * kLocalTrialDofs> S;  // B' G^{-1} B
  std::array<double, kLocalTrialDofs> r;                    // B' G^{-1} l
};

// Condenses through the discrete trial-to-test operator.  Throws SpdError
// when the Gram matrix fails to factorize.
CondensedLocal condense(const LocalSystem& ls);

struct Solution {
  double gamma = 0.0;
  std::string problem;
  std::vector<double> u;            // 3 nodal P1 coefficients per element
  std::vector<double> pperp;        // 3 symmetric components per element
  std::vector<VertexTrio> uhat;     // per vertex, essential values included
  std::vector<double> lam1, lam2;   // per edge
  std::vector<double> jumps;        // 3 per element, eliminated ones rebuilt
  std::vector<double> eta_elem;     // filled by estimate()
  double eta = 0.0;
  SolveStats stats;

  // Local trial coefficient vector in the fixed 24-dof order.
  std::array<double, kLocalTrialDofs> local_trial(const Mesh& m, int elem) const;
};

// Condensed normal equations on the unknowns, essential data lifted.
struct GlobalSystem {
  SparseSpd S;
  std::vector<double> rhs;
};

GlobalSystem assemble_system(const Mesh& m, const TrialDofMap& dofs,
                             const ProblemSpec& problem,
                             const DiscreteLoad& load);

Solution assemble_solve(const Mesh& m, const TrialDofMap& dofs,
                        const ProblemSpec& problem, const DiscreteLoad& load,
                        SolverMethod method);

// Scatters a global unknown vector into the named coefficient fields.
Solution scatter_solution(const Mesh& m, const TrialDofMap& dofs,
                          const ProblemSpec& problem,
                          std::span<const double> x);

// Built-in error estimator: eta_T^2 = rho' G^{-1} rho with the local residual
// rho = l - B x; fills sol.eta_elem and sol.eta.
void estimate(const Mesh& m, const ProblemSpec& problem,
              const DiscreteLoad& load, Solution& sol);

// Element-wise constant velocity curl u_h = (dy u_h, -dx u_h).
std::vector<Vec2> postprocess_velocity(const Mesh& m, const Solution& sol);

struct ErrorReport {
  double err_u = 0.0;
  double err_vel = 0.0;
  double err_P = 0.0;
  double eta = 0.0;
  int trial_dofs = 0;
  double h_max = 0.0;
};

ErrorReport compute_errors(const Mesh& m, const Solution& sol,
                           const ExactSolution& exact);

// Integral of the horizontal velocity across the vertical section x = x0,
// by exact segment-length summation over elements.  Throws GeometryError
// when x0 lies outside the mesh.
double cross_section_flux(const Mesh& m, const Solution& sol, double x0);

}  // namespace stokesdpg
