#pragma once

#include <array>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "stokesdpg/geometry.hpp"
#include "stokesdpg/mesh.hpp"
#include "stokesdpg/quadrature.hpp"

namespace stokesdpg {

// Vertex degrees of freedom of the H^2-trace space: value and gradient.
struct VertexTrio {
  double z = 0.0;
  double gx = 0.0;
  double gy = 0.0;
};

// Dirichlet data supplier.  value(p) is single-valued on the boundary;
// gradient(p, edge_mid) may branch on which boundary side the incident edge
// (identified by its midpoint) lies on.  Corner values from different sides
// must agree; build_dof_map checks this.
struct BoundaryData {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2, Vec2)> gradient;
};

// Local trial ordering on an element: u (3 nodal P1 coefficients),
// P (3 symmetric components e11,e22,e12), uhat (3 vertices x (z,gx,gy)),
// phat (3 edges x (lam1,lam2), then 3 vertex jumps).
inline constexpr int kLocalTrialDofs = 24;

struct GatherTerm {
  int gid;
  double weight;
};

// Affine map from global unknowns to one local trial coefficient.
struct GatherEntry {
  std::vector<GatherTerm> terms;
  double constant = 0.0;  // prescribed (essential) part
};

struct TrialDofMap {
  int n_unknowns = 0;
  int n_elems = 0;
  int uhat_unknowns = 0;
  int qhat_unknowns = 0;

  // 3 ids per vertex (z,gx,gy); -1 marks an essential DOF.
  std::vector<int> uhat_gid;
  std::vector<double> uhat_value;  // essential values, 0 at unknowns
  std::vector<int> lam1_gid, lam2_gid;  // per edge
  std::vector<int> jump_gid;  // 3 per element; -1 marks the eliminated jump
  std::vector<std::array<GatherEntry, kLocalTrialDofs>> gather;

  int u_gid(int elem, int k) const { return 3 * elem + k; }
  int p_gid(int elem, int k) const { return 3 * n_elems + 3 * elem + k; }
};

// Builds the global trial numbering.  bc == nullptr means homogeneous
// essential data.  Throws DataCompatibilityError when two boundary edges
// meeting at a vertex imply different gradients (discrepancy > 1e-12).
TrialDofMap build_dof_map(const Mesh& m, const BoundaryData* bc);

// Trace values induced on a global edge by its endpoint trios: the Hermite
// cubic z(s) and the linear normal derivative dz/dn(s), both with respect to
// the global edge orientation (s in [0,1] from v_lo to v_hi, normal =
// tangent rotated by -90 degrees).
std::pair<double, double> uhat_edge_values(const Mesh& m, int edge,
                                           const VertexTrio& at_lo,
                                           const VertexTrio& at_hi, double s);

// Pairing blocks entering the local trial-to-test coupling.
//
// Tensor test index: alpha * 15 + j with alpha in (e11,e22,e12) and j a
// degree-4 Bernstein member; scalar test index: degree-3 Bernstein member.
//
// uhat block: out[45 * 9] row-major over (tensor test, uhat dof), uhat dofs
// vertex-major (z,gx,gy).  phat block: out[10 * 9] row-major over (scalar
// test, phat dof), phat dofs (lam1,lam2) per local edge then 3 jumps; the
// lam2 columns include the orientation sign relative to the global edge.
void uhat_pairing_block(const Mesh& m, int elem, const QuadRule& edge_q,
                        double* out);
void phat_pairing_block(const Mesh& m, int elem, const QuadRule& edge_q,
                        double* out);

// <uhat, Q>_dT for the trace induced by the three vertex trios of the element
// and Q given by 45 coefficients in the tensor test basis.
double pair_uhat_with_test(const Mesh& m, int elem, const VertexTrio vd[3],
                           std::span<const double> q_coeffs);

// <phat, v>_dT with lam1/lam2 per local edge in global edge orientation,
// jumps per local vertex, and v given by 10 coefficients in the scalar test
// basis.
double pair_phat_with_test(const Mesh& m, int elem, const double lam1[3],
                           const double lam2[3], const double jumps[3],
                           std::span<const double> v_coeffs);

}  // namespace stokesdpg
