#pragma once

#include <span>
#include <vector>

namespace stokesdpg {

// Dense SPD Cholesky factorization, lower-triangular packed storage.
class DenseSpd {
 public:
  // a: row-major n x n, symmetric.  Throws SpdError with the failing pivot
  // index when a is not positive definite.
  static DenseSpd factor(std::span<const double> a, int n);

  int order() const { return n_; }
  void solve_in_place(std::span<double> b) const;
  std::vector<double> solve(std::span<const double> b) const;
  // Multiple right-hand sides, column-major x[n][m] layout: x[j*n + i].
  void solve_many(double* x, int m) const;

 private:
  int n_ = 0;
  std::vector<double> l_;  // row-major lower triangle, packed full rows
};

// Dense LU with partial pivoting (for small indefinite systems).
std::vector<double> dense_lu_solve(std::vector<double> a, std::vector<double> b,
                                   int n);

// Symmetric sparse matrix in CSR form, full (both triangles) storage.
struct SparseSpd {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;
};

// (i,j,v) accumulator; csr_from_triplets sums duplicates in insertion order.
struct Triplets {
  std::vector<int> rows, cols;
  std::vector<double> vals;
  void add(int i, int j, double v) {
    rows.push_back(i);
    cols.push_back(j);
    vals.push_back(v);
  }
};
SparseSpd csr_from_triplets(int n, const Triplets& t);

void spmv(const SparseSpd& a, std::span<const double> x, std::span<double> y);

enum class SolverMethod { direct, pcg };

struct SolveStats {
  int iterations = 0;        // 0 for the direct path
  double relative_residual = 0.0;
  std::vector<double> pcg_residual_history;  // preconditioned residual norms
  // CG minimizes the quadratic functional 0.5 x'Sx - x'b over growing Krylov
  // spaces; this history is strictly decreasing while residual norms may not be.
  std::vector<double> pcg_energy_history;
};

// Solves S x = r for SPD S.  direct: sparse Cholesky factorization;
// pcg: Jacobi-preconditioned conjugate gradients, relative residual 1e-10,
// iteration cap 200*sqrt(n).  Throws SolveError / SpdError on breakdown.
std::vector<double> sparse_solve(const SparseSpd& s, std::span<const double> r,
                                 SolverMethod method, SolveStats* stats = nullptr);

// Reverse Cuthill-McKee ordering of an undirected graph given as adjacency
// lists; ties broken by vertex index.  Returns a permutation perm with
// perm[k] = original vertex at position k.
std::vector<int> rcm_order(const std::vector<std::vector<int>>& adjacency);

// Profile (sum of skyline row heights) of the CSR pattern under a permutation.
long long profile(const SparseSpd& s, const std::vector<int>& perm);

}  // namespace stokesdpg
