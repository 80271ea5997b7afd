#include "stokesdpg/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "stokesdpg/errors.hpp"

namespace stokesdpg {

DenseSpd DenseSpd::factor(std::span<const double> a, int n) {
  DenseSpd f;
  f.n_ = n;
  f.l_.assign(static_cast<size_t>(n) * n, 0.0);
  auto L = [&](int i, int j) -> double& { return f.l_[static_cast<size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      if (i == j) {
        if (!(s > 0.0)) {
          throw SpdError("dense_cholesky: non-positive pivot at index " +
                         std::to_string(i), i);
        }
        L(i, i) = std::sqrt(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  return f;
}

void DenseSpd::solve_in_place(std::span<double> b) const {
  const int n = n_;
  auto L = [&](int i, int j) { return l_[static_cast<size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= L(i, k) * b[k];
    b[i] = s / L(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= L(k, i) * b[k];
    b[i] = s / L(i, i);
  }
}

std::vector<double> DenseSpd::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

void DenseSpd::solve_many(double* x, int m) const {
  for (int j = 0; j < m; ++j) {
    solve_in_place(std::span<double>(x + static_cast<size_t>(j) * n_, n_));
  }
}

std::vector<double> dense_lu_solve(std::vector<double> a, std::vector<double> b,
                                   int n) {
  std::vector<int> piv(n);
  std::iota(piv.begin(), piv.end(), 0);
  auto A = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
    if (A(p, k) == 0.0) throw SolveError("dense_lu_solve: singular matrix");
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(A(p, j), A(k, j));
      std::swap(b[p], b[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double m = A(i, k) / A(k, k);
      A(i, k) = m;
      for (int j = k + 1; j < n; ++j) A(i, j) -= m * A(k, j);
      b[i] -= m * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * b[j];
    b[i] = s / A(i, i);
  }
  return b;
}

SparseSpd csr_from_triplets(int n, const Triplets& t) {
  const size_t m = t.vals.size();
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (t.rows[a] != t.rows[b]) return t.rows[a] < t.rows[b];
    if (t.cols[a] != t.cols[b]) return t.cols[a] < t.cols[b];
    return a < b;  // keep insertion order within a key for deterministic sums
  });
  SparseSpd s;
  s.n = n;
  s.row_ptr.assign(n + 1, 0);
  for (size_t p = 0; p < m;) {
    const int i = t.rows[order[p]];
    const int j = t.cols[order[p]];
    double v = 0.0;
    while (p < m && t.rows[order[p]] == i && t.cols[order[p]] == j) {
      v += t.vals[order[p]];
      ++p;
    }
    s.col.push_back(j);
    s.val.push_back(v);
    ++s.row_ptr[i + 1];
  }
  for (int i = 0; i < n; ++i) s.row_ptr[i + 1] += s.row_ptr[i];
  return s;
}

void spmv(const SparseSpd& a, std::span<const double> x, std::span<double> y) {
  for (int i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      s += a.val[p] * x[a.col[p]];
    }
    y[i] = s;
  }
}

namespace {

std::vector<double> solve_direct(const SparseSpd& s, std::span<const double> r) {
  using SpMat = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(s.val.size());
  for (int i = 0; i < s.n; ++i) {
    for (int p = s.row_ptr[i]; p < s.row_ptr[i + 1]; ++p) {
      trip.emplace_back(i, s.col[p], s.val[p]);
    }
  }
  SpMat A(s.n, s.n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLLT<SpMat> llt;
  llt.compute(A);
  if (llt.info() != Eigen::Success) {
    throw SpdError("sparse_solve(direct): Cholesky factorization failed "
                   "(matrix not SPD)");
  }
  Eigen::Map<const Eigen::VectorXd> rhs(r.data(), s.n);
  Eigen::VectorXd x = llt.solve(rhs);
  return std::vector<double>(x.data(), x.data() + s.n);
}

std::vector<double> solve_pcg(const SparseSpd& s, std::span<const double> r,
                              SolveStats* stats) {
  const int n = s.n;
  std::vector<double> dinv(n);
  for (int i = 0; i < n; ++i) {
    double d = 0.0;
    for (int p = s.row_ptr[i]; p < s.row_ptr[i + 1]; ++p) {
      if (s.col[p] == i) d = s.val[p];
    }
    if (!(d > 0.0)) {
      throw SpdError("sparse_solve(pcg): non-positive diagonal at row " +
                     std::to_string(i), i);
    }
    dinv[i] = 1.0 / d;
  }

  std::vector<double> x(n, 0.0), res(r.begin(), r.end()), z(n), p(n), ap(n);
  const double rnorm0 = std::sqrt(std::inner_product(res.begin(), res.end(),
                                                     res.begin(), 0.0));
  if (rnorm0 == 0.0) return x;
  for (int i = 0; i < n; ++i) z[i] = dinv[i] * res[i];
  p = z;
  double rz = std::inner_product(res.begin(), res.end(), z.begin(), 0.0);
  const int max_it = static_cast<int>(200.0 * std::sqrt(static_cast<double>(n))) + 1;
  double energy = 0.0;  // value of 0.5 x'Sx - x'b at x0 = 0
  for (int it = 0; it < max_it; ++it) {
    if (stats) stats->pcg_residual_history.push_back(std::sqrt(rz));
    spmv(s, p, ap);
    const double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
    if (!(pap > 0.0)) {
      throw SolveError("sparse_solve(pcg): breakdown, p'Ap <= 0 at iteration " +
                       std::to_string(it));
    }
    const double alpha = rz / pap;
    energy -= 0.5 * alpha * rz;
    if (stats) stats->pcg_energy_history.push_back(energy);
    for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (int i = 0; i < n; ++i) res[i] -= alpha * ap[i];
    const double rnorm = std::sqrt(std::inner_product(res.begin(), res.end(),
                                                      res.begin(), 0.0));
    if (stats) {
      stats->iterations = it + 1;
      stats->relative_residual = rnorm / rnorm0;
    }
    if (rnorm <= 1e-10 * rnorm0) return x;
    for (int i = 0; i < n; ++i) z[i] = dinv[i] * res[i];
    const double rz_new = std::inner_product(res.begin(), res.end(), z.begin(), 0.0);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolveError("sparse_solve(pcg): no convergence within " +
                   std::to_string(max_it) + " iterations");
}

}  // namespace

std::vector<double> sparse_solve(const SparseSpd& s, std::span<const double> r,
                                 SolverMethod method, SolveStats* stats) {
  std::vector<double> x = method == SolverMethod::direct ? solve_direct(s, r)
                                                         : solve_pcg(s, r, stats);
  if (stats) {
    std::vector<double> ax(s.n);
    spmv(s, x, ax);
    double dn = 0.0, rn = 0.0;
    for (int i = 0; i < s.n; ++i) {
      dn += (ax[i] - r[i]) * (ax[i] - r[i]);
      rn += r[i] * r[i];
    }
    stats->relative_residual = rn > 0.0 ? std::sqrt(dn / rn) : std::sqrt(dn);
  }
  return x;
}

std::vector<int> rcm_order(const std::vector<std::vector<int>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<int> degree(n);
  for (int i = 0; i < n; ++i) degree[i] = static_cast<int>(adjacency[i].size());

  std::vector<char> visited(n, 0);
  std::vector<int> order;
  order.reserve(n);
  for (int start = 0; start < n; ++start) {
    if (visited[start]) continue;
    // Lowest-degree unvisited vertex of this component (ties by index).
    int root = start;
    for (int v = start; v < n; ++v) {
      if (!visited[v] && (degree[v] < degree[root])) root = v;
    }
    std::queue<int> q;
    q.push(root);
    visited[root] = 1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      order.push_back(v);
      std::vector<int> nbrs;
      for (int w : adjacency[v]) {
        if (!visited[w]) {
          visited[w] = 1;
          nbrs.push_back(w);
        }
      }
      std::sort(nbrs.begin(), nbrs.end(), [&](int a, int b) {
        return degree[a] != degree[b] ? degree[a] < degree[b] : a < b;
      });
      for (int w : nbrs) q.push(w);
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

long long profile(const SparseSpd& s, const std::vector<int>& perm) {
  std::vector<int> pos(s.n);
  for (int k = 0; k < s.n; ++k) pos[perm[k]] = k;
  long long total = 0;
  for (int i = 0; i < s.n; ++i) {
    int lo = pos[i];
    for (int p = s.row_ptr[i]; p < s.row_ptr[i + 1]; ++p) {
      lo = std::min(lo, pos[s.col[p]]);
    }
    total += pos[i] - lo + 1;
  }
  return total;
}

}  // namespace stokesdpg
