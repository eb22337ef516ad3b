#include <algorithm>
#include <deque>
#include <limits>

#include "femkit/linalg.hpp"
#include "femkit/simd/kernels.hpp"

namespace femkit {

namespace {

// Samples up to 64 evenly spaced rows; full checks are the caller's business.
void spot_check_symmetry(const SparseMatrix& a) {
  const Index n = a.rows();
  const Index stride = std::max<Index>(1, n / 64);
  const double scale = a.max_abs();
  for (Index i = 0; i < n; i += stride) {
    for (Index k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const Index j = a.col_idx()[k];
      if (std::abs(a.values()[k] - a.at(j, i)) > 1e-12 * scale) {
        throw NumericalError("cg_solve: matrix is not symmetric (entry " + std::to_string(i) + "," +
                             std::to_string(j) + ")");
      }
    }
  }
}

std::vector<double> residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
  auto r = spmv(a, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

std::vector<std::vector<Index>> symmetric_adjacency(const SparseMatrix& a) {
  const Index n = a.rows();
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const Index j = a.col_idx()[k];
      if (j == i) continue;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return adj;
}

// Level structure from `root` restricted to unvisited nodes; returns (last level, depth).
std::pair<std::vector<Index>, int> bfs_levels(const std::vector<std::vector<Index>>& adj, Index root,
                                              const std::vector<char>& done) {
  std::vector<int> level(adj.size(), -1);
  std::vector<Index> frontier{root}, last{root};
  level[root] = 0;
  int depth = 0;
  while (!frontier.empty()) {
    last = frontier;
    std::vector<Index> next;
    for (Index v : frontier) {
      for (Index w : adj[v]) {
        if (!done[w] && level[w] < 0) {
          level[w] = depth + 1;
          next.push_back(w);
        }
      }
    }
    if (next.empty()) break;
    frontier = std::move(next);
    ++depth;
  }
  return {last, depth};
}

}  // namespace

SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, const CgOptions& options) {
  const Index n = a.rows();
  if (a.cols() != n || static_cast<Index>(b.size()) != n) throw InputError("cg_solve: dimension mismatch");
  SolveResult result;
  result.report.method = "cg-jacobi";
  result.report.unknowns = n;
  result.x.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 0) return result;
  spot_check_symmetry(a);

  std::vector<double> inv_diag = a.diagonal();
  for (Index i = 0; i < n; ++i) {
    if (!(inv_diag[i] > 0.0)) {
      throw NumericalError("cg_solve: non-positive diagonal entry at row " + std::to_string(i));
    }
    inv_diag[i] = 1.0 / inv_diag[i];
  }
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return result;

  const int max_it = options.max_iterations > 0 ? options.max_iterations : 10 * n;
  std::vector<double>& x = result.x;
  std::vector<double> r(b.begin(), b.end()), z(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n)),
      ap(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = simd::dot(r, z);
  std::vector<double> best = x;
  double best_norm = bnorm;

  for (int it = 1; it <= max_it; ++it) {
    a.multiply(p, ap);
    const double pap = simd::dot(p, ap);
    if (!(pap > 0.0)) throw NumericalError("cg_solve: matrix is not positive definite (p^T A p <= 0)");
    const double alpha = rz / pap;
    simd::axpy(alpha, p, x);
    simd::axpy(-alpha, ap, r);
    const double rnorm = norm2(r);
    result.report.iterations = it;
    if (rnorm < best_norm) {
      best_norm = rnorm;
      best = x;
    }
    if (rnorm <= options.tol * bnorm) {
      result.report.residual_norm = norm2(residual(a, x, b));
      return result;
    }
    for (Index i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = simd::dot(r, z);
    simd::xpby(z, rz_new / rz, p);
    rz = rz_new;
  }
  SolveReport report = result.report;
  report.residual_norm = norm2(residual(a, best, b));
  throw SolveError("cg_solve: no convergence in " + std::to_string(max_it) + " iterations (relative residual " +
                       std::to_string(report.residual_norm / bnorm) + ")",
                   std::move(best), std::move(report));
}

std::vector<Index> reverse_cuthill_mckee(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("reverse_cuthill_mckee: matrix is not square");
  const Index n = a.rows();
  const auto adj = symmetric_adjacency(a);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  auto degree = [&adj](Index v) { return adj[v].size(); };
  auto by_degree = [&](Index u, Index v) { return degree(u) != degree(v) ? degree(u) < degree(v) : u < v; };

  for (Index seed = 0; seed < n; ++seed) {
    if (done[seed]) continue;
    // Pseudo-peripheral root: walk to a minimum-degree node of the deepest level until depth stalls.
    Index root = seed;
    auto [last, depth] = bfs_levels(adj, root, done);
    for (int guard = 0; guard < 8; ++guard) {
      const Index candidate = *std::min_element(last.begin(), last.end(), by_degree);
      auto [cand_last, cand_depth] = bfs_levels(adj, candidate, done);
      if (cand_depth <= depth) break;
      root = candidate;
      last = std::move(cand_last);
      depth = cand_depth;
    }
    std::deque<Index> queue{root};
    done[root] = 1;
    while (!queue.empty()) {
      const Index v = queue.front();
      queue.pop_front();
      order.push_back(v);
      std::vector<Index> next;
      for (Index w : adj[v]) {
        if (!done[w]) {
          done[w] = 1;
          next.push_back(w);
        }
      }
      std::sort(next.begin(), next.end(), by_degree);
      queue.insert(queue.end(), next.begin(), next.end());
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

LuFactorization::LuFactorization(const SparseMatrix& a) : n_(a.rows()) {
  if (a.rows() != a.cols()) throw InputError("LU: matrix is not square");
  perm_ = reverse_cuthill_mckee(a);
  std::vector<Index> inverse(static_cast<std::size_t>(n_));
  for (Index i = 0; i < n_; ++i) inverse[perm_[i]] = i;

  for (Index i = 0; i < n_; ++i) {
    for (Index k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const Index r = inverse[i], c = inverse[a.col_idx()[k]];
      kl_ = std::max(kl_, r - c);
      ku_ = std::max(ku_, c - r);
    }
  }
  width_ = static_cast<std::size_t>(2 * kl_ + ku_ + 1);
  band_.assign(static_cast<std::size_t>(n_) * width_, 0.0);
  lower_.assign(static_cast<std::size_t>(n_) * std::max<Index>(kl_, 1), 0.0);
  pivots_.resize(static_cast<std::size_t>(n_));
  for (Index i = 0; i < n_; ++i) {
    for (Index k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) band(inverse[i], inverse[a.col_idx()[k]]) += a.values()[k];
  }

  const double threshold = 1e-14 * a.max_abs();
  for (Index j = 0; j < n_; ++j) {
    const Index last_row = std::min(n_ - 1, j + kl_);
    const Index last_col = std::min(n_ - 1, j + kl_ + ku_);
    Index p = j;
    for (Index r = j + 1; r <= last_row; ++r) {
      if (std::abs(band(r, j)) > std::abs(band(p, j))) p = r;
    }
    if (!(std::abs(band(p, j)) > threshold)) {
      throw NumericalError("LU: singular pivot at column " + std::to_string(j) + " (|pivot| <= 1e-14 max|a_ij|)");
    }
    pivots_[j] = p;
    if (p != j) std::swap_ranges(&band(j, j), &band(j, last_col) + 1, &band(p, j));
    const double pivot = band(j, j);
    const std::size_t len = static_cast<std::size_t>(last_col - j);
    for (Index r = j + 1; r <= last_row; ++r) {
      const double m = band(r, j) / pivot;
      lower_[static_cast<std::size_t>(j) * kl_ + (r - j - 1)] = m;
      band(r, j) = 0.0;
      if (m != 0.0 && len > 0) simd::axpy(-m, {&band(j, j + 1), len}, {&band(r, j + 1), len});
    }
  }
}

std::vector<double> LuFactorization::solve(std::span<const double> b) const {
  if (static_cast<Index>(b.size()) != n_) throw InputError("LU solve: dimension mismatch");
  std::vector<double> y(static_cast<std::size_t>(n_));
  for (Index i = 0; i < n_; ++i) y[i] = b[perm_[i]];
  for (Index j = 0; j < n_; ++j) {
    if (pivots_[j] != j) std::swap(y[j], y[pivots_[j]]);
    const Index last_row = std::min(n_ - 1, j + kl_);
    for (Index r = j + 1; r <= last_row; ++r) y[r] -= lower_[static_cast<std::size_t>(j) * kl_ + (r - j - 1)] * y[j];
  }
  for (Index j = n_ - 1; j >= 0; --j) {
    const Index last_col = std::min(n_ - 1, j + kl_ + ku_);
    const std::size_t len = static_cast<std::size_t>(last_col - j);
    double s = y[j];
    if (len > 0) s -= simd::dot({&band(j, j + 1), len}, {&y[j + 1], len});
    y[j] = s / band(j, j);
  }
  std::vector<double> x(static_cast<std::size_t>(n_));
  for (Index i = 0; i < n_; ++i) x[perm_[i]] = y[i];
  return x;
}

SolveResult lu_solve(const SparseMatrix& a, std::span<const double> b) {
  if (a.rows() != a.cols() || static_cast<Index>(b.size()) != a.rows()) throw InputError("lu_solve: dimension mismatch");
  SolveResult result;
  result.report.method = "lu-banded";
  result.report.unknowns = a.rows();
  if (a.rows() == 0) return result;
  const LuFactorization lu(a);
  result.x = lu.solve(b);
  // One step of iterative refinement.
  auto r = residual(a, result.x, b);
  const auto dx = lu.solve(r);
  for (std::size_t i = 0; i < dx.size(); ++i) result.x[i] += dx[i];
  result.report.iterations = 1;
  result.report.residual_norm = norm2(residual(a, result.x, b));
  return result;
}

}  // namespace femkit
