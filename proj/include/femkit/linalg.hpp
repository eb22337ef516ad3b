#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "femkit/common.hpp"

namespace femkit {

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

/// Assembly buffer; duplicates are allowed and summed by finalize().
class TripletList {
 public:
  TripletList(Index rows, Index cols) : rows_(rows), cols_(cols) {}

  /// Throws InputError on an index outside the shape.
  void add(Index row, Index col, double value);
  void reserve(std::size_t n) { entries_.reserve(n); }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const std::vector<Triplet>& entries() const { return entries_; }

 private:
  Index rows_, cols_;
  std::vector<Triplet> entries_;
};

/// Compressed-row matrix, columns sorted within each row. Immutable once built.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols, std::vector<Index> row_ptr, std::vector<Index> col_idx,
               std::vector<double> values);

  static SparseMatrix identity(Index n);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  const std::vector<Index>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  /// Entry (i, j), zero if not stored.
  double at(Index i, Index j) const;
  double max_abs() const;
  std::vector<double> diagonal() const;
  std::vector<double> to_dense() const;  // row-major
  SparseMatrix transposed() const;

  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  Index rows_ = 0, cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

SparseMatrix finalize(const TripletList& triplets);
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);

struct ScaledMatrix {
  double scale;
  const SparseMatrix* matrix;
};
/// sum_k scale_k * A_k; all terms must share a shape.
SparseMatrix linear_combination(std::initializer_list<ScaledMatrix> terms);

/// Rows `rows` and columns `cols` of `a`, renumbered 0..n-1 in the given order.
SparseMatrix submatrix(const SparseMatrix& a, std::span<const Index> rows, std::span<const Index> cols);

/// Largest |a_ij - a_ji|.
double asymmetry(const SparseMatrix& a);

struct SolveReport {
  std::string method;
  int iterations = 0;
  double residual_norm = 0.0;  // ||b - A x||_2
  Index unknowns = 0;
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

/// Raised when CG exhausts its iteration budget; carries the best iterate.
class SolveError : public NumericalError {
 public:
  SolveError(const std::string& what, std::vector<double> best, SolveReport report)
      : NumericalError(what), best_(std::move(best)), report_(std::move(report)) {}
  const std::vector<double>& best_iterate() const { return best_; }
  const SolveReport& report() const { return report_; }

 private:
  std::vector<double> best_;
  SolveReport report_;
};

struct CgOptions {
  double tol = 1e-10;      // relative: ||r|| <= tol ||b||
  int max_iterations = 0;  // 0 means 10 n
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite systems.
SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, const CgOptions& options = {});

/// Reverse Cuthill-McKee ordering of the symmetrised pattern; perm[new] = old.
std::vector<Index> reverse_cuthill_mckee(const SparseMatrix& a);

/// Partial-pivoted LU of the band-limited image of a square matrix after a
/// reverse Cuthill-McKee reordering. Cost O(n * kl * (kl + ku)).
class LuFactorization {
 public:
  explicit LuFactorization(const SparseMatrix& a);

  std::vector<double> solve(std::span<const double> b) const;

  Index size() const { return n_; }
  Index lower_bandwidth() const { return kl_; }
  Index upper_bandwidth() const { return ku_; }

 private:
  double& band(Index r, Index c) { return band_[static_cast<std::size_t>(r) * width_ + (c - r + kl_)]; }
  const double& band(Index r, Index c) const { return band_[static_cast<std::size_t>(r) * width_ + (c - r + kl_)]; }

  Index n_ = 0, kl_ = 0, ku_ = 0;
  std::size_t width_ = 0;
  std::vector<Index> perm_;  // perm_[new] = old
  std::vector<double> band_;
  std::vector<double> lower_;  // multipliers, kl_ per column
  std::vector<Index> pivots_;
};

/// One-shot LU solve; the report carries the true residual.
SolveResult lu_solve(const SparseMatrix& a, std::span<const double> b);

double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);

}  // namespace femkit
