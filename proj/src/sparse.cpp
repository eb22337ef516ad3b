#include <algorithm>
#include <numeric>

#include "femkit/linalg.hpp"
#include "femkit/simd/kernels.hpp"

namespace femkit {

void TripletList::add(Index row, Index col, double value) {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
    throw InputError("triplet (" + std::to_string(row) + "," + std::to_string(col) + ") outside " +
                     std::to_string(rows_) + "x" + std::to_string(cols_) + " matrix");
  }
  entries_.push_back({row, col, value});
}

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<Index> row_ptr, std::vector<Index> col_idx,
                           std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (static_cast<Index>(row_ptr_.size()) != rows_ + 1 || col_idx_.size() != values_.size() ||
      static_cast<std::size_t>(row_ptr_.back()) != values_.size()) {
    throw InputError("inconsistent compressed-row arrays");
  }
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Index> ptr(static_cast<std::size_t>(n) + 1), col(static_cast<std::size_t>(n));
  std::iota(ptr.begin(), ptr.end(), 0);
  std::iota(col.begin(), col.end(), 0);
  return SparseMatrix(n, n, std::move(ptr), std::move(col), std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

double SparseMatrix::at(Index i, Index j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw InputError("matrix index out of range");
  const auto first = col_idx_.begin() + row_ptr_[i], last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? values_[static_cast<std::size_t>(it - col_idx_.begin())] : 0.0;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(std::min(rows_, cols_)), 0.0);
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) d[i] = at(i, i);
  return d;
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> out(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out[static_cast<std::size_t>(i) * cols_ + col_idx_[k]] += values_[k];
  }
  return out;
}

SparseMatrix SparseMatrix::transposed() const {
  TripletList t(cols_, rows_);
  t.reserve(nnz());
  for (Index i = 0; i < rows_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.add(col_idx_[k], i, values_[k]);
  }
  return finalize(t);
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<Index>(x.size()) != cols_ || static_cast<Index>(y.size()) != rows_) {
    throw InputError("spmv: dimension mismatch");
  }
  simd::spmv({row_ptr_, col_idx_, values_}, x, y);
}

SparseMatrix finalize(const TripletList& triplets) {
  const Index rows = triplets.rows();
  const auto& entries = triplets.entries();
  std::vector<Index> count(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& t : entries) ++count[static_cast<std::size_t>(t.row) + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<std::pair<Index, double>> bucket(entries.size());
  {
    std::vector<Index> fill(count.begin(), count.end() - 1);
    for (const auto& t : entries) bucket[static_cast<std::size_t>(fill[t.row]++)] = {t.col, t.value};
  }
  std::vector<Index> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  col_idx.reserve(entries.size());
  values.reserve(entries.size());
  for (Index r = 0; r < rows; ++r) {
    auto first = bucket.begin() + count[r], last = bucket.begin() + count[r + 1];
    // Stable sort keeps the per-entry summation order equal to insertion order.
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!col_idx.empty() && static_cast<Index>(col_idx.size()) > row_ptr[r] && col_idx.back() == it->first) {
        values.back() += it->second;
      } else {
        col_idx.push_back(it->first);
        values.push_back(it->second);
      }
    }
    row_ptr[r + 1] = static_cast<Index>(col_idx.size());
  }
  return SparseMatrix(rows, triplets.cols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(static_cast<std::size_t>(a.rows()), 0.0);
  a.multiply(x, y);
  return y;
}

SparseMatrix linear_combination(std::initializer_list<ScaledMatrix> terms) {
  if (terms.size() == 0) throw InputError("linear_combination: no terms");
  const Index rows = terms.begin()->matrix->rows(), cols = terms.begin()->matrix->cols();
  std::size_t total = 0;
  for (const auto& t : terms) {
    if (t.matrix->rows() != rows || t.matrix->cols() != cols) throw InputError("linear_combination: shape mismatch");
    total += t.matrix->nnz();
  }
  TripletList list(rows, cols);
  list.reserve(total);
  for (Index r = 0; r < rows; ++r) {
    for (const auto& t : terms) {
      const auto& m = *t.matrix;
      for (Index k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k) list.add(r, m.col_idx()[k], t.scale * m.values()[k]);
    }
  }
  return finalize(list);
}

SparseMatrix submatrix(const SparseMatrix& a, std::span<const Index> rows, std::span<const Index> cols) {
  std::vector<Index> col_map(static_cast<std::size_t>(a.cols()), -1);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] < 0 || cols[j] >= a.cols()) throw InputError("submatrix: column index out of range");
    col_map[cols[j]] = static_cast<Index>(j);
  }
  TripletList list(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Index r = rows[i];
    if (r < 0 || r >= a.rows()) throw InputError("submatrix: row index out of range");
    for (Index k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
      const Index c = col_map[a.col_idx()[k]];
      if (c >= 0) list.add(static_cast<Index>(i), c, a.values()[k]);
    }
  }
  return finalize(list);
}

double asymmetry(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("asymmetry: matrix is not square");
  double worst = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      worst = std::max(worst, std::abs(a.values()[k] - a.at(a.col_idx()[k], i)));
    }
  }
  return worst;
}

double norm2(std::span<const double> x) { return std::sqrt(simd::dot(x, x)); }

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace femkit
