#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "femkit/elements.hpp"
#include "femkit/linalg.hpp"

namespace femkit {

/// Scalar coefficient: constant, closed form in x, or a finite element field
/// evaluated at quadrature points of the same mesh.
class ScalarCoefficient {
 public:
  ScalarCoefficient(double value = 0.0) : data_(value) {}  // NOLINT(implicit)
  ScalarCoefficient(std::function<double(Point2)> f) : data_(std::move(f)) {}  // NOLINT(implicit)
  ScalarCoefficient(FemField field) : data_(std::move(field)) {}  // NOLINT(implicit)

  double operator()(Index element, Point2 ref, Point2 x) const;
  std::optional<double> constant() const;

 private:
  std::variant<double, std::function<double(Point2)>, FemField> data_;
};

/// Vector coefficient (the advection field beta).
class VectorCoefficient {
 public:
  VectorCoefficient(Vec2 value = {}) : data_(value) {}  // NOLINT(implicit)
  VectorCoefficient(std::function<Vec2(Point2)> f) : data_(std::move(f)) {}  // NOLINT(implicit)
  VectorCoefficient(FemField bx, FemField by) : data_(std::pair{std::move(bx), std::move(by)}) {}

  Vec2 operator()(Index element, Point2 ref, Point2 x) const;
  std::optional<Vec2> constant() const;

 private:
  std::variant<Vec2, std::function<Vec2(Point2)>, std::pair<FemField, FemField>> data_;
};

/// int kappa grad(u) . grad(v)
struct Stiffness {
  ScalarCoefficient kappa{1.0};
};
/// int c u v
struct Mass {
  ScalarCoefficient c{1.0};
};
/// int (beta . grad u) v ; rows are test functions, columns trial functions
struct Convection {
  VectorCoefficient beta;
};
/// -int (d u / d x_component) q ; trial = velocity component space, test = pressure space
struct Divergence {
  int component = 0;
};

using BilinearForm = std::variant<Stiffness, Mass, Convection, Divergence>;

/// Small row-major dense matrix used for element-local blocks.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

struct LinearSystem {
  SparseMatrix matrix;
  std::vector<double> rhs;
};

/// Element matrix (test x trial) of `form` on `element`.
DenseMatrix local_matrix(const DofMap& trial, const DofMap& test, Index element, const BilinearForm& form);

/// global[test_dofs[a], trial_dofs[b]] += local(a, b)
void scatter_add(TripletList& global, const DenseMatrix& local, std::span<const Index> test_dofs,
                 std::span<const Index> trial_dofs);

/// Element loop: local_matrix then scatter_add. Result is n_test x n_trial.
/// `order` optionally permutes the element visit sequence.
SparseMatrix assemble_bilinear(const BilinearForm& form, const DofMap& trial, const DofMap& test,
                               std::span<const Index> order = {});
inline SparseMatrix assemble_bilinear(const BilinearForm& form, const DofMap& space) {
  return assemble_bilinear(form, space, space);
}

/// b_j = int f phi_j
std::vector<double> assemble_load(const DofMap& test, const ScalarCoefficient& f);
/// b_j = int_{Gamma_label} h phi_j ; throws InputError when no facet carries `label`.
std::vector<double> assemble_neumann(const DofMap& test, int label, const std::function<double(Point2)>& h);

/// int_Omega field
double integrate_field(const FemField& field);
/// (int_Omega field^2)^(1/2)
double l2_norm(const FemField& field);
/// (int_Omega (field - exact)^2)^(1/2), integrated with the degree-5 rule.
double l2_error(const FemField& field, const std::function<double(Point2)>& exact);

struct DirichletCondition {
  int label = 0;
  std::function<double(Point2, double)> g;  // g(x, t)
};
/// When a dof touches several labels, the first listed condition wins.
using DirichletBc = std::vector<DirichletCondition>;

/// Boundary values per dof: fixed[i] marks constrained dofs.
struct DirichletValues {
  std::vector<char> fixed;
  std::vector<double> values;
};

DirichletValues dirichlet_values(const DofMap& dofmap, const DirichletBc& bc, double time);

struct ReducedSystem {
  SparseMatrix matrix;             // interior x interior
  std::vector<double> rhs;         // (b - A x_d) on interior rows
  std::vector<Index> interior;     // full index of each interior unknown
  std::vector<double> lifting;     // x_d: boundary values, zero inside

  /// x_d + scatter(interior_solution)
  std::vector<double> reconstruct(std::span<const double> interior_solution) const;
};

/// Eliminates the fixed dofs of `values` from (matrix, rhs).
ReducedSystem reduce_system(const SparseMatrix& matrix, std::span<const double> rhs, const DirichletValues& values);

ReducedSystem apply_dirichlet(const LinearSystem& system, const DirichletBc& bc, const DofMap& dofmap, double time);

}  // namespace femkit
