#include "femkit/assembly.hpp"

#include <algorithm>
#include <numeric>

#include "femkit/quadrature.hpp"

namespace femkit {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// Reference-element rule with weights summing to the reference measure (1 in 1D, 1/2 in 2D).
const QuadratureRule& element_rule(int dim) {
  static const QuadratureRule line = map_to_interval(gauss3_interval(), 0.0, 1.0);
  static const QuadratureRule tri = triangle_rule(5);
  return dim == 1 ? line : tri;
}

void check_field_mesh(const FemField& field, Index element) {
  if (!field.dofmap || element >= field.dofmap->element_count()) {
    throw InputError("field coefficient is defined on a different mesh");
  }
}

void check_compatible(const DofMap& trial, const DofMap& test) {
  if (trial.dim != test.dim || trial.element_count() != test.element_count()) {
    throw InputError("trial and test spaces live on different meshes");
  }
}

struct ElementBasis {
  std::vector<double> value;
  std::vector<Vec2> grad;  // physical
};

ElementBasis basis_at(const DofMap& space, const AffineMap& map, Point2 ref) {
  ElementBasis out;
  out.value.resize(static_cast<std::size_t>(space.per_element));
  out.grad.resize(static_cast<std::size_t>(space.per_element));
  for (int a = 0; a < space.per_element; ++a) {
    const auto b = eval_ref_basis(space.space.kind, a, ref);
    out.value[a] = b.value;
    out.grad[a] = map.physical_gradient(b.grad);
  }
  return out;
}

// Lagrange basis on a facet parametrised by s in [0, 1], in facet dof order.
std::vector<double> facet_basis(std::size_t n, double s) {
  if (n == 2) return {1.0 - s, s};
  return {(1.0 - s) * (1.0 - 2.0 * s), 4.0 * s * (1.0 - s), s * (2.0 * s - 1.0)};
}

}  // namespace

double ScalarCoefficient::operator()(Index element, Point2 ref, Point2 x) const {
  return std::visit(overloaded{[](double c) { return c; },
                               [x](const std::function<double(Point2)>& f) { return f(x); },
                               [element, ref](const FemField& f) {
                                 check_field_mesh(f, element);
                                 return eval_field(f, element, ref);
                               }},
                    data_);
}

std::optional<double> ScalarCoefficient::constant() const {
  if (const auto* c = std::get_if<double>(&data_)) return *c;
  return std::nullopt;
}

Vec2 VectorCoefficient::operator()(Index element, Point2 ref, Point2 x) const {
  return std::visit(overloaded{[](Vec2 c) { return c; },
                               [x](const std::function<Vec2(Point2)>& f) { return f(x); },
                               [element, ref](const std::pair<FemField, FemField>& f) {
                                 check_field_mesh(f.first, element);
                                 check_field_mesh(f.second, element);
                                 return Vec2{eval_field(f.first, element, ref), eval_field(f.second, element, ref)};
                               }},
                    data_);
}

std::optional<Vec2> VectorCoefficient::constant() const {
  if (const auto* c = std::get_if<Vec2>(&data_)) return *c;
  return std::nullopt;
}

DenseMatrix local_matrix(const DofMap& trial, const DofMap& test, Index element, const BilinearForm& form) {
  check_compatible(trial, test);
  if (element < 0 || element >= trial.element_count()) throw InputError("element index out of range");
  const AffineMap& map = trial.maps[element];
  const QuadratureRule& rule = element_rule(trial.dim);
  const double jac = std::abs(map.det);
  DenseMatrix local(test.per_element, trial.per_element);

  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Point2 ref = rule.points[q];
    const Point2 x = map.map(ref);
    const double w = rule.weights[q] * jac;
    const ElementBasis u = basis_at(trial, map, ref);
    const ElementBasis v = basis_at(test, map, ref);
    std::visit(overloaded{
                   [&](const Stiffness& s) {
                     const double k = s.kappa(element, ref, x);
                     for (int i = 0; i < test.per_element; ++i)
                       for (int j = 0; j < trial.per_element; ++j) local(i, j) += w * k * dot(u.grad[j], v.grad[i]);
                   },
                   [&](const Mass& m) {
                     const double c = m.c(element, ref, x);
                     for (int i = 0; i < test.per_element; ++i)
                       for (int j = 0; j < trial.per_element; ++j) local(i, j) += w * c * u.value[j] * v.value[i];
                   },
                   [&](const Convection& c) {
                     const Vec2 beta = c.beta(element, ref, x);
                     for (int i = 0; i < test.per_element; ++i)
                       for (int j = 0; j < trial.per_element; ++j)
                         local(i, j) += w * dot(beta, u.grad[j]) * v.value[i];
                   },
                   [&](const Divergence& d) {
                     if (d.component != 0 && d.component != 1) throw InputError("divergence component must be 0 or 1");
                     for (int i = 0; i < test.per_element; ++i)
                       for (int j = 0; j < trial.per_element; ++j) {
                         const double dj = d.component == 0 ? u.grad[j].x : u.grad[j].y;
                         local(i, j) -= w * dj * v.value[i];
                       }
                   }},
               form);
  }
  return local;
}

void scatter_add(TripletList& global, const DenseMatrix& local, std::span<const Index> test_dofs,
                 std::span<const Index> trial_dofs) {
  if (static_cast<int>(test_dofs.size()) != local.rows() || static_cast<int>(trial_dofs.size()) != local.cols()) {
    throw InputError("scatter_add: local matrix does not match the dof lists");
  }
  for (int i = 0; i < local.rows(); ++i)
    for (int j = 0; j < local.cols(); ++j) global.add(test_dofs[i], trial_dofs[j], local(i, j));
}

SparseMatrix assemble_bilinear(const BilinearForm& form, const DofMap& trial, const DofMap& test,
                               std::span<const Index> order) {
  check_compatible(trial, test);
  const Index ne = trial.element_count();
  std::vector<Index> sequence(order.begin(), order.end());
  if (sequence.empty()) {
    sequence.resize(static_cast<std::size_t>(ne));
    std::iota(sequence.begin(), sequence.end(), 0);
  } else if (static_cast<Index>(sequence.size()) != ne) {
    throw InputError("assemble_bilinear: element order has the wrong length");
  }
  TripletList triplets(test.n_dofs, trial.n_dofs);
  triplets.reserve(static_cast<std::size_t>(ne) * test.per_element * trial.per_element);
  for (Index e : sequence) scatter_add(triplets, local_matrix(trial, test, e, form), test.dofs(e), trial.dofs(e));
  return finalize(triplets);
}

std::vector<double> assemble_load(const DofMap& test, const ScalarCoefficient& f) {
  std::vector<double> b(static_cast<std::size_t>(test.n_dofs), 0.0);
  const QuadratureRule& rule = element_rule(test.dim);
  for (Index e = 0; e < test.element_count(); ++e) {
    const AffineMap& map = test.maps[e];
    const double jac = std::abs(map.det);
    const auto dofs = test.dofs(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point2 ref = rule.points[q];
      const double fw = f(e, ref, map.map(ref)) * rule.weights[q] * jac;
      for (int a = 0; a < test.per_element; ++a) b[dofs[a]] += fw * eval_ref_basis(test.space.kind, a, ref).value;
    }
  }
  return b;
}

std::vector<double> assemble_neumann(const DofMap& test, int label, const std::function<double(Point2)>& h) {
  if (!test.has_label(label)) throw InputError("Neumann condition on unknown boundary label " + std::to_string(label));
  std::vector<double> b(static_cast<std::size_t>(test.n_dofs), 0.0);
  const QuadratureRule rule = map_to_interval(gauss3_interval(), 0.0, 1.0);
  for (const auto& facet : test.facets) {
    if (facet.label != label) continue;
    if (test.dim == 1) {
      b[facet.dofs.front()] += h(facet.a);
      continue;
    }
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double s = rule.points[q].x;
      const Point2 x = facet.a + s * (facet.b - facet.a);
      const double hw = h(x) * rule.weights[q] * facet.length;
      const auto phi = facet_basis(facet.dofs.size(), s);
      for (std::size_t a = 0; a < phi.size(); ++a) b[facet.dofs[a]] += hw * phi[a];
    }
  }
  return b;
}

namespace {

double integrate_over(const DofMap& dm, const std::function<double(Index, Point2, Point2)>& g) {
  const QuadratureRule& rule = element_rule(dm.dim);
  double total = 0.0;
  for (Index e = 0; e < dm.element_count(); ++e) {
    const AffineMap& map = dm.maps[e];
    double local = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) local += rule.weights[q] * g(e, rule.points[q], map.map(rule.points[q]));
    total += local * std::abs(map.det);
  }
  return total;
}

}  // namespace

double integrate_field(const FemField& field) {
  return integrate_over(*field.dofmap, [&](Index e, Point2 ref, Point2) { return eval_field(field, e, ref); });
}

double l2_norm(const FemField& field) {
  return std::sqrt(integrate_over(*field.dofmap, [&](Index e, Point2 ref, Point2) {
    const double v = eval_field(field, e, ref);
    return v * v;
  }));
}

double l2_error(const FemField& field, const std::function<double(Point2)>& exact) {
  return std::sqrt(integrate_over(*field.dofmap, [&](Index e, Point2 ref, Point2 x) {
    const double d = eval_field(field, e, ref) - exact(x);
    return d * d;
  }));
}

DirichletValues dirichlet_values(const DofMap& dofmap, const DirichletBc& bc, double time) {
  DirichletValues out;
  out.fixed.assign(static_cast<std::size_t>(dofmap.n_dofs), 0);
  out.values.assign(static_cast<std::size_t>(dofmap.n_dofs), 0.0);
  for (const auto& cond : bc) {
    if (!dofmap.has_label(cond.label)) {
      throw InputError("Dirichlet condition on unknown boundary label " + std::to_string(cond.label));
    }
    for (Index dof : dofmap.dofs_with_label(cond.label)) {
      if (out.fixed[dof]) continue;
      out.fixed[dof] = 1;
      out.values[dof] = cond.g(dofmap.dof_coords[dof], time);
    }
  }
  return out;
}

std::vector<double> ReducedSystem::reconstruct(std::span<const double> interior_solution) const {
  if (interior_solution.size() != interior.size()) throw InputError("reconstruct: wrong interior vector length");
  std::vector<double> full = lifting;
  for (std::size_t i = 0; i < interior.size(); ++i) full[interior[i]] = interior_solution[i];
  return full;
}

ReducedSystem reduce_system(const SparseMatrix& matrix, std::span<const double> rhs, const DirichletValues& values) {
  const Index n = matrix.rows();
  if (matrix.cols() != n || static_cast<Index>(rhs.size()) != n || static_cast<Index>(values.fixed.size()) != n) {
    throw InputError("reduce_system: dimension mismatch");
  }
  ReducedSystem out;
  out.lifting.assign(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i) {
    if (values.fixed[i]) {
      out.lifting[i] = values.values[i];
    } else {
      out.interior.push_back(i);
    }
  }
  const auto a_lift = spmv(matrix, out.lifting);
  out.rhs.reserve(out.interior.size());
  for (Index i : out.interior) out.rhs.push_back(rhs[i] - a_lift[i]);
  out.matrix = submatrix(matrix, out.interior, out.interior);
  return out;
}

ReducedSystem apply_dirichlet(const LinearSystem& system, const DirichletBc& bc, const DofMap& dofmap, double time) {
  return reduce_system(system.matrix, system.rhs, dirichlet_values(dofmap, bc, time));
}

}  // namespace femkit
