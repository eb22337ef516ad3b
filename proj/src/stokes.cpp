#include "femkit/stokes.hpp"

#include <algorithm>
#include <map>

#include "femkit/quadrature.hpp"

namespace femkit {

void validate(const StokesProblem& problem) {
  if (!(problem.mu > 0.0)) throw InputError("stokes: viscosity must be positive");
  if (!(problem.eps >= 0.0)) throw InputError("stokes: stabilization must be non-negative");
  if (problem.dirichlet.empty()) {
    throw InputError("stokes: at least one Dirichlet boundary is required (velocity is otherwise not unique)");
  }
  std::map<int, int> seen;
  for (const auto& c : problem.dirichlet) {
    if (!c.u) throw InputError("stokes: Dirichlet label " + std::to_string(c.label) + " has no data");
    ++seen[c.label];
  }
  for (int label : problem.neumann) ++seen[label];
  const auto labels = problem.mesh.labels();
  for (const auto& [label, count] : seen) {
    if (!labels.contains(label)) throw InputError("stokes: mesh has no boundary label " + std::to_string(label));
    if (count > 1) throw InputError("stokes: boundary label " + std::to_string(label) + " classified more than once");
  }
  for (int label : labels) {
    if (!seen.contains(label)) throw InputError("stokes: boundary label " + std::to_string(label) + " is unclassified");
  }
}

StokesSystem assemble_stokes(const StokesProblem& problem) {
  validate(problem);
  StokesSystem out;
  auto vspace = std::make_shared<const DofMap>(build_dofmap(problem.mesh, {FeKind::P2_2D, false}));
  auto pspace = std::make_shared<const DofMap>(build_dofmap(problem.mesh, {FeKind::P1_2D, false}));
  const Index n2 = vspace->n_dofs, n1 = pspace->n_dofs;

  const SparseMatrix k = assemble_bilinear(Stiffness{problem.mu}, *vspace);
  const SparseMatrix bx = assemble_bilinear(Divergence{0}, *vspace, *pspace);
  const SparseMatrix by = assemble_bilinear(Divergence{1}, *vspace, *pspace);
  const SparseMatrix m = assemble_bilinear(Mass{1.0}, *pspace);

  TripletList t(2 * n2 + n1, 2 * n2 + n1);
  t.reserve(2 * k.nnz() + 4 * bx.nnz() + m.nnz());
  auto add_block = [&t](const SparseMatrix& a, Index r0, Index c0, double scale, bool transpose) {
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index q = a.row_ptr()[i]; q < a.row_ptr()[i + 1]; ++q) {
        const Index j = a.col_idx()[q];
        if (transpose) {
          t.add(r0 + j, c0 + i, scale * a.values()[q]);
        } else {
          t.add(r0 + i, c0 + j, scale * a.values()[q]);
        }
      }
    }
  };
  add_block(k, 0, 0, 1.0, false);
  add_block(k, n2, n2, 1.0, false);
  add_block(bx, 0, 2 * n2, 1.0, true);
  add_block(by, n2, 2 * n2, 1.0, true);
  add_block(bx, 2 * n2, 0, 1.0, false);
  add_block(by, 2 * n2, n2, 1.0, false);
  if (problem.eps != 0.0) add_block(m, 2 * n2, 2 * n2, -problem.eps, false);
  out.system.matrix = finalize(t);

  out.system.rhs.assign(static_cast<std::size_t>(2 * n2 + n1), 0.0);
  if (problem.f) {
    const auto b1 = assemble_load(*vspace, std::function<double(Point2)>([&](Point2 x) { return problem.f(x).x; }));
    const auto b2 = assemble_load(*vspace, std::function<double(Point2)>([&](Point2 x) { return problem.f(x).y; }));
    std::copy(b1.begin(), b1.end(), out.system.rhs.begin());
    std::copy(b2.begin(), b2.end(), out.system.rhs.begin() + n2);
  }
  out.velocity_space = std::move(vspace);
  out.pressure_space = std::move(pspace);
  return out;
}

StokesSolution solve_stokes(const StokesProblem& problem) {
  const StokesSystem s = assemble_stokes(problem);
  const DofMap& vspace = *s.velocity_space;
  const Index n2 = vspace.n_dofs, n1 = s.pressure_space->n_dofs;

  DirichletBc bc1, bc2;
  for (const auto& c : problem.dirichlet) {
    bc1.push_back({c.label, [u = c.u](Point2 x, double) { return u(x).x; }});
    bc2.push_back({c.label, [u = c.u](Point2 x, double) { return u(x).y; }});
  }
  const DirichletValues d1 = dirichlet_values(vspace, bc1, 0.0);
  const DirichletValues d2 = dirichlet_values(vspace, bc2, 0.0);
  DirichletValues all;
  all.fixed.assign(static_cast<std::size_t>(2 * n2 + n1), 0);
  all.values.assign(all.fixed.size(), 0.0);
  std::copy(d1.fixed.begin(), d1.fixed.end(), all.fixed.begin());
  std::copy(d2.fixed.begin(), d2.fixed.end(), all.fixed.begin() + n2);
  std::copy(d1.values.begin(), d1.values.end(), all.values.begin());
  std::copy(d2.values.begin(), d2.values.end(), all.values.begin() + n2);

  const ReducedSystem reduced = reduce_system(s.system.matrix, s.system.rhs, all);
  SolveResult solved = lu_solve(reduced.matrix, reduced.rhs);
  const std::vector<double> x = reduced.reconstruct(solved.x);

  StokesSolution out;
  out.u1 = FemField(s.velocity_space, {x.begin(), x.begin() + n2});
  out.u2 = FemField(s.velocity_space, {x.begin() + n2, x.begin() + 2 * n2});
  out.p = FemField(s.pressure_space, {x.begin() + 2 * n2, x.end()});
  const double mean = integrate_field(out.p) / s.pressure_space->measure();
  for (double& v : out.p.coefficients) v -= mean;
  out.report = std::move(solved.report);
  out.divergence = divergence_l2(out.u1, out.u2);
  return out;
}

double divergence_l2(const FemField& u1, const FemField& u2) {
  if (u1.dofmap != u2.dofmap) throw InputError("divergence_l2: velocity components use different spaces");
  const DofMap& dm = *u1.dofmap;
  const QuadratureRule rule = triangle_rule(5);
  double total = 0.0;
  for (Index e = 0; e < dm.element_count(); ++e) {
    double local = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double d = eval_field_gradient(u1, e, rule.points[q]).x + eval_field_gradient(u2, e, rule.points[q]).y;
      local += rule.weights[q] * d * d;
    }
    total += local * std::abs(dm.maps[e].det);
  }
  return std::sqrt(total);
}

double boundary_flux(const FemField& u1, const FemField& u2, int label) {
  if (u1.dofmap != u2.dofmap) throw InputError("boundary_flux: velocity components use different spaces");
  const DofMap& dm = *u1.dofmap;
  if (!dm.has_label(label)) throw InputError("boundary_flux: unknown boundary label " + std::to_string(label));
  const QuadratureRule rule = map_to_interval(gauss3_interval(), 0.0, 1.0);
  double flux = 0.0;
  for (const auto& facet : dm.facets) {
    if (facet.label != label) continue;
    const AffineMap& map = dm.maps[facet.element];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point2 x = facet.a + rule.points[q].x * (facet.b - facet.a);
      const Point2 ref = map.to_reference(x);
      const Vec2 u{eval_field(u1, facet.element, ref), eval_field(u2, facet.element, ref)};
      flux += rule.weights[q] * facet.length * dot(u, facet.normal);
    }
  }
  return flux;
}

}  // namespace femkit
