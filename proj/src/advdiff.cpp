#include "femkit/advdiff.hpp"

#include <cmath>

namespace femkit {

void validate(const AdvDiffProblem& problem) {
  if (!(problem.mu > 0.0)) throw InputError("advdiff: diffusion coefficient must be positive");
  if (!(problem.dt > 0.0)) throw InputError("advdiff: time step must be positive");
  if (!(problem.T >= problem.dt)) throw InputError("advdiff: final time must be at least one time step");
  for (const auto& c : problem.dirichlet) {
    if (!c.g) throw InputError("advdiff: Dirichlet label " + std::to_string(c.label) + " has no data");
  }
  const FeKind kind = resolved_space(problem);
  const bool one_d = std::holds_alternative<Mesh1D>(problem.mesh);
  if (one_d != (kind == FeKind::P1_1D)) {
    throw InputError("advdiff: space " + to_string(kind) + " does not match the mesh dimension");
  }
}

FeKind resolved_space(const AdvDiffProblem& problem) {
  if (problem.space) return *problem.space;
  return std::holds_alternative<Mesh1D>(problem.mesh) ? FeKind::P1_1D : FeKind::P2_2D;
}

std::shared_ptr<const DofMap> build_space(const AdvDiffProblem& problem) {
  const FeSpaceTag tag{resolved_space(problem), false};
  return std::visit([&](const auto& mesh) { return std::make_shared<const DofMap>(build_dofmap(mesh, tag)); },
                    problem.mesh);
}

Stepper::Stepper(const AdvDiffProblem& problem) : Stepper(problem, nullptr) {}

Stepper::Stepper(const AdvDiffProblem& problem, std::shared_ptr<const DofMap> space)
    : problem_(problem), space_(space ? std::move(space) : build_space(problem)) {
  validate(problem_);
  for (int label : problem_.neumann) {
    if (!space_->has_label(label)) throw InputError("advdiff: unknown Neumann label " + std::to_string(label));
  }
  mass_ = assemble_bilinear(Mass{1.0}, *space_);
  stiffness_ = assemble_bilinear(Stiffness{problem_.mu}, *space_);
  convection_ = assemble_bilinear(Convection{problem_.beta}, *space_);
  const DirichletValues d = dirichlet_values(*space_, problem_.dirichlet, 0.0);
  fixed_ = d.fixed;
  for (Index i = 0; i < space_->n_dofs; ++i) {
    if (!fixed_[i]) interior_dofs_.push_back(i);
  }
  dt_ = problem_.dt;
  factorize();
}

void Stepper::factorize() {
  system_ = linear_combination({{1.0 / dt_, &mass_}, {1.0, &stiffness_}, {1.0, &convection_}});
  interior_ = submatrix(system_, interior_dofs_, interior_dofs_);
  lu_ = interior_dofs_.empty() ? nullptr : std::make_unique<LuFactorization>(interior_);
  ++factorizations_;
}

void Stepper::set_time_step(double dt) {
  if (!(dt > 0.0)) throw InputError("advdiff: time step must be positive");
  if (dt == dt_) return;
  dt_ = dt;
  factorize();
}

std::vector<double> Stepper::step(std::span<const double> u_prev, double t_next) const {
  const Index n = space_->n_dofs;
  if (static_cast<Index>(u_prev.size()) != n) throw InputError("advdiff step: state has the wrong length");
  std::vector<double> rhs = spmv(mass_, u_prev);
  for (double& v : rhs) v /= dt_;
  if (problem_.f) {
    const auto load = assemble_load(
        *space_, std::function<double(Point2)>([&](Point2 x) { return problem_.f(x, t_next); }));
    for (Index i = 0; i < n; ++i) rhs[i] += load[i];
  }
  const DirichletValues d = dirichlet_values(*space_, problem_.dirichlet, t_next);
  std::vector<double> lifting(static_cast<std::size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i) {
    if (fixed_[i]) lifting[i] = d.values[i];
  }
  const auto b_lift = spmv(system_, lifting);
  std::vector<double> reduced(interior_dofs_.size());
  for (std::size_t k = 0; k < interior_dofs_.size(); ++k) {
    reduced[k] = rhs[interior_dofs_[k]] - b_lift[interior_dofs_[k]];
  }
  std::vector<double> u = std::move(lifting);
  if (lu_) {
    const auto x = lu_->solve(reduced);
    for (std::size_t k = 0; k < interior_dofs_.size(); ++k) u[interior_dofs_[k]] = x[k];
  }
  return u;
}

std::vector<double> Stepper::initial_state() const {
  std::vector<double> u(static_cast<std::size_t>(space_->n_dofs), 0.0);
  if (problem_.u0) {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = problem_.u0(space_->dof_coords[i]);
  }
  return u;
}

std::vector<double> time_levels(double dt, double T) {
  if (!(dt > 0.0) || !(T > 0.0)) throw InputError("time_levels: dt and T must be positive");
  const double ratio = T / dt;
  const double nearest = std::round(ratio);
  long count;
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
    count = static_cast<long>(nearest);
  } else {
    count = static_cast<long>(std::floor(ratio)) + 1;
  }
  count = std::max(count, 1L);
  std::vector<double> t(static_cast<std::size_t>(count));
  for (long m = 1; m < count; ++m) t[static_cast<std::size_t>(m - 1)] = static_cast<double>(m) * dt;
  t.back() = T;
  return t;
}

RunResult run(const AdvDiffProblem& problem, int output_every, const StepSink& sink) {
  return run(problem, nullptr, output_every, sink);
}

RunResult run(const AdvDiffProblem& problem, std::shared_ptr<const DofMap> space, int output_every,
              const StepSink& sink) {
  if (output_every < 1) throw InputError("advdiff: output_every must be at least 1");
  Stepper stepper(problem, std::move(space));
  const auto levels = time_levels(problem.dt, problem.T);
  std::vector<double> u = stepper.initial_state();
  double t = 0.0;
  int m = 0;
  for (double t_next : levels) {
    ++m;
    double h = t_next - t;
    // Rounding in m * dt must not trigger a refactorization.
    if (std::abs(h - problem.dt) <= 1e-9 * problem.dt) h = problem.dt;
    stepper.set_time_step(h);
    u = stepper.step(u, t_next);
    t = t_next;
    if (sink && (m % output_every == 0 || m == static_cast<int>(levels.size()))) {
      sink(m, t, FemField(stepper.space(), u));
    }
  }
  return {FemField(stepper.space(), std::move(u)), m, t};
}

FemField steady_solve(const AdvDiffProblem& problem) {
  validate(problem);
  auto space = build_space(problem);
  const SparseMatrix a = assemble_bilinear(Stiffness{problem.mu}, *space);
  const SparseMatrix v = assemble_bilinear(Convection{problem.beta}, *space);
  LinearSystem system{linear_combination({{1.0, &a}, {1.0, &v}}), {}};
  if (problem.f) {
    system.rhs = assemble_load(*space, std::function<double(Point2)>([&](Point2 x) { return problem.f(x, problem.T); }));
  } else {
    system.rhs.assign(static_cast<std::size_t>(space->n_dofs), 0.0);
  }
  const ReducedSystem reduced = apply_dirichlet(system, problem.dirichlet, *space, problem.T);
  const SolveResult solved = lu_solve(reduced.matrix, reduced.rhs);
  return FemField(space, reduced.reconstruct(solved.x));
}

}  // namespace femkit
