#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "femkit/assembly.hpp"
#include "femkit/mesh.hpp"

namespace femkit {

/// du/dt - mu Lap u + beta . grad u = f with Dirichlet data g(x, t) and zero-flux Neumann labels.
struct AdvDiffProblem {
  std::variant<Mesh1D, TriMesh> mesh;
  std::optional<FeKind> space;  // default: P1 in 1D, P2 in 2D
  double mu = 1.0;
  VectorCoefficient beta;
  std::function<double(Point2, double)> f;  // empty means zero
  DirichletBc dirichlet;
  std::vector<int> neumann;
  std::function<double(Point2)> u0;  // empty means zero
  double dt = 0.1;
  double T = 1.0;
};

void validate(const AdvDiffProblem& problem);
FeKind resolved_space(const AdvDiffProblem& problem);
std::shared_ptr<const DofMap> build_space(const AdvDiffProblem& problem);

/// Implicit Euler stepper: B = M/dt + A + V, factorized on the interior dofs.
class Stepper {
 public:
  explicit Stepper(const AdvDiffProblem& problem);
  /// Reuses the dof map (and thus any FemField coefficients defined on it).
  Stepper(const AdvDiffProblem& problem, std::shared_ptr<const DofMap> space);

  const std::shared_ptr<const DofMap>& space() const { return space_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  const SparseMatrix& convection() const { return convection_; }
  const SparseMatrix& system() const { return system_; }
  /// B restricted to the interior dofs.
  const SparseMatrix& interior_system() const { return interior_; }
  Index interior_count() const { return static_cast<Index>(interior_dofs_.size()); }
  double time_step() const { return dt_; }
  int factorizations() const { return factorizations_; }

  /// Refactorizes only if `dt` differs from the current step.
  void set_time_step(double dt);

  /// One implicit Euler step from u_prev (full dof vector) to t_next.
  std::vector<double> step(std::span<const double> u_prev, double t_next) const;

  /// Nodal interpolant of u0.
  std::vector<double> initial_state() const;

 private:
  void factorize();

  AdvDiffProblem problem_;
  std::shared_ptr<const DofMap> space_;
  SparseMatrix mass_, stiffness_, convection_, system_, interior_;
  std::vector<char> fixed_;
  std::vector<Index> interior_dofs_;
  double dt_ = 0.0;
  std::unique_ptr<LuFactorization> lu_;
  int factorizations_ = 0;
};

/// Number of steps and their end times: t_m = m dt, last step shortened to land on T.
std::vector<double> time_levels(double dt, double T);

using StepSink = std::function<void(int step, double t, const FemField& u)>;

struct RunResult {
  FemField u;
  int steps = 0;
  double final_time = 0.0;
};

/// Runs to T, calling `sink` every `output_every` steps and at T.
RunResult run(const AdvDiffProblem& problem, int output_every, const StepSink& sink = {});
RunResult run(const AdvDiffProblem& problem, std::shared_ptr<const DofMap> space, int output_every,
              const StepSink& sink = {});

/// (A + V) u = b with f and g evaluated at t = T.
FemField steady_solve(const AdvDiffProblem& problem);

}  // namespace femkit
