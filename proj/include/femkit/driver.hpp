#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "femkit/advdiff.hpp"
#include "femkit/config.hpp"
#include "femkit/coupling.hpp"
#include "femkit/stokes.hpp"

namespace femkit {

using AnyMesh = std::variant<Mesh1D, TriMesh>;

/// Mesh described by the config (structured spec or mesh file).
AnyMesh build_mesh(const ProblemConfig& config);
/// Mesh of the spec with every count multiplied by 2^level.
DomainSpec refine(const DomainSpec& spec, int level);
AnyMesh build_mesh(const DomainSpec& spec);

DirichletBc dirichlet_from(const std::vector<BcEntry>& bc);
std::vector<int> neumann_labels(const std::vector<BcEntry>& bc);

struct PoissonSolution {
  FemField u;
  SolveReport report;
  LinearSystem system;  // before Dirichlet reduction
  ReducedSystem reduced;
};

/// -div(kappa grad u) = f with the config's boundary table.
PoissonSolution solve_poisson(const ProblemConfig& config, const AnyMesh& mesh);
StokesProblem make_stokes_problem(const ProblemConfig& config, const TriMesh& mesh);
AdvDiffProblem make_advdiff_problem(const ProblemConfig& config, const AnyMesh& mesh);
CoupledProblem make_coupled_problem(const ProblemConfig& config, const TriMesh& mesh);

struct RunOptions {
  std::optional<std::string> prefix;  // overrides output.prefix
  std::ostream* log = nullptr;        // progress and summaries
};

/// Solves the configured problem and writes its output files; returns their paths.
std::vector<std::filesystem::path> run_config(const ProblemConfig& config, const RunOptions& options = {});

struct RateRow {
  double h = 0.0;
  std::vector<double> errors;  // one per RateTable::norms entry
};

struct RateTable {
  std::vector<std::string> norms;
  std::vector<RateRow> rows;
  std::vector<double> slopes;  // least-squares slope of log(error) against log(h), per norm

  std::string to_csv() const;
};

/// Least-squares slope of log(e) against log(h); needs at least 3 points.
double fitted_slope(const std::vector<double>& h, const std::vector<double>& e);

/// Solves on `levels` uniformly refined meshes and measures errors against the exact solution.
RateTable convergence_study(const ProblemConfig& config, int levels);

}  // namespace femkit
