#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "femkit/elements.hpp"
#include "femkit/expression.hpp"
#include "femkit/mesh.hpp"

namespace femkit {

enum class ProblemKind { poisson1d, poisson2d, stokes, advdiff1d, advdiff2d, coupled, convergence };
enum class SolverKind { lu, cg };
enum class RunMode { transient, steady };
enum class OutputFormat { csv, vtk, both };

std::string to_string(ProblemKind kind);
std::string to_string(SolverKind kind);
std::string to_string(RunMode mode);
std::string to_string(OutputFormat format);

/// One boundary entry. Dirichlet carries one value (two for velocities);
/// Neumann carries the flux h (the do-nothing condition is h = 0).
struct BcEntry {
  enum class Kind { dirichlet, neumann };
  int label = 0;
  Kind kind = Kind::dirichlet;
  std::vector<Expression> values;

  friend bool operator==(const BcEntry&, const BcEntry&) = default;
};

struct ProblemConfig {
  ProblemKind kind = ProblemKind::poisson2d;
  std::optional<FeKind> space;
  SolverKind solver = SolverKind::lu;
  RunMode mode = RunMode::transient;

  std::optional<DomainSpec> domain;
  std::filesystem::path mesh_file;  // used when domain is empty; relative to base_dir

  std::map<std::string, Expression> coefficients;
  std::vector<BcEntry> bc;         // in file order; Dirichlet priority follows it
  std::vector<BcEntry> stokes_bc;  // coupled problems only

  std::optional<double> dt, T, t_gate;
  int output_every = 1;
  int gate_label = 2;

  OutputFormat format = OutputFormat::csv;
  std::string prefix = "out";

  std::optional<ProblemKind> target;  // convergence problems
  int levels = 4;

  /// Directory relative paths resolve against; not part of equality.
  std::filesystem::path base_dir;

  /// The kind the solver actually runs (target for convergence configs).
  ProblemKind effective_kind() const { return kind == ProblemKind::convergence ? *target : kind; }
  bool has(const std::string& coefficient) const { return coefficients.contains(coefficient); }
  /// Coefficient expression, or the constant `fallback` when absent.
  Expression coefficient(const std::string& name, double fallback = 0.0) const;

  friend bool operator==(const ProblemConfig& a, const ProblemConfig& b);
};

/// Parses the sectioned key-value format. `source` names the input in errors.
ProblemConfig parse_config(std::string_view text, const std::string& source = "<config>");
/// Reads and parses a file; relative paths inside resolve against its directory.
ProblemConfig parse_config_file(const std::filesystem::path& path);

std::string serialize_config(const ProblemConfig& config);

}  // namespace femkit
