#include "femkit/driver.hpp"

#include <algorithm>
#include <cmath>

#include "femkit/output.hpp"

namespace femkit {

namespace {

std::function<double(Point2)> spatial(const Expression& e) {
  return [e](Point2 x) { return e(x, 0.0); };
}

std::function<double(Point2, double)> spatiotemporal(const Expression& e) {
  return [e](Point2 x, double t) { return e(x, t); };
}

std::function<Vec2(Point2)> vector_field(const Expression& a, const Expression& b) {
  return [a, b](Point2 x) { return Vec2{a(x, 0.0), b(x, 0.0)}; };
}

// Omits the callback when the expression is identically zero.
std::function<double(Point2, double)> optional_source(const ProblemConfig& config, const std::string& name) {
  const Expression e = config.coefficient(name);
  if (e.is_constant() && e(0.0) == 0.0) return {};
  return spatiotemporal(e);
}

double constant(const ProblemConfig& config, const std::string& name, double fallback) {
  return config.coefficient(name, fallback)(0.0);
}

const TriMesh& tri_mesh(const AnyMesh& mesh) {
  const auto* m = std::get_if<TriMesh>(&mesh);
  if (!m) throw InputError("this problem needs a 2D mesh");
  return *m;
}

std::filesystem::path with_suffix(const std::string& prefix, const std::string& suffix) {
  return std::filesystem::path(prefix + suffix);
}

std::string padded(int value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

class Writer {
 public:
  Writer(const ProblemConfig& config, const RunOptions& options)
      : prefix_(options.prefix.value_or(config.prefix)), format_(config.format) {}

  bool csv() const { return format_ != OutputFormat::vtk; }
  bool vtk() const { return format_ != OutputFormat::csv; }

  void field_csv(const FemField& f, const std::string& suffix) {
    const auto path = with_suffix(prefix_, suffix + ".csv");
    write_field_csv(f, path);
    files_.push_back(path);
  }

  void vtk_file(const TriMesh& mesh, const std::vector<VtkField>& fields, const std::string& suffix) {
    const auto path = with_suffix(prefix_, suffix + ".vtk");
    write_vtk(mesh, fields, path);
    files_.push_back(path);
  }

  void scalar(const AnyMesh& mesh, const FemField& f, const std::string& suffix) {
    if (csv()) field_csv(f, suffix);
    if (vtk()) vtk_file(tri_mesh(mesh), {{"u", {&f}}}, suffix);
  }

  void stokes(const TriMesh& mesh, const StokesSolution& s, const std::string& stem) {
    if (csv()) {
      field_csv(s.u1, stem + "_u1");
      field_csv(s.u2, stem + "_u2");
      field_csv(s.p, stem + "_p");
    }
    if (vtk()) vtk_file(mesh, {{"velocity", {&s.u1, &s.u2}}, {"pressure", {&s.p}}}, stem);
  }

  void text(const std::string& suffix, const std::string& content) {
    const auto path = with_suffix(prefix_, suffix);
    auto out = open_output(path);
    out << content;
    files_.push_back(path);
  }

  std::vector<std::filesystem::path> files() && { return std::move(files_); }

 private:
  std::string prefix_;
  OutputFormat format_;
  std::vector<std::filesystem::path> files_;
};

void log_report(const RunOptions& options, const std::string& what, const SolveReport& r) {
  if (!options.log) return;
  *options.log << what << ": " << r.unknowns << " unknowns, " << r.method << ", residual " << r.residual_norm << "\n";
}

}  // namespace

AnyMesh build_mesh(const DomainSpec& spec) {
  if (const auto* i = std::get_if<IntervalSpec>(&spec)) return build_interval_mesh(i->a, i->b, i->n);
  return build_structured_mesh(spec);
}

AnyMesh build_mesh(const ProblemConfig& config) {
  if (config.domain) return build_mesh(*config.domain);
  const auto path = config.mesh_file.is_absolute() ? config.mesh_file : config.base_dir / config.mesh_file;
  return read_mesh(path);
}

DomainSpec refine(const DomainSpec& spec, int level) {
  if (level < 0 || level > 20) throw InputError("refinement level out of range");
  const Index f = Index{1} << level;
  return std::visit(
      [f](auto s) -> DomainSpec {
        using S = decltype(s);
        if constexpr (std::is_same_v<S, IntervalSpec>) {
          s.n *= f;
        } else if constexpr (std::is_same_v<S, DiskSpec>) {
          s.n_r *= f;
          s.n_theta *= f;
        } else {
          s.nx *= f;
          s.ny *= f;
        }
        return s;
      },
      spec);
}

DirichletBc dirichlet_from(const std::vector<BcEntry>& bc) {
  DirichletBc out;
  for (const auto& e : bc) {
    if (e.kind == BcEntry::Kind::dirichlet) out.push_back({e.label, spatiotemporal(e.values.at(0))});
  }
  return out;
}

std::vector<int> neumann_labels(const std::vector<BcEntry>& bc) {
  std::vector<int> out;
  for (const auto& e : bc) {
    if (e.kind == BcEntry::Kind::neumann) out.push_back(e.label);
  }
  return out;
}

PoissonSolution solve_poisson(const ProblemConfig& config, const AnyMesh& mesh) {
  const bool one_d = std::holds_alternative<Mesh1D>(mesh);
  const FeKind kind = config.space.value_or(one_d ? FeKind::P1_1D : FeKind::P1_2D);
  auto space = std::visit(
      [&](const auto& m) { return std::make_shared<const DofMap>(build_dofmap(m, FeSpaceTag{kind, false})); }, mesh);

  PoissonSolution out;
  const Expression kappa = config.coefficient("kappa", 1.0);
  const ScalarCoefficient k = kappa.is_constant() ? ScalarCoefficient(kappa(0.0)) : ScalarCoefficient(spatial(kappa));
  out.system.matrix = assemble_bilinear(Stiffness{k}, *space);
  out.system.rhs = assemble_load(*space, ScalarCoefficient(spatial(config.coefficient("f"))));
  for (const auto& e : config.bc) {
    if (e.kind != BcEntry::Kind::neumann) continue;
    const auto h = assemble_neumann(*space, e.label, spatial(e.values.at(0)));
    for (std::size_t i = 0; i < h.size(); ++i) out.system.rhs[i] += h[i];
  }
  out.reduced = apply_dirichlet(out.system, dirichlet_from(config.bc), *space, 0.0);
  SolveResult solved = config.solver == SolverKind::cg ? cg_solve(out.reduced.matrix, out.reduced.rhs)
                                                       : lu_solve(out.reduced.matrix, out.reduced.rhs);
  out.u = FemField(space, out.reduced.reconstruct(solved.x));
  out.report = std::move(solved.report);
  return out;
}

StokesProblem make_stokes_problem(const ProblemConfig& config, const TriMesh& mesh) {
  const bool coupled = config.effective_kind() == ProblemKind::coupled;
  const auto& bc = coupled ? config.stokes_bc : config.bc;
  StokesProblem p;
  p.mesh = mesh;
  p.mu = constant(config, coupled ? "mu_stokes" : "mu", 1.0);
  p.eps = constant(config, "eps", 1e-8);
  const Expression f1 = config.coefficient("f1"), f2 = config.coefficient("f2");
  if (!(f1.is_constant() && f1(0.0) == 0.0 && f2.is_constant() && f2(0.0) == 0.0)) p.f = vector_field(f1, f2);
  for (const auto& e : bc) {
    if (e.kind == BcEntry::Kind::dirichlet) {
      p.dirichlet.push_back({e.label, vector_field(e.values.at(0), e.values.at(1))});
    } else {
      p.neumann.push_back(e.label);
    }
  }
  return p;
}

AdvDiffProblem make_advdiff_problem(const ProblemConfig& config, const AnyMesh& mesh) {
  AdvDiffProblem p;
  p.mesh = mesh;
  p.space = config.space;
  p.mu = constant(config, "mu", 1.0);
  const Expression b1 = config.coefficient("beta1"), b2 = config.coefficient("beta2");
  if (b1.is_constant() && b2.is_constant()) {
    p.beta = Vec2{b1(0.0), b2(0.0)};
  } else {
    p.beta = vector_field(b1, b2);
  }
  p.f = optional_source(config, "f");
  p.dirichlet = dirichlet_from(config.bc);
  p.neumann = neumann_labels(config.bc);
  for (const auto& e : config.bc) {
    if (e.kind == BcEntry::Kind::neumann && !(e.values[0].is_constant() && e.values[0](0.0) == 0.0)) {
      throw InputError("advection-diffusion supports only zero-flux Neumann boundaries (label " +
                       std::to_string(e.label) + ")");
    }
  }
  const Expression u0 = config.coefficient("u0");
  if (!(u0.is_constant() && u0(0.0) == 0.0)) p.u0 = spatial(u0);
  p.dt = config.dt.value_or(1.0);
  p.T = config.T.value_or(p.dt);
  return p;
}

CoupledProblem make_coupled_problem(const ProblemConfig& config, const TriMesh& mesh) {
  CoupledProblem p;
  p.stokes = make_stokes_problem(config, mesh);
  p.transport = make_advdiff_problem(config, mesh);
  p.t_gate = config.t_gate.value_or(0.0);
  p.gated_label = config.gate_label;
  return p;
}

std::vector<std::filesystem::path> run_config(const ProblemConfig& config, const RunOptions& options) {
  Writer out(config, options);
  if (config.kind == ProblemKind::convergence) {
    const RateTable table = convergence_study(config, config.levels);
    out.text("_rates.csv", table.to_csv());
    return std::move(out).files();
  }
  const AnyMesh mesh = build_mesh(config);
  switch (config.kind) {
    case ProblemKind::poisson1d:
    case ProblemKind::poisson2d: {
      const PoissonSolution s = solve_poisson(config, mesh);
      log_report(options, to_string(config.kind), s.report);
      out.scalar(mesh, s.u, "");
      break;
    }
    case ProblemKind::stokes: {
      const StokesSolution s = solve_stokes(make_stokes_problem(config, tri_mesh(mesh)));
      log_report(options, "stokes", s.report);
      out.stokes(tri_mesh(mesh), s, "");
      break;
    }
    case ProblemKind::advdiff1d:
    case ProblemKind::advdiff2d: {
      const AdvDiffProblem p = make_advdiff_problem(config, mesh);
      if (config.mode == RunMode::steady) {
        out.scalar(mesh, steady_solve(p), "");
        break;
      }
      const int width = static_cast<int>(std::to_string(time_levels(p.dt, p.T).size()).size());
      const RunResult r = run(p, config.output_every, [&](int step, double, const FemField& u) {
        out.scalar(mesh, u, "_" + padded(step, width));
      });
      if (options.log) *options.log << to_string(config.kind) << ": " << r.steps << " steps to t = " << r.final_time << "\n";
      out.scalar(mesh, r.u, "");
      break;
    }
    case ProblemKind::coupled: {
      const TriMesh& tri = tri_mesh(mesh);
      const CoupledProblem p = make_coupled_problem(config, tri);
      const StokesSolution flow = solve_stokes(p.stokes);
      log_report(options, "coupled flow", flow.report);
      out.stokes(tri, flow, "_flow");
      const AdvDiffProblem transport = bind_transport(p, flow);
      const int width = static_cast<int>(std::to_string(time_levels(transport.dt, transport.T).size()).size());
      const RunResult r = run(transport, flow.u1.dofmap, config.output_every, [&](int step, double, const FemField& u) {
        out.scalar(mesh, u, "_" + padded(step, width));
      });
      if (options.log) *options.log << "coupled: " << r.steps << " steps to t = " << r.final_time << "\n";
      out.scalar(mesh, r.u, "");
      break;
    }
    case ProblemKind::convergence:
      break;
  }
  return std::move(out).files();
}

}  // namespace femkit
