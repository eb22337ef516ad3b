#include "femkit/cli.hpp"

#include <CLI11.hpp>

#include "femkit/driver.hpp"
#include "femkit/simd/kernels.hpp"

#ifndef FEMKIT_VERSION
#define FEMKIT_VERSION "unknown"
#endif

namespace femkit {

namespace {

constexpr int kOk = 0;
constexpr int kInputFailure = 1;
constexpr int kNumericalFailure = 2;

int cmd_mesh(const std::string& spec_text, const std::string& output, std::ostream& err) {
  const DomainSpec spec = parse_domain_spec(spec_text);
  if (std::holds_alternative<IntervalSpec>(spec)) {
    throw InputError("mesh files hold 2D triangulations; '" + spec_text + "' is an interval");
  }
  const TriMesh mesh = build_structured_mesh(spec);
  write_mesh(mesh, std::filesystem::path(output));
  const MeshMetrics m = mesh_metrics(mesh);
  err << "mesh " << describe(spec) << ": " << mesh.vertices.size() << " vertices, " << mesh.triangles.size()
      << " triangles, h = " << m.h << ", max aspect = " << m.max_aspect << " -> " << output << "\n";
  return kOk;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  const TriMesh mesh = read_mesh(std::filesystem::path(path), false);
  const ConformityReport report = validate_conformity(mesh);
  if (!report.ok()) {
    err << path << ": mesh is not conforming\n" << report.to_string();
    return kNumericalFailure;
  }
  const MeshMetrics m = mesh_metrics(mesh);
  out << path << ": ok, " << mesh.vertices.size() << " vertices, " << mesh.triangles.size() << " triangles, "
      << mesh.boundary_edges.size() << " boundary edges, h = " << m.h << ", max aspect = " << m.max_aspect
      << ", quasi-uniformity = " << m.quasi_uniformity << "\n";
  return kOk;
}

int cmd_solve(const std::string& path, const std::string& prefix, std::ostream& err) {
  const ProblemConfig config = parse_config_file(path);
  RunOptions options;
  if (!prefix.empty()) options.prefix = prefix;
  options.log = &err;
  for (const auto& file : run_config(config, options)) err << "wrote " << file.string() << "\n";
  return kOk;
}

int cmd_convergence(const std::string& path, int levels, const std::string& prefix, std::ostream& out,
                    std::ostream& err) {
  const ProblemConfig config = parse_config_file(path);
  const int n = levels > 0 ? levels : config.levels;
  const RateTable table = convergence_study(config, n);
  const std::string csv = table.to_csv();
  out << csv;
  const std::filesystem::path file = (prefix.empty() ? config.prefix : prefix) + "_rates.csv";
  auto stream = std::ofstream(file, std::ios::binary);
  if (!stream) throw InputError("cannot write '" + file.string() + "'");
  stream << csv;
  err << "wrote " << file.string() << "\n";
  return kOk;
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"femkit: finite element solvers for Poisson, Stokes and advection-diffusion problems"};
  app.set_version_flag("--version", std::string("femkit ") + FEMKIT_VERSION + " (simd: " +
                                        std::string(simd::to_string(simd::active_backend())) + ")");
  app.require_subcommand(1);

  std::string spec, output, path, prefix;
  int levels = 0;

  auto* mesh = app.add_subcommand("mesh", "Generate a structured mesh file from a domain spec");
  mesh->add_option("spec", spec, "rectangle:x0,x1,y0,y1,nx,ny | disk:radius,n_r,n_theta | dike:nx,ny")->required();
  mesh->add_option("-o,--output", output, "Output mesh file")->required();

  auto* solve = app.add_subcommand("solve", "Solve the problem described by a config file");
  solve->add_option("config", path, "Config file")->required();
  solve->add_option("--prefix", prefix, "Override output.prefix");

  auto* conv = app.add_subcommand("convergence", "Measure error rates under uniform refinement");
  conv->add_option("config", path, "Config file")->required();
  conv->add_option("--levels", levels, "Number of refinement levels (at least 3)");
  conv->add_option("--prefix", prefix, "Override output.prefix");

  auto* validate = app.add_subcommand("validate", "Check a mesh file for conformity");
  validate->add_option("mesh", path, "Mesh file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputFailure;
  }

  try {
    if (*mesh) return cmd_mesh(spec, output, err);
    if (*solve) return cmd_solve(path, prefix, err);
    if (*conv) return cmd_convergence(path, levels, prefix, out, err);
    if (*validate) return cmd_validate(path, out, err);
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputFailure;
  }
  return kInputFailure;
}

}  // namespace femkit
