#include <algorithm>
#include <cmath>
#include <sstream>

#include "femkit/driver.hpp"
#include "text_util.hpp"

namespace femkit {

namespace {

double mesh_size(const AnyMesh& mesh) {
  if (const auto* m = std::get_if<Mesh1D>(&mesh)) return m->h();
  return mesh_metrics(std::get<TriMesh>(mesh)).h;
}

double max_nodal_error(const FemField& u, const Expression& exact) {
  double worst = 0.0;
  for (std::size_t i = 0; i < u.coefficients.size(); ++i) {
    worst = std::max(worst, std::abs(u.coefficients[i] - exact(u.dofmap->dof_coords[i], 0.0)));
  }
  return worst;
}

std::function<double(Point2)> spatial(const Expression& e) {
  return [e](Point2 x) { return e(x, 0.0); };
}

}  // namespace

double fitted_slope(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size()) throw InputError("fitted_slope: length mismatch");
  if (h.size() < 3) throw InputError("convergence: need at least 3 refinement levels");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(e[i] > 0.0)) throw NumericalError("fitted_slope: sizes and errors must be positive");
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw NumericalError("fitted_slope: all mesh sizes are equal");
  return (n * sxy - sx * sy) / denom;
}

std::string RateTable::to_csv() const {
  std::ostringstream out;
  out << "h";
  for (const auto& n : norms) out << ',' << n;
  out << '\n';
  for (const auto& row : rows) {
    out << text::shortest(row.h);
    for (double e : row.errors) out << ',' << text::shortest(e);
    out << '\n';
  }
  out << "slope";
  for (double s : slopes) out << ',' << text::shortest(s);
  out << '\n';
  return out.str();
}

RateTable convergence_study(const ProblemConfig& config, int levels) {
  if (levels < 3) throw InputError("convergence: need at least 3 refinement levels");
  if (!config.domain) throw InputError("convergence studies need a structured domain, not a mesh file");
  const ProblemKind kind = config.effective_kind();
  RateTable table;
  if (kind == ProblemKind::stokes) {
    table.norms = {"velocity_l2", "velocity_max", "pressure_l2"};
  } else {
    table.norms = {"l2", "max"};
  }

  for (int level = 0; level < levels; ++level) {
    const AnyMesh mesh = build_mesh(refine(*config.domain, level));
    RateRow row;
    row.h = mesh_size(mesh);
    switch (kind) {
      case ProblemKind::poisson1d:
      case ProblemKind::poisson2d:
      case ProblemKind::advdiff1d: {
        if (!config.has("exact")) throw InputError("convergence study needs 'coefficients.exact'");
        const Expression exact = config.coefficient("exact");
        const FemField u = kind == ProblemKind::advdiff1d
                               ? steady_solve(make_advdiff_problem(config, mesh))
                               : solve_poisson(config, mesh).u;
        row.errors = {l2_error(u, spatial(exact)), max_nodal_error(u, exact)};
        break;
      }
      case ProblemKind::stokes: {
        for (const char* key : {"exact_u1", "exact_u2", "exact_p"}) {
          if (!config.has(key)) throw InputError(std::string("convergence study needs 'coefficients.") + key + "'");
        }
        const Expression e1 = config.coefficient("exact_u1"), e2 = config.coefficient("exact_u2"),
                         ep = config.coefficient("exact_p");
        const StokesSolution s = solve_stokes(make_stokes_problem(config, std::get<TriMesh>(mesh)));
        const double v1 = l2_error(s.u1, spatial(e1)), v2 = l2_error(s.u2, spatial(e2));
        // The discrete pressure has zero mean; compare against the zero-mean exact pressure.
        const double mean = integrate_field(interpolate(s.u1.dofmap, spatial(ep))) / s.u1.dofmap->measure();
        const double pe = l2_error(s.p, [&](Point2 x) { return ep(x, 0.0) - mean; });
        row.errors = {std::hypot(v1, v2), std::max(max_nodal_error(s.u1, e1), max_nodal_error(s.u2, e2)), pe};
        break;
      }
      default:
        throw InputError("no analytic solution is registered for problem kind " + to_string(kind));
    }
    table.rows.push_back(std::move(row));
  }

  std::vector<double> h;
  for (const auto& r : table.rows) h.push_back(r.h);
  for (std::size_t k = 0; k < table.norms.size(); ++k) {
    std::vector<double> e;
    for (const auto& r : table.rows) e.push_back(r.errors[k]);
    // Errors at round-off level carry no rate information.
    const bool exact = std::all_of(e.begin(), e.end(), [](double v) { return v < 1e-12; });
    table.slopes.push_back(exact ? std::nan("") : fitted_slope(h, e));
  }
  return table;
}

}  // namespace femkit
