// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "femkit/advdiff.hpp"
#include "femkit/assembly.hpp"
#include "femkit/config.hpp"
#include "femkit/coupling.hpp"
#include "femkit/driver.hpp"
#include "femkit/output.hpp"
#include "femkit/quadrature.hpp"
#include "femkit/stokes.hpp"
#include "support/oracles.hpp"

using namespace femkit;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(FEMKIT_SOURCE_DIR) / "configs";

// Collects failed checks of one criterion.
class Check {
 public:
  void that(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void below(double value, double limit, const std::string& what) {
    if (!(value <= limit)) {
      std::ostringstream s;
      s << what << " = " << value << " > " << limit;
      failures_.push_back(s.str());
    }
  }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Check&)> body;
};

std::string csv(const FemField& f) {
  std::ostringstream out;
  write_field_csv(f, out);
  return out.str();
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// ---- 1: worked 1D Laplace example --------------------------------------------------------

std::string laplace_artifact(Check& c) {
  const ProblemConfig config = parse_config_file(kConfigs / "laplace1d.cfg");
  const AnyMesh mesh = build_mesh(config);
  const PoissonSolution s = solve_poisson(config, mesh);
  const SparseMatrix& k = s.system.matrix;
  double matrix_err = 0.0;
  for (Index i = 0; i < 6; ++i) {
    for (Index j = 0; j < 6; ++j) {
      double want = 0.0;
      if (i == j) want = (i == 0 || i == 5) ? 5.0 : 10.0;
      if (std::abs(i - j) == 1) want = -5.0;
      matrix_err = std::max(matrix_err, std::abs(k.at(i, j) - want));
    }
  }
  c.below(matrix_err, 1e-14, "stiffness matrix error");
  const std::vector<double> load{-0.1, -0.2, -0.2, -0.2, -0.2, -0.1};
  double load_err = 0.0;
  for (int i = 0; i < 6; ++i) load_err = std::max(load_err, std::abs(s.system.rhs[i] - load[i]));
  c.below(load_err, 1e-14, "load vector error");
  const std::vector<double> reduced{24.0 / 5, -1.0 / 5, -1.0 / 5, 24.0 / 5};
  c.that(s.reduced.rhs.size() == 4, "reduced system has 4 unknowns");
  double red_err = 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(4, s.reduced.rhs.size()); ++i)
    red_err = std::max(red_err, std::abs(s.reduced.rhs[i] - reduced[i]));
  c.below(red_err, 1e-14, "reduced rhs error");
  const std::vector<double> nodal{1.0, 23.0 / 25, 22.0 / 25, 22.0 / 25, 23.0 / 25, 1.0};
  const Expression exact = config.coefficient("exact");
  double sol_err = 0.0, exact_err = 0.0;
  for (int i = 0; i < 6; ++i) {
    sol_err = std::max(sol_err, std::abs(s.u.coefficients[i] - nodal[i]));
    exact_err = std::max(exact_err, std::abs(s.u.coefficients[i] - exact(s.u.dofmap->dof_coords[i])));
  }
  c.below(sol_err, 1e-12, "nodal solution error");
  c.below(exact_err, 1e-12, "error against x^2/2 - x/2 + 1");
  return csv(s.u);
}

// ---- 2: quadrature exactness ---------------------------------------------------------------

void quadrature(Check& c) {
  std::mt19937 rng(2718u);
  std::uniform_real_distribution<double> coef(-5.0, 5.0), end(-3.0, 3.0);
  const QuadratureRule g = gauss3_interval();
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    double p[6];
    for (double& v : p) v = coef(rng);
    double a = end(rng), b = end(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-6) continue;
    double exact = 0.0;
    for (int k = 0; k < 6; ++k) exact += p[k] * (std::pow(b, k + 1) - std::pow(a, k + 1)) / (k + 1);
    const double approx = integrate(g, a, b, [&](double x) {
      double s = 0.0;
      for (int k = 5; k >= 0; --k) s = s * x + p[k];
      return s;
    });
    worst = std::max(worst, std::abs(approx - exact) / std::max(1.0, std::abs(exact)));
  }
  c.below(worst, 1e-13, "gauss3 relative error, degree <= 5");

  const QuadratureRule t = triangle_rule(5);
  auto fact = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  double moment_err = 0.0;
  for (int a = 0; a <= 5; ++a) {
    for (int b = 0; a + b <= 5; ++b) {
      double s = 0.0;
      for (std::size_t q = 0; q < t.size(); ++q) s += t.weights[q] * std::pow(t.points[q].x, a) * std::pow(t.points[q].y, b);
      const double exact = fact(a) * fact(b) / fact(a + b + 2);
      moment_err = std::max(moment_err, std::abs(s - exact) / exact);
    }
  }
  c.below(moment_err, 1e-13, "triangle moment relative error, degree <= 5");
}

// ---- 3: assembly against the brute-force oracle -----------------------------------------------

void assembly_oracle(Check& c) {
  oracle::Coefficients coef;
  coef.kappa = [](Point2 p) { return 1.0 + p.x + p.y; };
  coef.c = [](Point2 p) { return 1.0 + p.x; };
  coef.beta = [](Point2 p) { return Point2{1.0 + p.y, 2.0 - p.x}; };
  const ScalarCoefficient kappa(coef.kappa), mass_c(coef.c);
  const VectorCoefficient beta(std::function<Vec2(Point2)>(coef.beta));
  int compared = 0;
  double worst = 0.0;
  for (const auto& sm : oracle::small_meshes()) {
    for (FeKind kind : {FeKind::P1_2D, FeKind::P2_2D}) {
      const auto trial = std::make_shared<const DofMap>(build_dofmap(sm.mesh, {kind, false}));
      if (trial->n_dofs > 20) continue;
      const std::pair<BilinearForm, oracle::Form> forms[] = {{Stiffness{kappa}, oracle::Form::stiffness},
                                                             {Mass{mass_c}, oracle::Form::mass},
                                                             {Convection{beta}, oracle::Form::convection}};
      for (const auto& [form, oform] : forms) {
        const auto got = assemble_bilinear(form, *trial).to_dense();
        worst = std::max(worst, oracle::max_diff(got, oracle::brute_force(sm.mesh, *trial, *trial, oform, coef)));
        ++compared;
      }
      if (kind != FeKind::P2_2D) continue;
      const DofMap pressure = build_dofmap(sm.mesh, {FeKind::P1_2D, false});
      for (int comp : {0, 1}) {
        const auto got = assemble_bilinear(Divergence{comp}, *trial, pressure).to_dense();
        const auto want = oracle::brute_force(sm.mesh, *trial, pressure,
                                              comp == 0 ? oracle::Form::divergence_x : oracle::Form::divergence_y, coef);
        worst = std::max(worst, oracle::max_diff(got, want));
        ++compared;
      }
    }
  }
  c.that(compared >= 30, "at least 30 matrix comparisons");
  c.below(worst, 1e-13, "max entrywise difference");
}

// ---- 4: Stokes manufactured solution ---------------------------------------------------------

std::string stokes_artifact(Check& c, double mu) {
  StokesProblem p;
  p.mesh = build_structured_mesh(RectangleSpec{0, 1, 0, 1, 8, 8});
  p.mu = mu;
  p.eps = 1e-8;
  p.f = [](Point2) { return Vec2{1.0, 1.0}; };
  for (int label : {1, 2, 3, 4}) p.dirichlet.push_back({label, [](Point2 x) { return Vec2{x.y, x.x}; }});
  const StokesSolution s = solve_stokes(p);
  double ue = 0.0, pe = 0.0;
  for (Index i = 0; i < s.u1.size(); ++i) {
    const Point2 x = s.u1.dofmap->dof_coords[i];
    ue = std::max({ue, std::abs(s.u1.coefficients[i] - x.y), std::abs(s.u2.coefficients[i] - x.x)});
  }
  for (Index i = 0; i < s.p.size(); ++i) {
    const Point2 x = s.p.dofmap->dof_coords[i];
    pe = std::max(pe, std::abs(s.p.coefficients[i] - (x.x + x.y - 1.0)));
  }
  double flux = 0.0;
  for (int label : {1, 2, 3, 4}) flux += boundary_flux(s.u1, s.u2, label);
  const std::string tag = " (mu = " + std::to_string(mu) + ")";
  c.below(ue, 1e-6, "max velocity dof error" + tag);
  c.below(pe, 1e-4, "max pressure dof error" + tag);
  c.below(s.divergence, 1e-6, "divergence_l2" + tag);
  c.below(std::abs(flux), 1e-6, "boundary flux sum" + tag);
  return csv(s.u1) + csv(s.u2) + csv(s.p);
}

// ---- 5: dike flux balance --------------------------------------------------------------------

void dike_flux(Check& c) {
  const ProblemConfig config = parse_config_file(kConfigs / "stokes_dike.cfg");
  const TriMesh mesh = std::get<TriMesh>(build_mesh(config));
  c.that(mesh.triangles.size() == 2u * 45 * 10, "dike(45,10) mesh");
  const StokesSolution s = solve_stokes(make_stokes_problem(config, mesh));
  const double in = boundary_flux(s.u1, s.u2, 2);
  const double out = boundary_flux(s.u1, s.u2, 3);
  c.that(std::abs(in) > 0.0, "nonzero inflow");
  c.below(std::abs(in + out), 1e-3 * std::abs(in), "|flux(2) + flux(3)|");
}

// ---- 6: 1D advection-diffusion steady state --------------------------------------------------

std::string advdiff_artifact(Check& c) {
  const ProblemConfig config = parse_config_file(kConfigs / "advdiff1d.cfg");
  AdvDiffProblem p = make_advdiff_problem(config, build_mesh(config));
  c.that(std::get<Mesh1D>(p.mesh).element_count() == 200, "N = 200");
  const FemField steady = steady_solve(p);
  double err = 0.0;
  for (Index i = 0; i < steady.size(); ++i) {
    const double x = steady.dofmap->dof_coords[i].x;
    const double exact = (std::exp(10.0) - std::exp(10.0 * x)) / (std::exp(10.0) - 1.0);
    err = std::max(err, std::abs(steady.coefficients[i] - exact));
  }
  c.below(err, 5e-3, "max nodal error against the analytic profile");
  p.T = 50.0;
  const RunResult r = run(p, 1000000);
  std::vector<double> d(steady.coefficients.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = r.u.coefficients[i] - steady.coefficients[i];
  c.that(r.steps == 500, "500 steps to T = 50");
  c.below(max_abs(d), 1e-4, "transient at T = 50 against steady_solve");
  return csv(steady) + csv(r.u);
}

// ---- 7: convergence rates --------------------------------------------------------------------

void convergence(Check& c) {
  const struct {
    const char* file;
    double lo, hi;
  } cases[] = {{"convergence_poisson_p1.cfg", 1.8, 2.2}, {"convergence_poisson_p2.cfg", 2.7, 3.3}};
  for (const auto& k : cases) {
    const ProblemConfig config = parse_config_file(kConfigs / k.file);
    const RateTable t = convergence_study(config, 4);
    const double slope = t.slopes.at(0);
    std::ostringstream what;
    what << k.file << " L2 slope " << slope << " outside [" << k.lo << ", " << k.hi << "]";
    c.that(t.norms.at(0) == "l2", "first norm is l2");
    c.that(slope >= k.lo && slope <= k.hi, what.str());
  }
}

// ---- 8: coupled dike run ---------------------------------------------------------------------

void coupled(Check& c) {
  const ProblemConfig config = parse_config_file(kConfigs / "coupled_dike.cfg");
  const TriMesh mesh = std::get<TriMesh>(build_mesh(config));
  const CoupledProblem p = make_coupled_problem(config, mesh);
  c.that(p.transport.dt == 0.05 && p.transport.T == 10.0 && p.t_gate == 1.5, "dt 0.05, T 10, gate 1.5");
  std::vector<double> norms;
  const CoupledResult r = run_coupled(p, 1, [&](int, double, const FemField& u) { norms.push_back(l2_norm(u)); });
  c.that(norms.size() == 200, "200 steps");
  // Boundary data are bounded by 1 in absolute value.
  const double bound = 2.0 * std::sqrt(mesh.area());
  double largest = 0.0;
  for (double n : norms) largest = std::max(largest, std::isfinite(n) ? n : INFINITY);
  c.below(largest, bound, "max L2 norm");
  bool monotone = norms.size() >= 101;
  for (std::size_t i = norms.size() >= 100 ? norms.size() - 100 : 1; i < norms.size(); ++i) {
    if (norms[i] > norms[i - 1]) monotone = false;
  }
  c.that(monotone, "L2 norm non-increasing over the final 100 steps");
  c.that(integrate_field(r.transport.u) > 0.0, "positive final total mass");
}

// ---- 9: determinism --------------------------------------------------------------------------

void determinism(Check& c) {
  Check scratch;
  c.that(laplace_artifact(scratch) == laplace_artifact(scratch), "criterion 1 CSV bytes");
  c.that(stokes_artifact(scratch, 0.1) + stokes_artifact(scratch, 1.0) ==
             stokes_artifact(scratch, 0.1) + stokes_artifact(scratch, 1.0),
         "criterion 4 CSV bytes");
  c.that(advdiff_artifact(scratch) == advdiff_artifact(scratch), "criterion 6 CSV bytes");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "golden 1D Laplace reproduction", 1.0, [](Check& c) { laplace_artifact(c); }},
      {2, "quadrature exactness", 1.0, quadrature},
      {3, "assembly against brute-force oracle", 10.0, assembly_oracle},
      {4, "Stokes manufactured solution", 30.0,
       [](Check& c) {
         stokes_artifact(c, 0.1);
         stokes_artifact(c, 1.0);
       }},
      {5, "dike flux balance", 120.0, dike_flux},
      {6, "1D advection-diffusion steady state", 30.0, [](Check& c) { advdiff_artifact(c); }},
      {7, "P1/P2 convergence rates", 120.0, convergence},
      {8, "coupled dike run", 300.0, coupled},
      {9, "determinism of CSV artifacts", 120.0, determinism},
  };
  int failed = 0;
  for (const auto& crit : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.body(check);
    } catch (const std::exception& e) {
      check.that(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > crit.budget_seconds) {
      check.that(false, "runtime " + std::to_string(seconds) + " s exceeds " + std::to_string(crit.budget_seconds) + " s");
    }
    const bool ok = check.failures().empty();
    if (!ok) ++failed;
    std::printf("%s [%d] %s (%.3f s)\n", ok ? "PASS" : "FAIL", crit.id, crit.name, seconds);
    for (const auto& f : check.failures()) std::printf("      %s\n", f.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
