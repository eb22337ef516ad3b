#include <doctest.h>

#include "femkit/coupling.hpp"

using namespace femkit;

namespace {

CoupledProblem dike_problem(Index nx, Index ny, double t_gate, double T) {
  CoupledProblem p;
  p.stokes.mesh = build_structured_mesh(DikeSpec{nx, ny});
  p.stokes.mu = 0.1;
  p.stokes.dirichlet = {{1, [](Point2) { return Vec2{}; }},
                        {2, [](Point2 x) { return Vec2{-1.5 * (x.y - 1.0) * (x.y + 1.0), 1.0}; }}};
  p.stokes.neumann = {3};
  p.transport.mesh = p.stokes.mesh;
  p.transport.mu = 0.05;
  p.transport.dirichlet = {{1, [](Point2, double) { return 0.0; }},
                           {2, [](Point2 x, double) { return -(x.y - 1.0) * (x.y + 1.0); }}};
  p.transport.neumann = {3};
  p.transport.dt = 0.05;
  p.transport.T = T;
  p.t_gate = t_gate;
  p.gated_label = 2;
  return p;
}

}  // namespace

TEST_CASE("zero flow reduces the coupled problem to pure diffusion") {
  CoupledProblem p = dike_problem(8, 3, 10.0, 0.5);
  p.stokes.dirichlet[1].u = [](Point2) { return Vec2{}; };
  const CoupledResult c = run_coupled(p, 1);
  CHECK(l2_norm(c.flow.u1) == 0.0);
  CHECK(l2_norm(c.flow.u2) == 0.0);

  AdvDiffProblem diffusion = p.transport;
  diffusion.space = FeKind::P2_2D;
  const RunResult d = run(diffusion, 1);
  REQUIRE(d.u.size() == c.transport.u.size());
  double diff = 0.0;
  for (Index i = 0; i < d.u.size(); ++i) diff = std::max(diff, std::abs(d.u.coefficients[i] - c.transport.u.coefficients[i]));
  CHECK(diff <= 1e-12);
}

TEST_CASE("a gate at t = 0 zeroes the inflow from the first step") {
  const CoupledResult c = run_coupled(dike_problem(8, 3, 0.0, 0.3), 1);
  const auto& dm = *c.transport.u.dofmap;
  for (Index d : dm.dofs_with_label(2)) CHECK(c.transport.u.coefficients[d] == 0.0);
  CHECK(l2_norm(c.transport.u) == 0.0);
}

TEST_CASE("gated boundary data switches off after t_gate") {
  const CoupledProblem p = dike_problem(6, 2, 1.0, 2.0);
  const StokesSolution flow = solve_stokes(p.stokes);
  const AdvDiffProblem t = bind_transport(p, flow);
  CHECK(resolved_space(t) == FeKind::P2_2D);
  const auto& g = t.dirichlet[1].g;
  const Point2 mid{-2.0 * std::acos(-1.0), 0.0};
  CHECK(g(mid, 0.5) == 1.0);
  CHECK(g(mid, 1.0) == 1.0);
  CHECK(g(mid, 1.0 + 1e-12) == 0.0);
}

TEST_CASE("a field-valued advection coefficient matches the equivalent closed form") {
  const TriMesh m = build_structured_mesh(DikeSpec{6, 3});
  const auto dm = std::make_shared<const DofMap>(build_dofmap(m, {FeKind::P2_2D, false}));
  auto b1 = [](Point2 x) { return 1.0 + 0.2 * x.x * x.y; };
  auto b2 = [](Point2 x) { return 0.5 - x.y * x.y; };
  const VectorCoefficient field(interpolate(dm, b1), interpolate(dm, b2));
  const VectorCoefficient closed(std::function<Vec2(Point2)>([&](Point2 x) { return Vec2{b1(x), b2(x)}; }));
  const auto a = assemble_bilinear(Convection{field}, *dm).to_dense();
  const auto b = assemble_bilinear(Convection{closed}, *dm).to_dense();
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  CHECK(diff <= 1e-12);
}

TEST_CASE("after the gate closes the L2 norm does not grow") {
  const CoupledProblem p = dike_problem(18, 4, 1.5, 4.0);
  std::vector<double> norms;
  const CoupledResult c = run_coupled(p, 1, [&](int, double t, const FemField& u) {
    if (t > 2.0) norms.push_back(l2_norm(u));
  });
  REQUIRE(norms.size() >= 30);
  for (std::size_t i = 1; i < norms.size(); ++i) CHECK(norms[i] <= norms[i - 1] * (1.0 + 1e-12));
  CHECK(integrate_field(c.transport.u) > 0.0);
}

TEST_CASE("binding errors") {
  CoupledProblem p = dike_problem(4, 2, 1.0, 1.0);
  const StokesSolution flow = solve_stokes(p.stokes);
  p.gated_label = 7;
  CHECK_THROWS_AS(bind_transport(p, flow), InputError);
  p.gated_label = 3;
  CHECK_THROWS_AS(bind_transport(p, flow), InputError);
}
