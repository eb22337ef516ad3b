#include <doctest.h>

#include "femkit/stokes.hpp"

using namespace femkit;

namespace {

StokesProblem unit_square(Index n, double mu, std::function<Vec2(Point2)> wall) {
  StokesProblem p;
  p.mesh = build_structured_mesh(RectangleSpec{0, 1, 0, 1, n, n});
  p.mu = mu;
  for (int label : {1, 2, 3, 4}) p.dirichlet.push_back({label, wall});
  return p;
}

StokesProblem manufactured(Index n, double mu) {
  StokesProblem p = unit_square(n, mu, [](Point2 x) { return Vec2{x.y, x.x}; });
  p.f = [](Point2) { return Vec2{1.0, 1.0}; };
  return p;
}

double max_dof_error(const FemField& u, const std::function<double(Point2)>& exact) {
  double e = 0.0;
  for (Index i = 0; i < u.size(); ++i) e = std::max(e, std::abs(u.coefficients[i] - exact(u.dofmap->dof_coords[i])));
  return e;
}

StokesProblem dike(Index nx, Index ny) {
  StokesProblem p;
  p.mesh = build_structured_mesh(DikeSpec{nx, ny});
  p.mu = 0.1;
  p.dirichlet = {{1, [](Point2) { return Vec2{0.0, 0.0}; }},
                 {2, [](Point2 x) { return Vec2{-1.5 * (x.y - 1.0) * (x.y + 1.0), 1.0}; }}};
  p.neumann = {3};
  return p;
}

}  // namespace

TEST_CASE("block system: size, symmetry and pressure block") {
  StokesProblem p = unit_square(2, 1.0, [](Point2) { return Vec2{}; });
  const StokesSystem s = assemble_stokes(p);
  CHECK(s.velocity_space->n_dofs == 25);
  CHECK(s.pressure_space->n_dofs == 9);
  CHECK(s.system.matrix.rows() == 59);
  CHECK(asymmetry(s.system.matrix) <= 1e-14 * s.system.matrix.max_abs());
  for (Index i = 50; i < 59; ++i) CHECK(s.system.matrix.at(i, i) < 0.0);

  p.eps = 0.0;
  const StokesSystem s0 = assemble_stokes(p);
  for (Index i = 50; i < 59; ++i)
    for (Index j = 50; j < 59; ++j) CHECK(s0.system.matrix.at(i, j) == 0.0);
  // The velocity blocks do not couple u1 and u2.
  for (Index i = 0; i < 25; ++i)
    for (Index j = 25; j < 50; ++j) CHECK(s0.system.matrix.at(i, j) == 0.0);
}

TEST_CASE("uniform flow is reproduced with zero pressure") {
  const StokesSolution s = solve_stokes(unit_square(3, 0.7, [](Point2) { return Vec2{1.0, 0.0}; }));
  CHECK(max_dof_error(s.u1, [](Point2) { return 1.0; }) < 1e-10);
  CHECK(max_dof_error(s.u2, [](Point2) { return 0.0; }) < 1e-10);
  CHECK(max_dof_error(s.p, [](Point2) { return 0.0; }) < 1e-8);
  CHECK(boundary_flux(s.u1, s.u2, 2) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(boundary_flux(s.u1, s.u2, 4) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(std::abs(boundary_flux(s.u1, s.u2, 1)) < 1e-14);
}

TEST_CASE("manufactured solution u = (y, x), p = x + y - 1 is reproduced") {
  for (double mu : {0.1, 1.0}) {
    CAPTURE(mu);
    const StokesSolution s = solve_stokes(manufactured(4, mu));
    CHECK(max_dof_error(s.u1, [](Point2 x) { return x.y; }) <= 1e-6);
    CHECK(max_dof_error(s.u2, [](Point2 x) { return x.x; }) <= 1e-6);
    CHECK(max_dof_error(s.p, [](Point2 x) { return x.x + x.y - 1.0; }) <= 1e-4);
    CHECK(s.divergence <= 1e-6);
    CHECK(std::abs(integrate_field(s.p)) < 1e-12);
    double flux = 0.0;
    for (int label : {1, 2, 3, 4}) flux += boundary_flux(s.u1, s.u2, label);
    CHECK(std::abs(flux) <= 1e-6);
  }
}

TEST_CASE("diagnostics on interpolated fields") {
  const TriMesh m = build_structured_mesh(RectangleSpec{0, 2, 0, 1, 3, 2});
  const auto dm = std::make_shared<const DofMap>(build_dofmap(m, {FeKind::P2_2D, false}));
  const FemField a = interpolate(dm, [](Point2 x) { return x.x; });
  const FemField b = interpolate(dm, [](Point2 x) { return -x.y; });
  CHECK(divergence_l2(a, b) < 1e-13);
  // div (x, y) = 2 over an area of 2.
  const FemField c = interpolate(dm, [](Point2 x) { return x.y; });
  CHECK(divergence_l2(a, c) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-13));
  // (x, -y) leaves through the right edge x = 2 at rate int_0^1 2 dy = 2.
  CHECK(boundary_flux(a, b, 2) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(boundary_flux(a, b, 3) == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK_THROWS_AS(boundary_flux(a, b, 7), InputError);
}

TEST_CASE("dike channel: inflow balances outflow and the walls carry nothing") {
  const StokesSolution s = solve_stokes(dike(12, 4));
  const double in = boundary_flux(s.u1, s.u2, 2);
  const double out = boundary_flux(s.u1, s.u2, 3);
  const double walls = boundary_flux(s.u1, s.u2, 1);
  CHECK(in < 0.0);
  CHECK(std::abs(walls) < 1e-13);
  CHECK(std::abs(in + out) <= 1e-6 * std::abs(in));
}

TEST_CASE("validation") {
  StokesProblem p = dike(4, 2);
  SUBCASE("non-positive viscosity") {
    p.mu = 0.0;
    CHECK_THROWS_AS(solve_stokes(p), InputError);
  }
  SUBCASE("no Dirichlet boundary") {
    p.dirichlet.clear();
    p.neumann = {1, 2, 3};
    CHECK_THROWS_AS(solve_stokes(p), InputError);
  }
  SUBCASE("unclassified label") {
    p.neumann.clear();
    CHECK_THROWS_WITH_AS(validate(p), doctest::Contains("unclassified"), InputError);
  }
  SUBCASE("label classified twice") {
    p.neumann.push_back(2);
    CHECK_THROWS_WITH_AS(validate(p), doctest::Contains("more than once"), InputError);
  }
  SUBCASE("label not on the mesh") {
    p.neumann.push_back(8);
    CHECK_THROWS_AS(validate(p), InputError);
  }
  SUBCASE("negative stabilization") {
    p.eps = -1.0;
    CHECK_THROWS_AS(validate(p), InputError);
  }
}
