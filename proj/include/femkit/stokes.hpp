#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "femkit/assembly.hpp"
#include "femkit/mesh.hpp"

namespace femkit {

struct VelocityCondition {
  int label = 0;
  std::function<Vec2(Point2)> u;
};

/// -mu Lap u + grad p = f, div u = 0 on a triangulation, Taylor-Hood P2/P1.
struct StokesProblem {
  TriMesh mesh;
  double mu = 1.0;
  std::function<Vec2(Point2)> f;  // empty means zero
  /// Listed in priority order: a dof on two labels takes the first value.
  std::vector<VelocityCondition> dirichlet;
  std::vector<int> neumann;  // do-nothing boundaries
  double eps = 1e-8;
};

/// Throws InputError unless mu > 0, eps >= 0, at least one Dirichlet label exists and
/// every mesh label is classified exactly once.
void validate(const StokesProblem& problem);

struct StokesSystem {
  std::shared_ptr<const DofMap> velocity_space;  // P2
  std::shared_ptr<const DofMap> pressure_space;  // P1
  LinearSystem system;                           // unknowns [u1 | u2 | p]
};

StokesSystem assemble_stokes(const StokesProblem& problem);

struct StokesSolution {
  FemField u1, u2;
  FemField p;  // zero mean
  SolveReport report;
  double divergence = 0.0;  // divergence_l2(u1, u2)
};

StokesSolution solve_stokes(const StokesProblem& problem);

/// (int (d1 u1 + d2 u2)^2)^(1/2)
double divergence_l2(const FemField& u1, const FemField& u2);
/// int_{Gamma_label} u . n ds with the outward normal.
double boundary_flux(const FemField& u1, const FemField& u2, int label);

}  // namespace femkit
