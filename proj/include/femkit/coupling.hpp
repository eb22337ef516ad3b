#pragma once

#include "femkit/advdiff.hpp"
#include "femkit/stokes.hpp"

namespace femkit {

/// Stokes velocity feeding the advection field of a transport problem on the same mesh.
struct CoupledProblem {
  StokesProblem stokes;
  /// Mesh and beta are taken from the Stokes side; the space is forced to P2.
  AdvDiffProblem transport;
  double t_gate = 0.0;
  int gated_label = 2;
};

struct CoupledResult {
  StokesSolution flow;
  RunResult transport;
};

/// Transport problem with beta bound to the Stokes velocity and Dirichlet data on
/// `gated_label` switched to zero for t > t_gate.
AdvDiffProblem bind_transport(const CoupledProblem& problem, const StokesSolution& flow);

CoupledResult run_coupled(const CoupledProblem& problem, int output_every, const StepSink& sink = {});

}  // namespace femkit
