#include "femkit/coupling.hpp"

#include <algorithm>

namespace femkit {

AdvDiffProblem bind_transport(const CoupledProblem& problem, const StokesSolution& flow) {
  const auto labels = problem.stokes.mesh.labels();
  if (!labels.contains(problem.gated_label)) {
    throw InputError("coupled: gated label " + std::to_string(problem.gated_label) + " is not on the mesh");
  }
  const auto& bc = problem.transport.dirichlet;
  if (std::none_of(bc.begin(), bc.end(), [&](const auto& c) { return c.label == problem.gated_label; })) {
    throw InputError("coupled: gated label " + std::to_string(problem.gated_label) + " has no Dirichlet data");
  }
  AdvDiffProblem out = problem.transport;
  out.mesh = problem.stokes.mesh;
  out.space = FeKind::P2_2D;
  out.beta = VectorCoefficient(flow.u1, flow.u2);
  for (auto& c : out.dirichlet) {
    if (c.label != problem.gated_label) continue;
    c.g = [g = c.g, gate = problem.t_gate](Point2 x, double t) { return t > gate ? 0.0 : g(x, t); };
  }
  return out;
}

CoupledResult run_coupled(const CoupledProblem& problem, int output_every, const StepSink& sink) {
  CoupledResult out;
  out.flow = solve_stokes(problem.stokes);
  const AdvDiffProblem transport = bind_transport(problem, out.flow);
  out.transport = run(transport, out.flow.u1.dofmap, output_every, sink);
  return out;
}

}  // namespace femkit
