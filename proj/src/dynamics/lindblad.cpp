#include "pmpqoc/dynamics/lindblad.hpp"

#include <cmath>
#include <string>

#include "pmpqoc/core/errors.hpp"
#include "pmpqoc/dynamics/expm.hpp"

namespace pmpqoc::dynamics {

Trajectory propagate_lindblad(const LindbladModel& model, const ControlLaw& control, const CMat& rho0,
                              bool waive_positivity, double trace_tol) {
  const int n = model.dimension();
  if (control.channels() != model.hamiltonian().channels())
    throw ArgumentError("control channel count differs from the model");
  if (rho0.rows() != n || rho0.cols() != n) throw ArgumentError("initial density matrix has wrong size");
  if (!waive_positivity) {
    const auto pos = validate_lindblad_positivity(model);
    if (!pos.positive)
      throw ValidationError("Lindblad coefficient matrix is not positive (min eigenvalue " +
                            std::to_string(pos.min_eigenvalue) + ")");
  }

  const TimeGrid& grid = control.grid();
  Trajectory traj{grid, Representation::ComplexUnitary, {}, control};
  traj.states.reserve(grid.n_steps() + 1);
  traj.states.push_back(vectorize(rho0));

  CMat prop;
  Vec last_u;
  for (int k = 0; k < grid.n_steps(); ++k) {
    const Vec u = control.on_interval(k);
    if (k == 0 || u != last_u) {
      prop = expm(CMat(model.superoperator(u) * grid.dt()));
      last_u = u;
    }
    CVec next = prop * traj.states.back();
    const CMat rho = unvectorize(next, n);
    const double drift = std::abs(rho.trace() - cplx(1.0));
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (!(drift <= trace_tol) || !(herm <= trace_tol))
      throw NumericError("Lindblad propagation: trace drift " + std::to_string(drift) + ", Hermiticity defect " +
                         std::to_string(herm) + " at step " + std::to_string(k + 1));
    traj.states.push_back(std::move(next));
  }
  return traj;
}

}  // namespace pmpqoc::dynamics
