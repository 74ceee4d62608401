#include "pmpqoc/existence/chattering.hpp"

#include <cmath>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc::existence {

BilinearSystem chattering_system() {
  Mat drift(2, 2);
  drift << -1, 0, 0, 0;
  Mat ctrl(2, 2);
  ctrl << 0, 1, -1, 0;
  return BilinearSystem::real(Representation::RealLinear, drift, {ctrl});
}

ChatteringResult chattering_demo(int n_switches, double horizon) {
  if (n_switches < 0) throw ArgumentError("n_switches must be non-negative");
  if (!(horizon > 0.0)) throw ArgumentError("horizon must be positive");
  const int intervals = n_switches + 1;
  const TimeGrid grid(0.0, horizon, intervals);
  Mat values(1, intervals);
  for (int k = 0; k < intervals; ++k) values(0, k) = k % 2 == 0 ? 1.0 : -1.0;
  const BilinearSystem sys = chattering_system();
  const StateVector q0 = StateVector::real(Representation::RealLinear, Vec::Unit(2, 0), false);
  auto traj = dynamics::propagate(sys, ControlLaw(grid, values), q0);
  const Vec target = std::exp(-horizon) * Vec::Unit(2, 0);
  const double d = (traj.endpoint().real() - target).norm();
  return {n_switches, horizon, d, std::move(traj)};
}

}  // namespace pmpqoc::existence
