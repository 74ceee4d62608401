#include "pmpqoc/dynamics/propagate.hpp"

#include <string>

#include "pmpqoc/core/errors.hpp"
#include "pmpqoc/dynamics/expm.hpp"

namespace pmpqoc::dynamics {

CVec step_exponential(const CMat& generator, double dt, const CVec& state) {
  if (!(dt > 0.0)) throw ArgumentError("step_exponential needs dt > 0");
  if (generator.rows() != state.size()) throw ArgumentError("generator and state sizes differ");
  if (!generator.allFinite()) throw NumericError("step_exponential: non-finite generator");
  return expm(CMat(generator * dt)) * state;
}

StateVector step_exponential(const CMat& generator, double dt, const StateVector& state) {
  CVec next = step_exponential(generator, dt, state.entries);
  if (is_real(state.representation)) next = next.real().cast<cplx>();
  StateVector out = state;
  out.entries = std::move(next);
  return out;
}

Trajectory propagate(const BilinearSystem& system, const ControlLaw& control, const StateVector& initial) {
  if (control.channels() != system.channels())
    throw ArgumentError("control has " + std::to_string(control.channels()) + " channels, system has " +
                        std::to_string(system.channels()));
  if (initial.representation != system.representation())
    throw ArgumentError("state representation differs from system representation");
  if (initial.dimension() != system.dimension()) throw ArgumentError("state dimension differs from system");

  const TimeGrid& grid = control.grid();
  const double dt = grid.dt();
  const bool real = is_real(system.representation());
  Trajectory traj{grid, system.representation(), {}, control};
  traj.states.reserve(grid.n_steps() + 1);
  traj.states.push_back(initial.entries);

  CMat prop;
  Vec last_u;
  for (int k = 0; k < grid.n_steps(); ++k) {
    const Vec u = control.on_interval(k);
    if (k == 0 || u != last_u) {
      prop = expm(CMat(system.generator(u) * dt));
      if (real) prop = prop.real().cast<cplx>();
      last_u = u;
    }
    traj.states.push_back(prop * traj.states.back());
  }
  return traj;
}

CVec propagate_piecewise(const BilinearSystem& system, std::span<const double> durations, const Mat& values,
                         const CVec& initial) {
  if (static_cast<Eigen::Index>(durations.size()) != values.cols() || values.rows() != system.channels())
    throw ArgumentError("piecewise control shape mismatch");
  CVec q = initial;
  for (std::size_t k = 0; k < durations.size(); ++k) {
    if (durations[k] == 0.0) continue;
    q = step_exponential(system.generator(values.col(k)), durations[k], q);
    if (is_real(system.representation())) q = q.real().cast<cplx>();
  }
  return q;
}

CsvTable Trajectory::to_csv() const {
  CsvTable t;
  const bool real = is_real(representation);
  const auto n = states.empty() ? 0 : states.front().size();
  t.header.push_back("t");
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string idx = std::to_string(i + 1);
    if (real) {
      t.header.push_back("q_" + idx);
    } else {
      t.header.push_back("re(q_" + idx + ")");
      t.header.push_back("im(q_" + idx + ")");
    }
  }
  for (std::size_t k = 0; k < states.size(); ++k) {
    std::vector<double> row{grid.node(static_cast<int>(k))};
    for (Eigen::Index i = 0; i < n; ++i) {
      row.push_back(states[k](i).real());
      if (!real) row.push_back(states[k](i).imag());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace pmpqoc::dynamics
