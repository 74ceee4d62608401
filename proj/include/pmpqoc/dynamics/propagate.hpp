#pragma once

#include <span>
#include <vector>

#include "pmpqoc/core/bilinear_system.hpp"
#include "pmpqoc/core/control_law.hpp"
#include "pmpqoc/core/csv.hpp"
#include "pmpqoc/core/state.hpp"

namespace pmpqoc::dynamics {

struct Trajectory {
  TimeGrid grid;
  Representation representation;
  std::vector<CVec> states;  // one per grid node
  ControlLaw control;

  const CVec& endpoint() const { return states.back(); }
  // Columns t, re(q_1), im(q_1), ...; imaginary columns omitted for real systems.
  CsvTable to_csv() const;
};

// exp(generator * dt) * state; throws NumericError on non-finite generators.
StateVector step_exponential(const CMat& generator, double dt, const StateVector& state);
CVec step_exponential(const CMat& generator, double dt, const CVec& state);

Trajectory propagate(const BilinearSystem& system, const ControlLaw& control, const StateVector& initial);

// Non-uniform piecewise-constant control: values.col(k) held for durations[k].
CVec propagate_piecewise(const BilinearSystem& system, std::span<const double> durations, const Mat& values,
                         const CVec& initial);

}  // namespace pmpqoc::dynamics
