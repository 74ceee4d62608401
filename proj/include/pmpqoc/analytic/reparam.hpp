#pragma once

#include <vector>

#include "pmpqoc/core/control_law.hpp"

namespace pmpqoc::analytic {

// Piecewise-constant control on a non-uniform partition: values.col(k) held for durations[k].
struct PiecewiseControl {
  std::vector<double> durations;
  Mat values;
  double length = 0.0;
  int dropped = 0;  // zero-norm intervals removed

  double duration() const;
};

// Unit-speed reparameterization of a driftless control: interval k becomes
// duration dt |u_k| with value u_k / |u_k|. Zero-norm intervals are dropped.
PiecewiseControl arc_length_normalize(const ControlLaw& control);

}  // namespace pmpqoc::analytic
