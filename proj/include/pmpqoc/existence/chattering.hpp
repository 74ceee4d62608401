#pragma once

#include "pmpqoc/core/bilinear_system.hpp"
#include "pmpqoc/dynamics/propagate.hpp"

namespace pmpqoc::existence {

struct ChatteringResult {
  int n_switches;
  double horizon;
  double distance;  // |q(T) - e^{-T} q_in|
  dynamics::Trajectory trajectory;
};

// q' = A_u q with A_1 = [[-1,1],[-1,0]], A_-1 = [[-1,-1],[1,0]], written as
// drift diag(-1, 0) plus u [[0,1],[-1,0]].
BilinearSystem chattering_system();

// Alternates u = +1, -1, +1, ... on n_switches + 1 equal sub-intervals of [0, T], q_in = (1, 0).
ChatteringResult chattering_demo(int n_switches, double horizon = 1.0);

}  // namespace pmpqoc::existence
