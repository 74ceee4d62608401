#pragma once

namespace pmpqoc::analytic {

// Two-level transfer in the rotating frame reduced to theta' = -u, theta(0) = 0, target -pi/2.

// Energy-optimal constant pulse pi / (2T).
double warmup_energy_optimal(double T);

// Minimal transfer time pi / (2 u_max) under |u| <= u_max.
double warmup_time_optimal(double u_max);

// theta(T) for a constant control u held on [0, T].
double warmup_theta(double u, double T);

}  // namespace pmpqoc::analytic
