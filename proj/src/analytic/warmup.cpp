#include "pmpqoc/analytic/warmup.hpp"

#include <numbers>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc::analytic {

double warmup_energy_optimal(double T) {
  if (!(T > 0.0)) throw ArgumentError("warmup_energy_optimal needs T > 0");
  return std::numbers::pi / (2.0 * T);
}

double warmup_time_optimal(double u_max) {
  if (!(u_max > 0.0)) throw ArgumentError("warmup_time_optimal needs u_max > 0");
  return std::numbers::pi / (2.0 * u_max);
}

double warmup_theta(double u, double T) { return -u * T; }

}  // namespace pmpqoc::analytic
