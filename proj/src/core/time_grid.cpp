#include "pmpqoc/core/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc {

TimeGrid::TimeGrid(double t_start, double t_end, int n_steps)
    : t_start_(t_start), t_end_(t_end), n_steps_(n_steps), dt_((t_end - t_start) / n_steps) {
  if (n_steps < 1) throw ValidationError("time grid needs n_steps >= 1, got " + std::to_string(n_steps));
  if (!(dt_ > 0.0) || !std::isfinite(dt_))
    throw ValidationError("time grid needs t_end > t_start with finite bounds");
}

int TimeGrid::interval_of(double t) const {
  if (t < t_start_ || t > t_end_) throw ArgumentError("time outside the grid");
  int k = static_cast<int>(std::floor((t - t_start_) / dt_));
  k = std::clamp(k, 0, n_steps_ - 1);
  // Node rounding: make sure node(k) <= t < node(k+1).
  while (k + 1 < n_steps_ && node(k + 1) <= t) ++k;
  while (k > 0 && node(k) > t) --k;
  return k;
}

}  // namespace pmpqoc
