#include "pmpqoc/analytic/reparam.hpp"

#include <numeric>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc::analytic {

double PiecewiseControl::duration() const { return std::accumulate(durations.begin(), durations.end(), 0.0); }

PiecewiseControl arc_length_normalize(const ControlLaw& control) {
  const double dt = control.grid().dt();
  const int n = control.grid().n_steps();
  PiecewiseControl out;
  std::vector<int> kept;
  for (int k = 0; k < n; ++k) {
    const double norm = control.values().col(k).norm();
    if (norm > 0.0) {
      kept.push_back(k);
      out.durations.push_back(dt * norm);
    } else {
      ++out.dropped;
    }
  }
  if (kept.empty()) throw ArgumentError("arc_length_normalize: control is identically zero");
  out.values.resize(control.channels(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i)
    out.values.col(static_cast<Eigen::Index>(i)) = control.values().col(kept[i]).normalized();
  out.length = out.duration();
  return out;
}

}  // namespace pmpqoc::analytic
