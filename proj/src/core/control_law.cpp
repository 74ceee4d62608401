#include "pmpqoc/core/control_law.hpp"

#include <cmath>
#include <string>

#include "pmpqoc/core/errors.hpp"

namespace pmpqoc {

ControlLaw::ControlLaw(TimeGrid grid, Mat values, std::vector<std::optional<Interval>> bounds)
    : grid_(grid), values_(std::move(values)), bounds_(std::move(bounds)) {
  if (values_.cols() != grid_.n_steps())
    throw ArgumentError("control has " + std::to_string(values_.cols()) + " intervals, grid has " +
                        std::to_string(grid_.n_steps()));
  if (!values_.allFinite()) throw NumericError("control contains non-finite values");
  if (bounds_.empty()) bounds_.resize(values_.rows());
  if (static_cast<Eigen::Index>(bounds_.size()) != values_.rows())
    throw ArgumentError("bounds count differs from channel count");
  for (Eigen::Index j = 0; j < values_.rows(); ++j) {
    if (!bounds_[j]) continue;
    for (Eigen::Index k = 0; k < values_.cols(); ++k)
      if (!bounds_[j]->contains(values_(j, k)))
        throw ValidationError("control channel " + std::to_string(j) + " leaves its bounds at interval " +
                              std::to_string(k));
  }
}

ControlLaw ControlLaw::constant(TimeGrid grid, const Vec& u) {
  Mat v = u.replicate(1, grid.n_steps());
  return ControlLaw(grid, std::move(v));
}

ControlLaw ControlLaw::zero(TimeGrid grid, int channels) {
  return ControlLaw(grid, Mat::Zero(channels, grid.n_steps()));
}

double ControlLaw::length() const {
  double l = 0.0;
  for (Eigen::Index k = 0; k < values_.cols(); ++k) l += values_.col(k).norm();
  return l * grid_.dt();
}

double ControlLaw::energy() const { return values_.squaredNorm() * grid_.dt(); }

}  // namespace pmpqoc
