#pragma once

#include <optional>
#include <vector>

#include "pmpqoc/core/time_grid.hpp"
#include "pmpqoc/core/types.hpp"

namespace pmpqoc {

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool operator==(const Interval&) const = default;
};

// Piecewise-constant control: values(j, k) is u_j on [t_k, t_{k+1}).
class ControlLaw {
 public:
  ControlLaw(TimeGrid grid, Mat values, std::vector<std::optional<Interval>> bounds = {});

  static ControlLaw constant(TimeGrid grid, const Vec& u);
  static ControlLaw zero(TimeGrid grid, int channels);

  const TimeGrid& grid() const { return grid_; }
  int channels() const { return static_cast<int>(values_.rows()); }
  const Mat& values() const { return values_; }
  const std::vector<std::optional<Interval>>& bounds() const { return bounds_; }

  Vec on_interval(int k) const { return values_.col(k); }
  Vec at(double t) const { return values_.col(grid_.interval_of(t)); }

  // Sum over intervals of dt * |u_k| and dt * |u_k|^2.
  double length() const;
  double energy() const;

 private:
  TimeGrid grid_;
  Mat values_;
  std::vector<std::optional<Interval>> bounds_;
};

}  // namespace pmpqoc
