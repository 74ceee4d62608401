#pragma once

namespace pmpqoc {

// Uniform grid on [t_start, t_end] with n_steps intervals.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, int n_steps);

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  int n_steps() const { return n_steps_; }
  double dt() const { return dt_; }
  double duration() const { return t_end_ - t_start_; }

  // Node k is computed from k directly so rounding never accumulates.
  double node(int k) const { return t_start_ + k * dt_; }

  // Index of the interval [t_k, t_{k+1}) containing t; t_end maps to the last one.
  int interval_of(double t) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double t_start_;
  double t_end_;
  int n_steps_;
  double dt_;
};

}  // namespace pmpqoc
