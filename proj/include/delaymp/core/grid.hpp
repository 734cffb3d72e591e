#pragma once

namespace delaymp {

/// Uniform grid on [-delta, T + delta] whose step divides the delay exactly,
/// so that t - delta and t + delta are plain index shifts by `delay_shift()`.
///
/// Node indices run from `-delay_shift()` (t = -delta) through
/// `n_steps() + delay_shift()` (t = T + delta); node 0 is t = 0 and node
/// `n_steps()` is t = T.
class TimeGrid {
 public:
  /// Throws Errc::NonPositiveDelay, Errc::InvalidArgument or
  /// Errc::NonDivisibleHorizon.
  static TimeGrid make(double horizon, double delay, int steps_per_delay);

  double horizon() const noexcept { return horizon_; }
  double delay() const noexcept { return delay_; }
  double step() const noexcept { return step_; }
  int delay_shift() const noexcept { return shift_; }
  int n_steps() const noexcept { return n_steps_; }

  int first_index() const noexcept { return -shift_; }
  int last_index() const noexcept { return n_steps_ + shift_; }
  int terminal_index() const noexcept { return n_steps_; }

  double time_of(int index) const noexcept { return index * step_; }

  /// Index of the node at time t; throws Errc::InvalidArgument when t is not
  /// a node of this grid.
  int index_of(double t) const;
  bool is_node(double t) const noexcept;

  /// Whether t_index lies in [0, T - delta), the support of the anticipated
  /// Hamiltonian term.
  bool before_last_delay(int index) const noexcept {
    return index >= 0 && index < n_steps_ - shift_;
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  TimeGrid(double horizon, double delay, int shift, double step, int n_steps)
      : horizon_(horizon), delay_(delay), step_(step), shift_(shift), n_steps_(n_steps) {}

  double horizon_;
  double delay_;
  double step_;
  int shift_;
  int n_steps_;
};

inline TimeGrid make_grid(double horizon, double delay, int steps_per_delay) {
  return TimeGrid::make(horizon, delay, steps_per_delay);
}

}  // namespace delaymp
