#include "delaymp/core/grid.hpp"

#include <cmath>

#include <fmt/core.h>

#include "delaymp/core/error.hpp"

namespace delaymp {

namespace {
constexpr double kDivisibilityTolerance = 1e-9;
}

TimeGrid TimeGrid::make(double horizon, double delay, int steps_per_delay) {
  if (!(delay > 0.0) || !std::isfinite(delay)) {
    throw Error(Errc::NonPositiveDelay, fmt::format("delay must be positive, got {}", delay));
  }
  if (steps_per_delay < 1) {
    throw Error(Errc::InvalidArgument,
                fmt::format("steps_per_delay must be >= 1, got {}", steps_per_delay));
  }
  if (!(horizon > delay) || !std::isfinite(horizon)) {
    throw Error(Errc::InvalidArgument,
                fmt::format("horizon {} must exceed the delay {}", horizon, delay));
  }
  const double step = delay / steps_per_delay;
  const double ratio = horizon / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > kDivisibilityTolerance * rounded) {
    throw Error(Errc::NonDivisibleHorizon,
                fmt::format("T = {} is not a multiple of h = {} (T/h = {})", horizon, step, ratio));
  }
  return TimeGrid(horizon, delay, steps_per_delay, step, static_cast<int>(rounded));
}

bool TimeGrid::is_node(double t) const noexcept {
  const double ratio = t / step_;
  const double rounded = std::round(ratio);
  return std::abs(ratio - rounded) <= kDivisibilityTolerance * std::max(1.0, std::abs(rounded)) &&
         rounded >= first_index() && rounded <= last_index();
}

int TimeGrid::index_of(double t) const {
  if (!is_node(t)) {
    throw Error(Errc::InvalidArgument, fmt::format("t = {} is not a grid node (h = {})", t, step_));
  }
  return static_cast<int>(std::round(t / step_));
}

}  // namespace delaymp
