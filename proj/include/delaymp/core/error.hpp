#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace delaymp {

enum class Errc {
  NonDivisibleHorizon,
  NonPositiveDelay,
  InvalidArgument,
  NonFiniteState,
  IllConditionedRegression,
  EnsembleMismatch,
  GridMismatch,
  SpikeOutOfRange,
  InsufficientEpsilons,
  EmptyGrid,
  InadmissibleAlternative,
  OutsideControlSet,
  ConfigError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace delaymp
