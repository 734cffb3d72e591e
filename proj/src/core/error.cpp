#include "delaymp/core/error.hpp"

namespace delaymp {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonDivisibleHorizon: return "NonDivisibleHorizon";
    case Errc::NonPositiveDelay: return "NonPositiveDelay";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonFiniteState: return "NonFiniteState";
    case Errc::IllConditionedRegression: return "IllConditionedRegression";
    case Errc::EnsembleMismatch: return "EnsembleMismatch";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::SpikeOutOfRange: return "SpikeOutOfRange";
    case Errc::InsufficientEpsilons: return "InsufficientEpsilons";
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::InadmissibleAlternative: return "InadmissibleAlternative";
    case Errc::OutsideControlSet: return "OutsideControlSet";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace delaymp
