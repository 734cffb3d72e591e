#include "delaymp/sdde/control.hpp"

#include <cmath>

#include <fmt/core.h>

#include "delaymp/core/error.hpp"

namespace delaymp {

InitialData::InitialData(const TimeGrid& grid, std::vector<double> phi, std::vector<double> eta)
    : shift_(grid.delay_shift()), phi_(std::move(phi)), eta_(std::move(eta)) {
  const auto m = static_cast<std::size_t>(shift_);
  if (phi_.size() != m + 1 || eta_.size() != m) {
    throw Error(Errc::GridMismatch,
                fmt::format("initial data needs {} phi and {} eta nodes, got {} and {}", m + 1, m,
                            phi_.size(), eta_.size()));
  }
  for (double v : phi_) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "initial state path is not finite");
  }
  for (double v : eta_) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "initial control path is not finite");
  }
}

InitialData InitialData::constant(const TimeGrid& grid, double phi, double eta) {
  const auto m = static_cast<std::size_t>(grid.delay_shift());
  return InitialData(grid, std::vector<double>(m + 1, phi), std::vector<double>(m, eta));
}

InitialData InitialData::from_functions(const TimeGrid& grid,
                                        const std::function<double(double)>& phi,
                                        const std::function<double(double)>& eta) {
  const int m = grid.delay_shift();
  std::vector<double> phis, etas;
  for (int i = -m; i <= 0; ++i) phis.push_back(phi(grid.time_of(i)));
  for (int i = -m; i < 0; ++i) etas.push_back(eta(grid.time_of(i)));
  return InitialData(grid, std::move(phis), std::move(etas));
}

ControlProcess::ControlProcess(const TimeGrid& grid, PathField values, std::string label)
    : grid_(grid), values_(std::move(values)), label_(std::move(label)) {
  if (!values_.covers(grid.first_index(), grid.terminal_index())) {
    throw Error(Errc::GridMismatch, "control must be defined on every node of [-delta, T]");
  }
}

ControlProcess ControlProcess::constant(const TimeGrid& grid, const InitialData& init,
                                        double value) {
  return deterministic(grid, init, [value](double) { return value; });
}

ControlProcess ControlProcess::deterministic(const TimeGrid& grid, const InitialData& init,
                                             const std::function<double(double)>& value) {
  if (init.delay_shift() != grid.delay_shift()) {
    throw Error(Errc::GridMismatch, "initial data was built for another grid");
  }
  PathField v(1, grid.first_index(), grid.terminal_index());
  for (int i = grid.first_index(); i < 0; ++i) v(0, i) = init.eta(i);
  for (int i = 0; i <= grid.terminal_index(); ++i) v(0, i) = value(grid.time_of(i));
  return ControlProcess(grid, std::move(v));
}

bool ControlProcess::admissible(const ControlSet& set) const noexcept {
  for (std::size_t p = 0; p < values_.rows(); ++p) {
    for (int i = 0; i <= grid_.terminal_index(); ++i) {
      if (!set.contains(values_(p, i))) return false;
    }
  }
  return true;
}

void ControlProcess::require_admissible(const ControlSet& set) const {
  for (std::size_t p = 0; p < values_.rows(); ++p) {
    for (int i = 0; i <= grid_.terminal_index(); ++i) {
      if (!set.contains(values_(p, i))) {
        throw Error(Errc::OutsideControlSet,
                    fmt::format("control '{}' takes value {} outside U = {} at path {}, t = {}",
                                label_, values_(p, i), set.describe(), p, grid_.time_of(i)));
      }
    }
  }
}

}  // namespace delaymp
