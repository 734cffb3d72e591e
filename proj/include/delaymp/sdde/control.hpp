#pragma once

#include <functional>
#include <string>
#include <vector>

#include "delaymp/core/grid.hpp"
#include "delaymp/core/path_field.hpp"
#include "delaymp/sdde/problem.hpp"

namespace delaymp {

/// Initial state path phi on the nodes of [-delta, 0] and initial control
/// path eta on the nodes of [-delta, 0).
class InitialData {
 public:
  InitialData(const TimeGrid& grid, std::vector<double> phi, std::vector<double> eta);

  static InitialData constant(const TimeGrid& grid, double phi, double eta);
  static InitialData from_functions(const TimeGrid& grid, const std::function<double(double)>& phi,
                                    const std::function<double(double)>& eta);

  /// phi at node index in [-m, 0].
  double phi(int index) const noexcept { return phi_[static_cast<std::size_t>(index + shift_)]; }
  /// eta at node index in [-m, -1].
  double eta(int index) const noexcept { return eta_[static_cast<std::size_t>(index + shift_)]; }
  int delay_shift() const noexcept { return shift_; }

 private:
  int shift_;
  std::vector<double> phi_;
  std::vector<double> eta_;
};

/// Open-loop control values on the nodes of [-delta, T]. Values on
/// [-delta, 0) are the initial control path. A control with one row is
/// deterministic and shared by every path.
class ControlProcess {
 public:
  ControlProcess(const TimeGrid& grid, PathField values, std::string label = "control");

  static ControlProcess constant(const TimeGrid& grid, const InitialData& init, double value);
  static ControlProcess deterministic(const TimeGrid& grid, const InitialData& init,
                                      const std::function<double(double)>& value);

  const TimeGrid& grid() const noexcept { return grid_; }
  const PathField& values() const noexcept { return values_; }
  PathField& mutable_values() noexcept { return values_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  /// Value at node index in [-m, n]; decisions at node i only use
  /// information strictly before t_i.
  double operator()(std::size_t path, int index) const noexcept { return values_(path, index); }
  bool deterministic() const noexcept { return values_.deterministic(); }
  std::size_t rows() const noexcept { return values_.rows(); }

  /// Throws Errc::OutsideControlSet naming the first offending node.
  void require_admissible(const ControlSet& set) const;
  bool admissible(const ControlSet& set) const noexcept;

  friend bool operator==(const ControlProcess& a, const ControlProcess& b) {
    return a.grid_ == b.grid_ && a.values_ == b.values_;
  }

 private:
  TimeGrid grid_;
  PathField values_;
  std::string label_;
};

}  // namespace delaymp
