#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "delaymp/core/grid.hpp"

namespace delaymp {

/// Brownian increments for `n_paths` paths, one per grid interval on
/// [-delta, T + delta]. Interval `i` runs from node i to node i + 1.
///
/// Path p draws from the Philox stream keyed by `seed` with the path index in
/// the upper counter words, so any path can be regenerated in isolation.
class BrownianEnsemble {
 public:
  BrownianEnsemble(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t n_paths() const noexcept { return n_paths_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id(std::size_t path) const noexcept { return path; }

  double increment(std::size_t path, int interval) const noexcept {
    return data_[path * width_ + static_cast<std::size_t>(interval - grid_.first_index())];
  }
  /// Row of increments for `path`; element k is interval first_index() + k.
  std::span<const double> row(std::size_t path) const noexcept {
    return {data_.data() + path * width_, width_};
  }
  std::span<double> mutable_row(std::size_t path) noexcept {
    return {data_.data() + path * width_, width_};
  }
  std::size_t intervals() const noexcept { return width_; }

  /// Brownian value B(t_index) - B(0) along `path`.
  double value_at(std::size_t path, int index) const noexcept;

  /// Writes the increments of one path without materialising an ensemble.
  static void fill_path(const TimeGrid& grid, std::uint64_t seed, std::size_t path,
                        std::span<double> out);

 private:
  TimeGrid grid_;
  std::size_t n_paths_;
  std::uint64_t seed_;
  std::size_t width_;
  std::vector<double> data_;
};

BrownianEnsemble sample_brownian(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed);

}  // namespace delaymp
