#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace delaymp {

/// Per-path values on a contiguous range of grid node indices.
///
/// A field with a single row is deterministic and broadcasts to every path;
/// this keeps open-loop controls and closed-form adjoints cheap.
class PathField {
 public:
  PathField() = default;
  PathField(std::size_t rows, int first_index, int last_index, double fill = 0.0);

  std::size_t rows() const noexcept { return rows_; }
  bool deterministic() const noexcept { return rows_ == 1; }
  int first_index() const noexcept { return first_; }
  int last_index() const noexcept { return last_; }
  std::size_t row_length() const noexcept { return width_; }
  bool covers(int first, int last) const noexcept { return first_ <= first && last <= last_; }

  double operator()(std::size_t path, int index) const noexcept {
    return data_[offset(path, index)];
  }
  double& operator()(std::size_t path, int index) noexcept { return data_[offset(path, index)]; }

  /// Row of `path`; element k corresponds to node first_index() + k.
  std::span<const double> row(std::size_t path) const noexcept {
    return {data_.data() + row_start(path), width_};
  }
  std::span<double> row(std::size_t path) noexcept { return {data_.data() + row_start(path), width_}; }

  /// Copies node `index` across `n_paths` paths (broadcasting if deterministic).
  void column(int index, std::span<double> out) const noexcept;

  /// Expands a deterministic field to `n_paths` identical rows.
  PathField broadcast(std::size_t n_paths) const;

  friend bool operator==(const PathField&, const PathField&) = default;

 private:
  std::size_t row_start(std::size_t path) const noexcept {
    return (rows_ == 1 ? 0 : path) * width_;
  }
  std::size_t offset(std::size_t path, int index) const noexcept {
    return row_start(path) + static_cast<std::size_t>(index - first_);
  }

  std::size_t rows_ = 0;
  int first_ = 0;
  int last_ = -1;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

}  // namespace delaymp
