#include "delaymp/core/path_field.hpp"

#include <algorithm>

#include "delaymp/core/error.hpp"

namespace delaymp {

PathField::PathField(std::size_t rows, int first_index, int last_index, double fill)
    : rows_(rows), first_(first_index), last_(last_index) {
  if (rows == 0 || last_index < first_index) {
    throw Error(Errc::InvalidArgument, "path field needs at least one row and one node");
  }
  width_ = static_cast<std::size_t>(last_index - first_index + 1);
  data_.assign(rows_ * width_, fill);
}

void PathField::column(int index, std::span<double> out) const noexcept {
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = (*this)(p, index);
}

PathField PathField::broadcast(std::size_t n_paths) const {
  if (!deterministic()) return *this;
  PathField out(n_paths, first_, last_);
  for (std::size_t p = 0; p < n_paths; ++p) {
    std::copy(data_.begin(), data_.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(p * width_));
  }
  return out;
}

}  // namespace delaymp
