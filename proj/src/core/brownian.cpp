#include "delaymp/core/brownian.hpp"

#include <cmath>
#include <numbers>

#include "delaymp/core/error.hpp"
#include "delaymp/core/parallel.hpp"
#include "delaymp/core/philox.hpp"
#include "delaymp/core/stats.hpp"

namespace delaymp {

BrownianEnsemble::BrownianEnsemble(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed)
    : grid_(grid),
      n_paths_(n_paths),
      seed_(seed),
      width_(static_cast<std::size_t>(grid.last_index() - grid.first_index())) {
  if (n_paths == 0) throw Error(Errc::InvalidArgument, "ensemble needs at least one path");
  data_.resize(n_paths_ * width_);
  parallel_for(n_paths_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) fill_path(grid_, seed_, p, mutable_row(p));
  });
}

// Two normals per Philox block via Box-Muller; block b feeds intervals 2b and
// 2b + 1 (counted from the first interval).
void BrownianEnsemble::fill_path(const TimeGrid& grid, std::uint64_t seed, std::size_t path,
                                 std::span<double> out) {
  const Philox4x32 gen({static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  const double scale = std::sqrt(grid.step());
  const auto path64 = static_cast<std::uint64_t>(path);
  for (std::size_t k = 0; k < out.size(); k += 2) {
    const auto block = static_cast<std::uint64_t>(k / 2);
    const auto r = gen({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                        static_cast<std::uint32_t>(path64), static_cast<std::uint32_t>(path64 >> 32)});
    const double u1 = to_open_unit((std::uint64_t{r[1]} << 32) | r[0]);
    const double u2 = to_open_unit((std::uint64_t{r[3]} << 32) | r[2]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[k] = scale * radius * std::cos(angle);
    if (k + 1 < out.size()) out[k + 1] = scale * radius * std::sin(angle);
  }
}

double BrownianEnsemble::value_at(std::size_t path, int index) const noexcept {
  CompensatedSum acc;
  if (index >= 0) {
    for (int i = 0; i < index; ++i) acc.add(increment(path, i));
    return acc.value();
  }
  for (int i = index; i < 0; ++i) acc.add(-increment(path, i));
  return acc.value();
}

BrownianEnsemble sample_brownian(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed) {
  return BrownianEnsemble(grid, n_paths, seed);
}

}  // namespace delaymp
