#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace delaymp {

/// Neumaier-compensated accumulator. All cross-path sums in the library go
/// through this type, in path-index order.
class CompensatedSum {
 public:
  void add(double value) noexcept;
  double value() const noexcept { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;

struct SampleSummary {
  double mean = 0.0;
  double sd = 0.0;      ///< unbiased sample standard deviation
  double std_error = 0.0;  ///< sd / sqrt(n)
  std::size_t count = 0;
};

SampleSummary summarize(std::span<const double> values);

/// Pearson correlation of two equally long samples.
double correlation(std::span<const double> a, std::span<const double> b);

/// Ordinary least-squares slope of y against x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace delaymp
