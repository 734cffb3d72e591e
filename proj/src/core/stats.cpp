#include "delaymp/core/stats.hpp"

#include <cmath>

#include "delaymp/core/error.hpp"

namespace delaymp {

void CompensatedSum::add(double value) noexcept {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    correction_ += (sum_ - t) + value;
  } else {
    correction_ += (value - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

SampleSummary summarize(std::span<const double> values) {
  SampleSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = compensated_sum(values) / n;
  if (values.size() < 2) return s;
  CompensatedSum squares;
  for (double v : values) {
    const double d = v - s.mean;
    squares.add(d * d);
  }
  s.sd = std::sqrt(squares.value() / (n - 1.0));
  s.std_error = s.sd / std::sqrt(n);
  return s;
}

double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(Errc::InvalidArgument, "correlation needs two samples of equal length >= 2");
  }
  const double ma = summarize(a).mean;
  const double mb = summarize(b).mean;
  CompensatedSum sab, saa, sbb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab.add(da * db);
    saa.add(da * da);
    sbb.add(db * db);
  }
  return sab.value() / std::sqrt(saa.value() * sbb.value());
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(Errc::InvalidArgument, "slope fit needs two samples of equal length >= 2");
  }
  const double mx = summarize(x).mean;
  const double my = summarize(y).mean;
  CompensatedSum sxy, sxx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy.add((x[i] - mx) * (y[i] - my));
    sxx.add((x[i] - mx) * (x[i] - mx));
  }
  return sxy.value() / sxx.value();
}

}  // namespace delaymp
