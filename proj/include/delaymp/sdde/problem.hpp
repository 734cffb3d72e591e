#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace delaymp {

/// Arguments (t, x, x_delta, v, v_delta) of every coefficient function.
struct Arguments {
  double t = 0.0;
  double x = 0.0;
  double x_delay = 0.0;
  double v = 0.0;
  double v_delay = 0.0;
};

/// A coefficient value with its first and second partials in (x, x_delta).
struct Jet {
  double value = 0.0;
  double d_x = 0.0;
  double d_xd = 0.0;
  double d_xx = 0.0;
  double d_xdxd = 0.0;
  double d_xxd = 0.0;
};

struct TerminalJet {
  double value = 0.0;
  double d_x = 0.0;
  double d_xx = 0.0;
};

/// Control domain U as a finite union of closed intervals; endpoints may be
/// infinite and single points are degenerate intervals.
class ControlSet {
 public:
  static ControlSet real_line();
  static ControlSet interval(double lower, double upper);
  /// (-inf, lower] U [upper, +inf).
  static ControlSet outside(double lower, double upper);
  static ControlSet points(std::vector<double> values);

  bool contains(double v) const noexcept;
  /// Finite interval endpoints, sorted.
  std::vector<double> boundary_points() const;
  /// Sampling rule: admissible nodes of a uniform `count`-point grid on
  /// [lower, upper] merged with the boundary points inside that window.
  std::vector<double> sample(double lower, double upper, int count) const;
  std::string describe() const;

 private:
  std::vector<std::pair<double, double>> pieces_;
};

using CoefficientFn = std::function<Jet(const Arguments&)>;
using TerminalFn = std::function<TerminalJet(double)>;

/// Scalar controlled delay problem: drift b, diffusion sigma, running cost l
/// and terminal cost h, each with their (x, x_delta) partials.
struct DelayProblem {
  std::string name;
  CoefficientFn drift;
  CoefficientFn diffusion;
  CoefficientFn running_cost;
  TerminalFn terminal_cost;
  ControlSet controls = ControlSet::real_line();
};

struct PartialCheck {
  std::string partial;  ///< e.g. "b_x", "sigma_xxd", "h_xx"
  double max_error = 0.0;
  bool pass = true;
};

struct PartialCheckOptions {
  std::uint64_t seed = 7;
  int samples = 64;
  double step = 1e-5;
  double tolerance = 1e-4;
  double state_range = 2.0;  ///< x, x_delta drawn from [-range, range]
  double time_horizon = 1.0;
};

/// Validates every supplied partial against central differences of its
/// parent (first partials against the value, second partials against the
/// first ones). The error of each comparison is |fd - analytic| /
/// max(1, |analytic|). Controls are drawn from `ControlSet::sample`.
std::vector<PartialCheck> check_partials(const DelayProblem& problem,
                                         const PartialCheckOptions& options = {});

}  // namespace delaymp
