#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "delaymp/absde/basis.hpp"
#include "delaymp/core/brownian.hpp"
#include "delaymp/core/grid.hpp"
#include "delaymp/core/path_field.hpp"
#include "delaymp/sdde/simulate.hpp"

namespace delaymp {

/// Arguments handed to an ABSDE generator at node `node` of path `path`.
/// `a` and `b` are the conditional expectations of the anticipated values at
/// node + m. The path index lets a generator read forward-state data.
struct DriverArgs {
  double t = 0.0;
  int node = 0;
  std::size_t path = 0;
  double y = 0.0;
  double z = 0.0;
  double a = 0.0;
  double b = 0.0;
};

using Generator = std::function<double(const DriverArgs&)>;

/// Per-path quantity at node j (= i + m) whose conditional expectation given
/// the state at node i becomes `a` (resp. `b`).
using AnticipatedFn = std::function<double(std::size_t path, int node, double y, double z)>;

struct AbsdeSpec {
  std::string name = "absde";
  Generator generator;
  /// Terminal data on nodes [n, n + m]; a single row is shared by all paths.
  PathField terminal_y;
  PathField terminal_z;
  /// Defaults (empty) anticipate y and z themselves.
  AnticipatedFn anticipated_y;
  AnticipatedFn anticipated_z;
};

struct AbsdeMetadata {
  int degree = 0;
  std::size_t basis_size = 0;
  /// Per node in [0, n): condition number and whether ridge was applied.
  std::vector<double> condition;
  std::vector<bool> ridge_applied;
  std::vector<std::size_t> active_functions;
};

struct AbsdeSolution {
  TimeGrid grid;
  PathField y;  ///< nodes [0, n + m]
  PathField z;  ///< nodes [0, n + m]
  PathField a;  ///< anticipated y-term used at nodes [0, n)
  PathField b;  ///< anticipated z-term used at nodes [0, n)
  AbsdeMetadata metadata;

  std::size_t n_paths() const noexcept { return y.rows(); }
};

/// Backward regression sweep. At node i, with Pi_i the projection on the
/// basis at (X(t_i), X(t_i - delta)):
///   yhat_i = Pi_i y_{i+1},
///   z_i    = Pi_i [(y_{i+1} - yhat_i) dB_i / h],
///   a_i    = Pi_i A(y_{i+m}, z_{i+m}),  b_i = Pi_i B(y_{i+m}, z_{i+m}),
///   y_i    = Pi_i [y_{i+1} + h f(t_i, yhat_i, z_i, a_i, b_i)].
/// Subtracting yhat_i from the z target leaves its expectation unchanged and
/// removes most of its variance.
AbsdeSolution solve_absde(const AbsdeSpec& spec, const StatePaths& forward,
                          const BrownianEnsemble& ens, const RegressionBasis& basis = {});

struct ResidualReport {
  std::vector<double> per_node;  ///< nodes [0, n)
  double mean = 0.0;
};

/// Projected one-step residual R_i = y_{i+1} + f(t_i, y_i, z_i, a_i, b_i) h
/// - z_i dB_i - y_i: for each node the cross-path mean of (Pi_i R_i)^2,
/// then the mean over nodes.
ResidualReport martingale_residual(const AbsdeSolution& sol, const AbsdeSpec& spec,
                                   const StatePaths& forward, const BrownianEnsemble& ens,
                                   const RegressionBasis& basis = {});

/// Largest finite-difference slope of the generator in (y, z, a, b) over
/// `samples` points of [-range, range]^4 on path 0 at the given nodes.
double generator_slope_bound(const AbsdeSpec& spec, const TimeGrid& grid, int samples = 64,
                             double range = 2.0, std::uint64_t seed = 11);

}  // namespace delaymp
