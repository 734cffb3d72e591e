#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "delaymp/core/brownian.hpp"
#include "delaymp/core/grid.hpp"
#include "delaymp/core/path_field.hpp"
#include "delaymp/core/stats.hpp"
#include "delaymp/sdde/control.hpp"
#include "delaymp/sdde/problem.hpp"

namespace delaymp {

struct Provenance {
  std::string problem;
  std::string control;
  std::uint64_t seed = 0;
};

/// State trajectories on the nodes of [-delta, T], one row per path.
struct StatePaths {
  TimeGrid grid;
  PathField x;
  Provenance provenance;

  std::size_t n_paths() const noexcept { return x.rows(); }
  double operator()(std::size_t path, int index) const noexcept { return x(path, index); }
};

/// Explicit Euler-Maruyama with left-point coefficients:
/// x_{i+1} = x_i + b(t_i, x_i, x_{i-m}, v_i, v_{i-m}) h + sigma(...) dB_i.
/// Throws Errc::GridMismatch, Errc::EnsembleMismatch, or Errc::NonFiniteState
/// (with path and step) when the recursion leaves the reals.
StatePaths simulate(const DelayProblem& problem, const ControlProcess& control,
                    const InitialData& init, const BrownianEnsemble& ens);

namespace detail {
/// One path of the Euler recursion. `u` and `x` are indexed from node -m;
/// `dB` from interval -m.
void euler_path(const DelayProblem& problem, const TimeGrid& grid, std::span<const double> u,
                const InitialData& init, std::span<const double> dB, std::span<double> x,
                std::size_t path_for_diagnostics);
}  // namespace detail

/// Monte Carlo estimate of E[ max over nodes of [0, T] of |X|^p ].
double sup_moment(const StatePaths& paths, double p);

/// Pathwise cost  sum_{i<n} l(t_i, x_i, x_{i-m}, v_i, v_{i-m}) h + h(x_n).
std::vector<double> pathwise_cost(const DelayProblem& problem, const ControlProcess& control,
                                  const StatePaths& paths);

/// Mean and standard error of the pathwise cost.
SampleSummary evaluate_cost(const DelayProblem& problem, const ControlProcess& control,
                            const StatePaths& paths);

}  // namespace delaymp
