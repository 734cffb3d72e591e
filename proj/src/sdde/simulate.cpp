#include "delaymp/sdde/simulate.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "delaymp/core/error.hpp"
#include "delaymp/core/parallel.hpp"

namespace delaymp {

namespace detail {

void euler_path(const DelayProblem& problem, const TimeGrid& grid, std::span<const double> u,
                const InitialData& init, std::span<const double> dB, std::span<double> x,
                std::size_t path_for_diagnostics) {
  const int m = grid.delay_shift();
  const int n = grid.n_steps();
  const double h = grid.step();
  // Element k of u, x and dB is node / interval k - m.
  for (int i = -m; i <= 0; ++i) x[static_cast<std::size_t>(i + m)] = init.phi(i);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i + m);
    const auto kd = static_cast<std::size_t>(i);
    const Arguments a{grid.time_of(i), x[k], x[kd], u[k], u[kd]};
    const double drift = problem.drift(a).value;
    const double diffusion = problem.diffusion(a).value;
    const double next = x[k] + drift * h + diffusion * dB[k];
    if (!std::isfinite(next)) {
      throw Error(Errc::NonFiniteState,
                  fmt::format("state left the reals on path {} at step {} (t = {})",
                              path_for_diagnostics, i, grid.time_of(i + 1)));
    }
    x[k + 1] = next;
  }
}

}  // namespace detail

StatePaths simulate(const DelayProblem& problem, const ControlProcess& control,
                    const InitialData& init, const BrownianEnsemble& ens) {
  const TimeGrid& grid = ens.grid();
  if (!(control.grid() == grid)) {
    throw Error(Errc::GridMismatch, "control and ensemble live on different grids");
  }
  if (init.delay_shift() != grid.delay_shift()) {
    throw Error(Errc::GridMismatch, "initial data and ensemble live on different grids");
  }
  if (!control.deterministic() && control.rows() != ens.n_paths()) {
    throw Error(Errc::EnsembleMismatch,
                fmt::format("control has {} paths, ensemble has {}", control.rows(), ens.n_paths()));
  }
  const std::size_t n_paths = ens.n_paths();
  PathField x(n_paths, grid.first_index(), grid.terminal_index());
  parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      detail::euler_path(problem, grid, control.values().row(p), init, ens.row(p), x.row(p), p);
    }
  });
  return {grid, std::move(x), {problem.name, control.label(), ens.seed()}};
}

double sup_moment(const StatePaths& paths, double p) {
  if (!(p >= 2.0)) throw Error(Errc::InvalidArgument, "sup_moment needs p >= 2");
  const std::size_t n_paths = paths.n_paths();
  std::vector<double> sups(n_paths);
  parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      double s = 0.0;
      for (int i = 0; i <= paths.grid.terminal_index(); ++i) {
        s = std::max(s, std::abs(paths(k, i)));
      }
      sups[k] = std::pow(s, p);
    }
  });
  return compensated_sum(sups) / static_cast<double>(n_paths);
}

std::vector<double> pathwise_cost(const DelayProblem& problem, const ControlProcess& control,
                                  const StatePaths& paths) {
  const TimeGrid& grid = paths.grid;
  if (!(control.grid() == grid)) {
    throw Error(Errc::GridMismatch, "control and state paths live on different grids");
  }
  const int m = grid.delay_shift();
  const int n = grid.n_steps();
  const double h = grid.step();
  std::vector<double> cost(paths.n_paths());
  parallel_for(paths.n_paths(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      CompensatedSum running;
      for (int i = 0; i < n; ++i) {
        const Arguments a{grid.time_of(i), paths(p, i), paths(p, i - m), control(p, i),
                          control(p, i - m)};
        running.add(problem.running_cost(a).value * h);
      }
      running.add(problem.terminal_cost(paths(p, n)).value);
      cost[p] = running.value();
    }
  });
  return cost;
}

SampleSummary evaluate_cost(const DelayProblem& problem, const ControlProcess& control,
                            const StatePaths& paths) {
  return summarize(pathwise_cost(problem, control, paths));
}

}  // namespace delaymp
