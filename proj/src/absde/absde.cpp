#include "delaymp/absde/absde.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "delaymp/core/error.hpp"
#include "delaymp/core/parallel.hpp"
#include "delaymp/core/philox.hpp"

namespace delaymp {

namespace {

void check_inputs(const AbsdeSpec& spec, const StatePaths& forward, const BrownianEnsemble& ens) {
  const TimeGrid& grid = forward.grid;
  if (!(ens.grid() == grid)) {
    throw Error(Errc::GridMismatch, "forward paths and ensemble live on different grids");
  }
  if (forward.n_paths() != ens.n_paths()) {
    throw Error(Errc::EnsembleMismatch, fmt::format("forward has {} paths, ensemble has {}",
                                                    forward.n_paths(), ens.n_paths()));
  }
  if (!spec.generator) throw Error(Errc::InvalidArgument, "ABSDE generator is empty");
  const int n = grid.terminal_index();
  for (const PathField* f : {&spec.terminal_y, &spec.terminal_z}) {
    if (!f->covers(n, grid.last_index())) {
      throw Error(Errc::GridMismatch, "terminal data must cover the nodes of [T, T + delta]");
    }
    if (!f->deterministic() && f->rows() != ens.n_paths()) {
      throw Error(Errc::EnsembleMismatch, "terminal data has the wrong path count");
    }
  }
}

NodeRegression regression_at(const StatePaths& forward, int i, const RegressionBasis& basis,
                             std::vector<double>& xs, std::vector<double>& xds) {
  const int m = forward.grid.delay_shift();
  forward.x.column(i, xs);
  forward.x.column(i - m, xds);
  return NodeRegression(xs, xds, basis);
}

}  // namespace

AbsdeSolution solve_absde(const AbsdeSpec& spec, const StatePaths& forward,
                          const BrownianEnsemble& ens, const RegressionBasis& basis) {
  check_inputs(spec, forward, ens);
  const TimeGrid& grid = forward.grid;
  const int m = grid.delay_shift();
  const int n = grid.terminal_index();
  const double h = grid.step();
  const std::size_t n_paths = ens.n_paths();

  AbsdeSolution sol{grid,
                    PathField(n_paths, 0, grid.last_index()),
                    PathField(n_paths, 0, grid.last_index()),
                    PathField(n_paths, 0, grid.last_index()),
                    PathField(n_paths, 0, grid.last_index()),
                    {}};
  sol.metadata.degree = basis.degree;
  sol.metadata.basis_size = basis.size();
  sol.metadata.condition.assign(static_cast<std::size_t>(n), 0.0);
  sol.metadata.ridge_applied.assign(static_cast<std::size_t>(n), false);
  sol.metadata.active_functions.assign(static_cast<std::size_t>(n), 0);

  for (std::size_t p = 0; p < n_paths; ++p) {
    for (int j = n; j <= grid.last_index(); ++j) {
      sol.y(p, j) = spec.terminal_y(p, j);
      sol.z(p, j) = spec.terminal_z(p, j);
    }
  }

  std::vector<double> xs(n_paths), xds(n_paths), target(n_paths), y_hat(n_paths), z(n_paths),
      a(n_paths), b(n_paths), y(n_paths);
  for (int i = n - 1; i >= 0; --i) {
    const NodeRegression reg = regression_at(forward, i, basis, xs, xds);
    const auto slot = static_cast<std::size_t>(i);
    sol.metadata.condition[slot] = reg.condition();
    sol.metadata.ridge_applied[slot] = reg.ridge_applied();
    sol.metadata.active_functions[slot] = reg.monomials().size();

    sol.y.column(i + 1, target);
    reg.project(target, y_hat);

    parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
      for (std::size_t p = begin; p < end; ++p) {
        target[p] = (sol.y(p, i + 1) - y_hat[p]) * ens.increment(p, i) / h;
      }
    });
    reg.project(target, z);

    const int j = i + m;
    parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
      for (std::size_t p = begin; p < end; ++p) {
        const double yj = sol.y(p, j);
        target[p] = spec.anticipated_y ? spec.anticipated_y(p, j, yj, sol.z(p, j)) : yj;
      }
    });
    reg.project(target, a);
    parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
      for (std::size_t p = begin; p < end; ++p) {
        const double zj = sol.z(p, j);
        target[p] = spec.anticipated_z ? spec.anticipated_z(p, j, sol.y(p, j), zj) : zj;
      }
    });
    reg.project(target, b);

    const double t = grid.time_of(i);
    parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
      for (std::size_t p = begin; p < end; ++p) {
        const double f = spec.generator({t, i, p, y_hat[p], z[p], a[p], b[p]});
        target[p] = sol.y(p, i + 1) + h * f;
      }
    });
    reg.project(target, y);

    for (std::size_t p = 0; p < n_paths; ++p) {
      if (!std::isfinite(y[p]) || !std::isfinite(z[p])) {
        throw Error(Errc::NonFiniteState,
                    fmt::format("ABSDE '{}' left the reals on path {} at node {}", spec.name, p, i));
      }
      sol.y(p, i) = y[p];
      sol.z(p, i) = z[p];
      sol.a(p, i) = a[p];
      sol.b(p, i) = b[p];
    }
  }
  return sol;
}

ResidualReport martingale_residual(const AbsdeSolution& sol, const AbsdeSpec& spec,
                                   const StatePaths& forward, const BrownianEnsemble& ens,
                                   const RegressionBasis& basis) {
  check_inputs(spec, forward, ens);
  const TimeGrid& grid = sol.grid;
  const int n = grid.terminal_index();
  const double h = grid.step();
  const std::size_t n_paths = ens.n_paths();
  ResidualReport report;
  report.per_node.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> xs(n_paths), xds(n_paths), r(n_paths), fitted(n_paths);
  for (int i = 0; i < n; ++i) {
    const NodeRegression reg = regression_at(forward, i, basis, xs, xds);
    const double t = grid.time_of(i);
    parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
      for (std::size_t p = begin; p < end; ++p) {
        const double f =
            spec.generator({t, i, p, sol.y(p, i), sol.z(p, i), sol.a(p, i), sol.b(p, i)});
        r[p] = sol.y(p, i + 1) + f * h - sol.z(p, i) * ens.increment(p, i) - sol.y(p, i);
      }
    });
    reg.project(r, fitted);
    CompensatedSum acc;
    for (double v : fitted) acc.add(v * v);
    report.per_node[static_cast<std::size_t>(i)] = acc.value() / static_cast<double>(n_paths);
  }
  report.mean = n > 0 ? compensated_sum(report.per_node) / n : 0.0;
  return report;
}

double generator_slope_bound(const AbsdeSpec& spec, const TimeGrid& grid, int samples,
                             double range, std::uint64_t seed) {
  if (!spec.generator) throw Error(Errc::InvalidArgument, "ABSDE generator is empty");
  const Philox4x32 gen({static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  const double step = 1e-6;
  double bound = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto r = gen({static_cast<std::uint32_t>(s), 0u, 0u, 0u});
    auto coord = [&](int k) {
      return range * (2.0 * to_open_unit((std::uint64_t{r[k]} << 32) | r[(k + 1) % 4]) - 1.0);
    };
    const int node = s % std::max(1, grid.n_steps());
    DriverArgs base{grid.time_of(node), node, 0, coord(0), coord(1), coord(2), coord(3)};
    for (double DriverArgs::*field : {&DriverArgs::y, &DriverArgs::z, &DriverArgs::a,
                                      &DriverArgs::b}) {
      DriverArgs up = base, down = base;
      up.*field += step;
      down.*field -= step;
      bound = std::max(bound, std::abs(spec.generator(up) - spec.generator(down)) / (2.0 * step));
    }
  }
  return bound;
}

}  // namespace delaymp
