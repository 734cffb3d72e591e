#include "delaymp/mp/mp.hpp"

#include <algorithm>
#include <limits>

#include <fmt/core.h>

#include "delaymp/core/error.hpp"
#include "delaymp/core/parallel.hpp"
#include "delaymp/core/stats.hpp"

namespace delaymp {

double hamiltonian(const DelayProblem& problem, const HamiltonianInput& in) {
  const Arguments at{in.tau, in.x, in.x_delay, in.v, in.v_delay};
  const Arguments anchor{in.tau, in.anchor.x, in.anchor.x_delay, in.anchor.u, in.anchor.u_delay};
  const double sigma = problem.diffusion(at).value;
  const double sigma_anchor = problem.diffusion(anchor).value;
  return problem.running_cost(at).value + in.p * problem.drift(at).value + in.q * sigma +
         0.5 * in.P * sigma * sigma - in.P * sigma_anchor * sigma;
}

namespace {

double h_at(const DelayProblem& problem, const AdjointBundle& adj, const EvalPoint& theta,
            double t, std::size_t path, int index, double v, double v_delay) {
  return hamiltonian(problem, {t, theta.x, theta.x_delay, v, v_delay, adj.p(path, index),
                               adj.q(path, index), adj.P(path, index), theta});
}

}  // namespace

MarginEstimate mp_margin(const DelayProblem& problem, OptimalPair pair,
                         const AdjointBundle& adjoints, int tau_index, double v,
                         const RegressionBasis& basis) {
  const TimeGrid& grid = pair.state.grid;
  if (!(adjoints.grid == grid) || !(pair.control.grid() == grid)) {
    throw Error(Errc::GridMismatch, "pair and adjoints live on different grids");
  }
  if (tau_index < 0 || tau_index > grid.terminal_index()) {
    throw Error(Errc::InvalidArgument, fmt::format("tau index {} is outside [0, T]", tau_index));
  }
  const int m = grid.delay_shift();
  const int i = tau_index;
  const int j = i + m;
  const bool anticipated = grid.before_last_delay(i);
  const double tau = grid.time_of(i);
  const std::size_t n_paths = pair.state.n_paths();

  std::vector<double> now(n_paths), ahead(n_paths, 0.0);
  parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const EvalPoint th = eval_point(pair.state, pair.control, p, i);
      now[p] = h_at(problem, adjoints, th, tau, p, i, v, th.u_delay) -
               h_at(problem, adjoints, th, tau, p, i, th.u, th.u_delay);
      if (anticipated) {
        const EvalPoint tj = eval_point(pair.state, pair.control, p, j);
        const double tj_time = grid.time_of(j);
        ahead[p] = h_at(problem, adjoints, tj, tj_time, p, j, tj.u, v) -
                   h_at(problem, adjoints, tj, tj_time, p, j, tj.u, tj.u_delay);
      }
    }
  });
  if (anticipated) {
    const bool constant = std::all_of(ahead.begin(), ahead.end(),
                                      [&](double a) { return a == ahead.front(); });
    if (!constant) {
      std::vector<double> xs(n_paths), xds(n_paths);
      pair.state.x.column(i, xs);
      pair.state.x.column(i - m, xds);
      NodeRegression(xs, xds, basis).project(std::vector<double>(ahead), ahead);
    }
    for (std::size_t p = 0; p < n_paths; ++p) now[p] += ahead[p];
  }
  const SampleSummary s = summarize(now);
  return {s.mean, s.std_error};
}

MpReport scan_max_condition(const DelayProblem& problem, OptimalPair pair,
                            const AdjointBundle& adjoints, const std::vector<double>& v_grid,
                            const std::vector<int>& tau_indices, const MpScanOptions& options) {
  if (v_grid.empty() || tau_indices.empty()) {
    throw Error(Errc::EmptyGrid, "maximum-condition scan needs non-empty v and tau grids");
  }
  for (double v : v_grid) {
    if (!problem.controls.contains(v)) {
      throw Error(Errc::OutsideControlSet,
                  fmt::format("scan value {} is outside U = {}", v, problem.controls.describe()));
    }
  }
  std::vector<double> values = v_grid;
  if (options.include_boundary) {
    for (double b : problem.controls.boundary_points()) values.push_back(b);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const TimeGrid& grid = pair.state.grid;
  MpReport report;
  report.boundary_index = grid.n_steps() - grid.delay_shift();
  report.min_margin = std::numeric_limits<double>::infinity();
  for (int tau : tau_indices) {
    for (double v : values) {
      const MarginEstimate e = mp_margin(problem, pair, adjoints, tau, v, options.basis);
      MpCell cell{tau, grid.time_of(tau), v, e.margin, e.std_error, 0.0, true};
      cell.tol = options.tol ? *options.tol : std::max(options.min_tol, 3.0 * e.std_error);
      cell.pass = cell.margin >= -cell.tol;
      if (!cell.pass) report.violations.push_back(report.cells.size());
      report.min_margin = std::min(report.min_margin, cell.margin);
      report.cells.push_back(cell);
    }
  }
  report.pass = report.violations.empty();
  return report;
}

}  // namespace delaymp
