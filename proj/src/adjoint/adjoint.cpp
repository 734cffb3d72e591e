#include "delaymp/adjoint/adjoint.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "delaymp/core/error.hpp"
#include "delaymp/core/parallel.hpp"
#include "delaymp/core/stats.hpp"

namespace delaymp {

EvalPoint eval_point(const StatePaths& paths, const ControlProcess& control, std::size_t path,
                     int index) {
  const int m = paths.grid.delay_shift();
  return {paths(path, index), paths(path, index - m), control(path, index),
          control(path, index - m)};
}

CoefficientTable::CoefficientTable(const DelayProblem& problem, OptimalPair pair)
    : grid_(pair.state.grid),
      n_paths_(pair.state.n_paths()),
      width_(static_cast<std::size_t>(pair.state.grid.terminal_index() + 1)) {
  if (!(pair.control.grid() == grid_)) {
    throw Error(Errc::GridMismatch, "state and control of the pair live on different grids");
  }
  if (!pair.control.deterministic() && pair.control.rows() != n_paths_) {
    throw Error(Errc::EnsembleMismatch, "state and control of the pair have different path counts");
  }
  drift_.resize(n_paths_ * width_);
  diffusion_.resize(n_paths_ * width_);
  cost_.resize(n_paths_ * width_);
  terminal_.resize(n_paths_);
  const int n = grid_.terminal_index();
  parallel_for(n_paths_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      for (int i = 0; i <= n; ++i) {
        const EvalPoint th = eval_point(pair.state, pair.control, p, i);
        const Arguments a{grid_.time_of(i), th.x, th.x_delay, th.u, th.u_delay};
        const std::size_t k = p * width_ + static_cast<std::size_t>(i);
        drift_[k] = problem.drift(a);
        diffusion_[k] = problem.diffusion(a);
        cost_[k] = problem.running_cost(a);
      }
      terminal_[p] = problem.terminal_cost(pair.state(p, n));
    }
  });
}

namespace {

AbsdeSpec terminal_spec(const CoefficientTable& table, std::string name,
                        double (*terminal)(const TerminalJet&)) {
  const TimeGrid& grid = table.grid();
  const int n = grid.terminal_index();
  AbsdeSpec spec;
  spec.name = std::move(name);
  spec.terminal_y = PathField(table.n_paths(), n, grid.last_index());
  spec.terminal_z = PathField(1, n, grid.last_index());
  for (std::size_t p = 0; p < table.n_paths(); ++p) {
    spec.terminal_y(p, n) = terminal(table.terminal(p));
  }
  spec.anticipated_z = [](std::size_t, int, double, double) { return 0.0; };
  return spec;
}

}  // namespace

AbsdeSpec build_first_adjoint(std::shared_ptr<const CoefficientTable> table) {
  AbsdeSpec spec = terminal_spec(*table, "first-adjoint",
                                 [](const TerminalJet& h) { return h.d_x; });
  const int n = table->grid().terminal_index();
  spec.generator = [table](const DriverArgs& d) {
    const Jet& b = table->drift(d.path, d.node);
    const Jet& s = table->diffusion(d.path, d.node);
    const Jet& l = table->cost(d.path, d.node);
    return b.d_x * d.y + s.d_x * d.z + l.d_x + d.a;
  };
  spec.anticipated_y = [table, n](std::size_t path, int j, double p, double q) {
    if (j > n) return 0.0;
    return table->drift(path, j).d_xd * p + table->diffusion(path, j).d_xd * q +
           table->cost(path, j).d_xd;
  };
  return spec;
}

AbsdeSpec build_second_adjoint(std::shared_ptr<const CoefficientTable> table,
                               std::shared_ptr<const FirstAdjoint> first) {
  AbsdeSpec spec = terminal_spec(*table, "second-adjoint",
                                 [](const TerminalJet& h) { return h.d_xx; });
  const int n = table->grid().terminal_index();
  spec.generator = [table, first](const DriverArgs& d) {
    const Jet& b = table->drift(d.path, d.node);
    const Jet& s = table->diffusion(d.path, d.node);
    const Jet& l = table->cost(d.path, d.node);
    const double p = first->p(d.path, d.node);
    const double q = first->q(d.path, d.node);
    return (2.0 * b.d_x + s.d_x * s.d_x) * d.y + 2.0 * s.d_x * d.z + b.d_xx * p + s.d_xx * q +
           l.d_xx + d.a;
  };
  spec.anticipated_y = [table, first, n](std::size_t path, int j, double P, double) {
    if (j > n) return 0.0;
    const Jet& b = table->drift(path, j);
    const Jet& s = table->diffusion(path, j);
    const Jet& l = table->cost(path, j);
    return s.d_xd * s.d_xd * P + b.d_xdxd * first->p(path, j) + s.d_xdxd * first->q(path, j) +
           l.d_xdxd;
  };
  return spec;
}

double brde_integrand(const Jet& b, const Jet& sigma, const Jet& l, double p, double q, double P,
                      double Q) noexcept {
  return b.d_xd * P + sigma.d_x * sigma.d_xd * P + sigma.d_xd * Q + b.d_xxd * p +
         sigma.d_xxd * q + l.d_xxd;
}

PathField solve_brde(const TimeGrid& grid, std::size_t n_paths,
                     const std::function<double(std::size_t, int)>& integrand) {
  const int n = grid.terminal_index();
  const double h = grid.step();
  PathField K(n_paths, 0, grid.last_index());
  parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      for (int i = n - 1; i >= 0; --i) K(p, i) = K(p, i + 1) + h * integrand(p, i);
    }
  });
  return K;
}

AdjointRun solve_adjoints(const DelayProblem& problem, OptimalPair pair,
                          const BrownianEnsemble& ens, const RegressionBasis& basis) {
  auto table = std::make_shared<const CoefficientTable>(problem, pair);
  const AbsdeSpec first_spec = build_first_adjoint(table);
  AbsdeSolution first = solve_absde(first_spec, pair.state, ens, basis);
  auto pq = std::make_shared<const FirstAdjoint>(FirstAdjoint{first.y, first.z});
  const AbsdeSpec second_spec = build_second_adjoint(table, pq);
  AbsdeSolution second = solve_absde(second_spec, pair.state, ens, basis);

  const PathField& P = second.y;
  const PathField& Q = second.z;
  PathField K = solve_brde(pair.state.grid, ens.n_paths(), [&](std::size_t path, int i) {
    return brde_integrand(table->drift(path, i), table->diffusion(path, i), table->cost(path, i),
                          pq->p(path, i), pq->q(path, i), P(path, i), Q(path, i));
  });
  AdjointBundle bundle{pair.state.grid, first.y, first.z, P, Q, std::move(K)};
  return {std::move(bundle), std::move(first), std::move(second)};
}

KReport check_k_vanishes(const PathField& K, const TimeGrid& grid, double tol) {
  if (!(tol > 0.0)) throw Error(Errc::InvalidArgument, "K tolerance must be positive");
  KReport report;
  report.tol = tol;
  std::vector<double> column(K.rows());
  for (int i = 0; i <= grid.terminal_index(); ++i) {
    K.column(i, column);
    CompensatedSum acc;
    for (double v : column) acc.add(std::abs(v));
    report.sup_mean_abs_K =
        std::max(report.sup_mean_abs_K, acc.value() / static_cast<double>(column.size()));
  }
  report.pass = report.sup_mean_abs_K < tol;
  report.note = report.pass
                    ? fmt::format("K vanishes (sup mean |K| = {:.3g} < {:.3g}); the maximum "
                                  "condition is asserted under this hypothesis",
                                  report.sup_mean_abs_K, tol)
                    : fmt::format("K does not vanish (sup mean |K| = {:.3g} >= {:.3g}); the "
                                  "maximum condition is not asserted and any scan is advisory",
                                  report.sup_mean_abs_K, tol);
  return report;
}

}  // namespace delaymp
