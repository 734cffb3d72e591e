#include "delaymp/variation/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "delaymp/core/error.hpp"
#include "delaymp/core/parallel.hpp"
#include "delaymp/core/philox.hpp"

namespace delaymp {

void validate_spike(const TimeGrid& grid, const SpikeSpec& s, const ControlSet& set) {
  if (s.tau_index < 0 || s.eps_steps < 0 || s.tau_index + s.eps_steps > grid.n_steps()) {
    throw Error(Errc::SpikeOutOfRange,
                fmt::format("spike [{}, {}] does not fit in [0, {}]", grid.time_of(s.tau_index),
                            grid.time_of(s.tau_index + s.eps_steps), grid.horizon()));
  }
  if (const double* v = std::get_if<double>(&s.replacement)) {
    if (!set.contains(*v)) {
      throw Error(Errc::OutsideControlSet,
                  fmt::format("spike value {} is outside U = {}", *v, set.describe()));
    }
    return;
  }
  const auto& repl = std::get<ControlProcess>(s.replacement);
  for (std::size_t p = 0; p < repl.rows(); ++p) {
    for (int i = s.tau_index; i < s.tau_index + s.eps_steps; ++i) {
      if (!set.contains(repl(p, i))) {
        throw Error(Errc::OutsideControlSet,
                    fmt::format("spike value {} at t = {} is outside U = {}", repl(p, i),
                                grid.time_of(i), set.describe()));
      }
    }
  }
}

ControlProcess spike(const ControlProcess& base, const SpikeSpec& s) {
  const TimeGrid& grid = base.grid();
  if (s.tau_index < 0 || s.eps_steps < 0 || s.tau_index + s.eps_steps > grid.n_steps()) {
    throw Error(Errc::SpikeOutOfRange,
                fmt::format("spike [{}, {}] does not fit in [0, {}]", grid.time_of(s.tau_index),
                            grid.time_of(s.tau_index + s.eps_steps), grid.horizon()));
  }
  const ControlProcess* repl = std::get_if<ControlProcess>(&s.replacement);
  if (repl && !(repl->grid() == grid)) {
    throw Error(Errc::GridMismatch, "spike replacement lives on another grid");
  }
  std::size_t rows = base.rows();
  if (repl && repl->rows() != rows) {
    if (rows != 1 && repl->rows() != 1) {
      throw Error(Errc::EnsembleMismatch, "spike replacement and base have different path counts");
    }
    rows = std::max(rows, repl->rows());
  }
  PathField values = rows == base.rows() ? base.values() : base.values().broadcast(rows);
  for (std::size_t p = 0; p < rows; ++p) {
    for (int i = s.tau_index; i < s.tau_index + s.eps_steps; ++i) {
      values(p, i) = repl ? (*repl)(p, i) : std::get<double>(s.replacement);
    }
  }
  ControlProcess out(grid, std::move(values), base.label());
  out.set_label(fmt::format("{}+spike[{:g},{:g})", base.label(), grid.time_of(s.tau_index),
                            grid.time_of(s.tau_index + s.eps_steps)));
  return out;
}

namespace detail {

void variation_path(const DelayProblem& problem, const TimeGrid& grid, std::span<const double> x,
                    std::span<const double> u, std::span<const double> u_eps,
                    std::span<const double> dB, std::span<double> x1, std::span<double> x2) {
  const int m = grid.delay_shift();
  const int n = grid.n_steps();
  const double h = grid.step();
  std::fill(x1.begin(), x1.end(), 0.0);
  std::fill(x2.begin(), x2.end(), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i + m);
    const auto kd = static_cast<std::size_t>(i);
    const Arguments theta{grid.time_of(i), x[k], x[kd], u[k], u[kd]};
    const Jet b = problem.drift(theta);
    const Jet s = problem.diffusion(theta);
    double db = 0.0, ds = 0.0, ds_x = 0.0, ds_xd = 0.0;
    if (u_eps[k] != u[k] || u_eps[kd] != u[kd]) {
      const Arguments pert{theta.t, theta.x, theta.x_delay, u_eps[k], u_eps[kd]};
      const Jet bp = problem.drift(pert);
      const Jet sp = problem.diffusion(pert);
      db = bp.value - b.value;
      ds = sp.value - s.value;
      ds_x = sp.d_x - s.d_x;
      ds_xd = sp.d_xd - s.d_xd;
    }
    const double y1 = x1[k], y1d = x1[kd], y2 = x2[k], y2d = x2[kd];
    const double sq = 0.5 * y1 * y1, sqd = 0.5 * y1d * y1d, cross = y1 * y1d;
    x1[k + 1] = y1 + (b.d_x * y1 + b.d_xd * y1d + db) * h +
                (s.d_x * y1 + s.d_xd * y1d + ds) * dB[k];
    x2[k + 1] = y2 +
                (b.d_x * y2 + b.d_xd * y2d + b.d_xx * sq + b.d_xdxd * sqd + b.d_xxd * cross) * h +
                (s.d_x * y2 + s.d_xd * y2d + s.d_xx * sq + s.d_xdxd * sqd + s.d_xxd * cross +
                 ds_x * y1 + ds_xd * y1d) *
                    dB[k];
  }
}

}  // namespace detail

VariationPaths simulate_variational(const DelayProblem& problem, OptimalPair pair,
                                    const SpikeSpec& s, const BrownianEnsemble& ens) {
  const TimeGrid& grid = pair.state.grid;
  if (!(ens.grid() == grid) || !(pair.control.grid() == grid)) {
    throw Error(Errc::GridMismatch, "pair and ensemble live on different grids");
  }
  if (pair.state.n_paths() != ens.n_paths()) {
    throw Error(Errc::EnsembleMismatch, "pair and ensemble have different path counts");
  }
  const ControlProcess perturbed = spike(pair.control, s);
  const std::size_t n_paths = ens.n_paths();
  VariationPaths v{PathField(n_paths, grid.first_index(), grid.terminal_index()),
                   PathField(n_paths, grid.first_index(), grid.terminal_index())};
  parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      detail::variation_path(problem, grid, pair.state.x.row(p), pair.control.values().row(p),
                             perturbed.values().row(p), ens.row(p), v.x1.row(p), v.x2.row(p));
    }
  });
  return v;
}

PathField variation_remainder(const StatePaths& perturbed, const StatePaths& base,
                              const VariationPaths& v) {
  PathField out = perturbed.x;
  for (std::size_t p = 0; p < out.rows(); ++p) {
    for (int i = out.first_index(); i <= out.last_index(); ++i) {
      out(p, i) = perturbed(p, i) - base(p, i) - v.x1(p, i);
    }
  }
  return out;
}

PathField second_variation_remainder(const StatePaths& perturbed, const StatePaths& base,
                                     const VariationPaths& v) {
  PathField out = variation_remainder(perturbed, base, v);
  for (std::size_t p = 0; p < out.rows(); ++p) {
    for (int i = out.first_index(); i <= out.last_index(); ++i) out(p, i) -= v.x2(p, i);
  }
  return out;
}

OrderStudy order_study(const DelayProblem& problem, const ControlProcess& base,
                       const InitialData& init, int tau_index,
                       const std::variant<double, ControlProcess>& replacement,
                       const std::vector<int>& eps_steps, const OrderStudyOptions& options) {
  const TimeGrid& grid = base.grid();
  if (eps_steps.size() < 3) {
    throw Error(Errc::InsufficientEpsilons,
                fmt::format("order study needs at least 3 epsilons, got {}", eps_steps.size()));
  }
  const auto [lo, hi] = std::minmax_element(eps_steps.begin(), eps_steps.end());
  if (*lo <= 0 || *hi < 4 * *lo) {
    throw Error(Errc::InsufficientEpsilons,
                "epsilons must be positive and span at least a factor of 4");
  }
  if (!base.deterministic() && base.rows() != options.n_paths) {
    throw Error(Errc::EnsembleMismatch, "base control has the wrong path count");
  }

  OrderStudy study;
  const int m = grid.delay_shift();
  const auto width = static_cast<std::size_t>(grid.terminal_index() + m + 1);
  const std::size_t n_paths = options.n_paths;
  for (std::size_t k = 0; k < eps_steps.size(); ++k) {
    const SpikeSpec s{tau_index, eps_steps[k], replacement};
    validate_spike(grid, s, problem.controls);
    const ControlProcess perturbed = spike(base, s);
    const std::uint64_t seed = derive_seed(options.seed, k);

    std::vector<std::array<double, 5>> per_path(n_paths);
    parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
      std::vector<double> dB(static_cast<std::size_t>(grid.last_index() - grid.first_index()));
      std::vector<double> x(width), xe(width), x1(width), x2(width);
      for (std::size_t p = begin; p < end; ++p) {
        BrownianEnsemble::fill_path(grid, seed, p, dB);
        detail::euler_path(problem, grid, base.values().row(p), init, dB, x, p);
        detail::euler_path(problem, grid, perturbed.values().row(p), init, dB, xe, p);
        detail::variation_path(problem, grid, x, base.values().row(p), perturbed.values().row(p),
                               dB, x1, x2);
        std::array<double, 5> sup{};
        for (std::size_t j = static_cast<std::size_t>(m); j < width; ++j) {
          const double d = xe[j] - x[j];
          const double r1 = d - x1[j];
          const double r2 = r1 - x2[j];
          sup[0] = std::max(sup[0], d * d);
          sup[1] = std::max(sup[1], x1[j] * x1[j]);
          sup[2] = std::max(sup[2], std::abs(x2[j]));
          sup[3] = std::max(sup[3], r1 * r1);
          sup[4] = std::max(sup[4], std::abs(r2));
        }
        per_path[p] = sup;
      }
    });

    std::array<CompensatedSum, 5> acc;
    for (const auto& sup : per_path) {
      for (std::size_t c = 0; c < 5; ++c) acc[c].add(sup[c]);
    }
    const auto mean = [&](std::size_t c) { return acc[c].value() / static_cast<double>(n_paths); };
    study.rows.push_back({eps_steps[k], eps_steps[k] * grid.step(), seed, mean(0), mean(1),
                          mean(2), mean(3), mean(4)});
  }

  std::vector<double> log_eps;
  for (const auto& r : study.rows) log_eps.push_back(std::log(r.eps));
  for (std::size_t c = 0; c < 5; ++c) {
    std::vector<double> log_m;
    bool positive = true;
    for (const auto& r : study.rows) {
      const double v = std::array{r.m1, r.m2, r.m3, r.m4, r.m5}[c];
      positive = positive && v > 0.0;
      log_m.push_back(std::log(v));
    }
    study.slopes[c] = positive ? ols_slope(log_eps, log_m)
                               : std::numeric_limits<double>::quiet_NaN();
  }
  return study;
}

VariationalGap variational_gap(const DelayProblem& problem, OptimalPair pair,
                               const InitialData& init, const SpikeSpec& s,
                               const AdjointBundle& adjoints, const BrownianEnsemble& ens) {
  const TimeGrid& grid = pair.state.grid;
  if (!(adjoints.grid == grid)) {
    throw Error(Errc::GridMismatch, "adjoints and pair live on different grids");
  }
  const ControlProcess perturbed = spike(pair.control, s);
  const StatePaths xe = simulate(problem, perturbed, init, ens);
  const VariationPaths v = simulate_variational(problem, pair, s, ens);
  const std::vector<double> j_eps = pathwise_cost(problem, perturbed, xe);
  const std::vector<double> j_base = pathwise_cost(problem, pair.control, pair.state);

  const int m = grid.delay_shift();
  const int n = grid.terminal_index();
  const double h = grid.step();
  const std::size_t n_paths = ens.n_paths();
  std::vector<double> lhs16(n_paths), lhs25(n_paths), gap(n_paths);
  parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      CompensatedSum a16, a25;
      for (int i = 0; i < n; ++i) {
        const EvalPoint th = eval_point(pair.state, pair.control, p, i);
        const Arguments theta{grid.time_of(i), th.x, th.x_delay, th.u, th.u_delay};
        const Arguments pert{theta.t, th.x, th.x_delay, perturbed(p, i), perturbed(p, i - m)};
        const Jet l = problem.running_cost(theta);
        double dl = 0.0, db = 0.0, ds = 0.0;
        if (pert.v != theta.v || pert.v_delay != theta.v_delay) {
          dl = problem.running_cost(pert).value - l.value;
          db = problem.drift(pert).value - problem.drift(theta).value;
          ds = problem.diffusion(pert).value - problem.diffusion(theta).value;
        }
        const double y1 = v.x1(p, i), y1d = v.x1(p, i - m);
        const double y2 = v.x2(p, i), y2d = v.x2(p, i - m);
        a16.add(h * (dl + l.d_x * (y1 + y2) + l.d_xd * (y1d + y2d) + 0.5 * l.d_xx * y1 * y1 +
                     0.5 * l.d_xdxd * y1d * y1d + l.d_xxd * y1 * y1d));
        a25.add(h * (dl + adjoints.p(p, i) * db + adjoints.q(p, i) * ds +
                     0.5 * adjoints.P(p, i) * ds * ds));
      }
      const TerminalJet term = problem.terminal_cost(pair.state(p, n));
      const double y1n = v.x1(p, n);
      a16.add(term.d_x * (y1n + v.x2(p, n)) + 0.5 * term.d_xx * y1n * y1n);
      lhs16[p] = a16.value();
      lhs25[p] = a25.value();
      gap[p] = j_eps[p] - j_base[p];
    }
  });
  return {summarize(lhs16), summarize(lhs25), summarize(gap)};
}

CrossTermReport cross_term_identity(const DelayProblem& problem, OptimalPair pair,
                                    const VariationPaths& variation, const AdjointBundle& adjoints,
                                    const KReport& k_report) {
  const TimeGrid& grid = pair.state.grid;
  if (!(adjoints.grid == grid)) {
    throw Error(Errc::GridMismatch, "adjoints and pair live on different grids");
  }
  const int m = grid.delay_shift();
  const int n = grid.terminal_index();
  const double h = grid.step();
  const std::size_t n_paths = pair.state.n_paths();
  std::vector<double> values(n_paths);
  std::vector<char> zero(n_paths, 1);
  parallel_for(n_paths, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      CompensatedSum acc;
      for (int i = 0; i < n; ++i) {
        const EvalPoint th = eval_point(pair.state, pair.control, p, i);
        const Arguments a{grid.time_of(i), th.x, th.x_delay, th.u, th.u_delay};
        const double g = brde_integrand(problem.drift(a), problem.diffusion(a),
                                        problem.running_cost(a), adjoints.p(p, i),
                                        adjoints.q(p, i), adjoints.P(p, i), adjoints.Q(p, i));
        if (g != 0.0) zero[p] = 0;
        acc.add(h * variation.x1(p, i) * variation.x1(p, i - m) * g);
      }
      values[p] = acc.value();
    }
  });
  CrossTermReport report;
  report.estimate = summarize(values);
  report.integrand_identically_zero = std::all_of(zero.begin(), zero.end(), [](char c) { return c; });
  report.asserted = k_report.pass;
  report.consistent = std::abs(report.estimate.mean) <= 3.0 * report.estimate.std_error;
  report.label = report.asserted ? "asserted" : "not asserted";
  return report;
}

}  // namespace delaymp
