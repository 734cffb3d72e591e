#include "delaymp/lq/lq.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "delaymp/core/error.hpp"
#include "delaymp/sdde/simulate.hpp"
#include "delaymp/variation/variation.hpp"

namespace delaymp {

void LqParams::validate() const {
  if (!(N > 0.0) || !(Nbar > 0.0)) {
    throw Error(Errc::InvalidArgument, fmt::format("LQ weights need N > 0 and Nbar > 0 (got {}, {})",
                                                   N, Nbar));
  }
}

DelayProblem lq_problem(const LqParams& params) {
  params.validate();
  DelayProblem p;
  p.name = "lq";
  const LqParams c = params;
  p.drift = [c](const Arguments& a) { return Jet{c.M * a.v + c.Mbar * a.v_delay}; };
  p.diffusion = [c](const Arguments& a) {
    return Jet{c.C * a.x_delay + c.D * a.v + c.Dbar * a.v_delay, 0.0, c.C};
  };
  p.running_cost = [c](const Arguments& a) {
    return Jet{c.N * a.v * a.v + c.Nbar * a.v_delay * a.v_delay};
  };
  p.terminal_cost = [](double x) { return TerminalJet{x, 1.0, 0.0}; };
  p.controls = params.controls;
  return p;
}

InitialData lq_initial_data(const LqParams& params, const TimeGrid& grid) {
  return InitialData::constant(grid, params.phi, params.eta);
}

ClosedFormValue closed_form_control(const LqParams& params, double tau) {
  params.validate();
  ClosedFormValue out;
  const double boundary = params.horizon - params.delay;
  out.indicator = tau < boundary - 1e-12 * params.horizon;
  const double lin = params.M + (out.indicator ? params.Mbar : 0.0);
  const double quad = params.N + (out.indicator ? params.Nbar : 0.0);
  out.value = -lin / (2.0 * quad);
  out.half_convention_value = -lin / quad;
  out.admissible = params.controls.contains(out.value);
  return out;
}

ControlProcess closed_form_process(const LqParams& params, const TimeGrid& grid) {
  ControlProcess u = ControlProcess::deterministic(
      grid, lq_initial_data(params, grid),
      [&](double t) { return closed_form_control(params, t).value; });
  u.set_label("closed-form");
  return u;
}

SampleSummary lq_cost(const LqParams& params, const ControlProcess& control,
                      const BrownianEnsemble& ens) {
  const DelayProblem problem = lq_problem(params);
  const StatePaths x = simulate(problem, control, lq_initial_data(params, ens.grid()), ens);
  return evaluate_cost(problem, control, x);
}

double lq_expected_cost(const LqParams& params, const ControlProcess& control) {
  if (!control.deterministic()) {
    throw Error(Errc::InvalidArgument, "the exact LQ cost needs a deterministic control");
  }
  const TimeGrid& grid = control.grid();
  const int m = grid.delay_shift();
  CompensatedSum acc;
  acc.add(params.phi);
  for (int i = 0; i < grid.n_steps(); ++i) {
    const double v = control(0, i);
    const double vd = control(0, i - m);
    acc.add(grid.step() *
            (params.N * v * v + params.Nbar * vd * vd + params.M * v + params.Mbar * vd));
  }
  return acc.value();
}

double lq_constant_cost(const LqParams& params, double v, double v0) {
  const double T = params.horizon;
  const double d = params.delay;
  return params.N * T * v * v + params.Nbar * (d * v0 * v0 + (T - d) * v * v) + params.phi +
         params.M * T * v + params.Mbar * (d * v0 + (T - d) * v);
}

AdjointBundle lq_exact_adjoints(const LqParams&, const TimeGrid& grid) {
  const int n = grid.terminal_index();
  AdjointBundle b{grid, PathField(1, 0, grid.last_index()), PathField(1, 0, grid.last_index()),
                  PathField(1, 0, grid.last_index()), PathField(1, 0, grid.last_index()),
                  PathField(1, 0, grid.last_index())};
  for (int i = 0; i <= n; ++i) b.p(0, i) = 1.0;
  return b;
}

std::vector<ControlProcess> default_alternatives(const LqParams& params, const TimeGrid& grid) {
  const InitialData init = lq_initial_data(params, grid);
  std::vector<ControlProcess> out;
  for (double v : {1.0, -1.5, 2.0}) {
    ControlProcess c = ControlProcess::constant(grid, init, v);
    c.set_label(fmt::format("constant {}", v));
    out.push_back(std::move(c));
  }
  const int tau = static_cast<int>(std::lround(0.2 / grid.step()));
  const int end = std::max(tau + 1, static_cast<int>(std::lround(0.3 / grid.step())));
  if (end <= grid.n_steps()) {
    out.push_back(spike(closed_form_process(params, grid), SpikeSpec{tau, end - tau, 1.0}));
  }
  return out;
}

OptimalityReport verify_optimality(const LqParams& params, const BrownianEnsemble& ens,
                                   const std::vector<ControlProcess>& alternatives) {
  const DelayProblem problem = lq_problem(params);
  const TimeGrid& grid = ens.grid();
  const InitialData init = lq_initial_data(params, grid);
  for (const auto& alt : alternatives) {
    if (!alt.admissible(params.controls)) {
      throw Error(Errc::InadmissibleAlternative,
                  fmt::format("alternative '{}' leaves U = {}", alt.label(),
                              params.controls.describe()));
    }
  }
  const ControlProcess candidate = closed_form_process(params, grid);
  const StatePaths x = simulate(problem, candidate, init, ens);
  const std::vector<double> base = pathwise_cost(problem, candidate, x);

  OptimalityReport report;
  report.candidate_cost = summarize(base);
  report.pass = true;
  for (const auto& alt : alternatives) {
    const StatePaths xa = simulate(problem, alt, init, ens);
    std::vector<double> cost = pathwise_cost(problem, alt, xa);
    AlternativeResult r;
    r.label = alt.label();
    r.cost = summarize(cost);
    for (std::size_t p = 0; p < cost.size(); ++p) cost[p] -= base[p];
    r.gap = summarize(cost);
    if (alt.deterministic()) {
      r.analytic_gap = lq_expected_cost(params, alt) - lq_expected_cost(params, candidate);
    }
    r.pass = r.gap.mean >= -3.0 * r.gap.std_error;
    report.pass = report.pass && r.pass;
    report.alternatives.push_back(std::move(r));
  }
  return report;
}

}  // namespace delaymp
