#include <gtest/gtest.h>

#include <cmath>

#include "delaymp/adjoint/adjoint.hpp"
#include "delaymp/lq/lq.hpp"
#include "delaymp/sdde/test_problems.hpp"

using namespace delaymp;

namespace {

struct Run {
  TimeGrid grid;
  BrownianEnsemble ens;
  InitialData init;
  ControlProcess control;
  StatePaths state;
  AdjointRun adjoints;
};

std::unique_ptr<Run> run(const DelayProblem& problem, const TimeGrid& g, std::size_t n_paths,
                         double phi, double eta, double u, std::uint64_t seed = 21) {
  BrownianEnsemble ens = sample_brownian(g, n_paths, seed);
  InitialData init = InitialData::constant(g, phi, eta);
  ControlProcess control = ControlProcess::constant(g, init, u);
  StatePaths state = simulate(problem, control, init, ens);
  AdjointRun adj = solve_adjoints(problem, OptimalPair{state, control}, ens);
  return std::make_unique<Run>(Run{g, std::move(ens), std::move(init), std::move(control),
                                   std::move(state), std::move(adj)});
}

}  // namespace

TEST(FirstAdjoint, UnitRunningCostGivesRemainingTime) {
  DelayProblem pr = frozen_problem();
  pr.running_cost = [](const Arguments& a) { return Jet{a.x, 1.0}; };
  const TimeGrid g = make_grid(1.0, 0.25, 8);
  const auto r = run(pr, g, 200, 0.7, 0.0, 0.0);
  for (int i = 0; i <= g.terminal_index(); ++i) {
    const double t = g.time_of(i);
    for (std::size_t p = 0; p < 200; p += 37) {
      ASSERT_NEAR(r->adjoints.bundle.p(p, i), 1.0 - t, 1e-12);
      ASSERT_NEAR(r->adjoints.bundle.q(p, i), 0.0, 1e-12);
    }
  }
}

TEST(SecondAdjoint, GeometricDiffusionWithoutDelay) {
  constexpr double s = 0.6;
  DelayProblem pr = frozen_problem();
  pr.diffusion = [](const Arguments& a) { return Jet{s * a.x, s}; };
  pr.terminal_cost = [](double x) { return TerminalJet{0.5 * x * x, x, 1.0}; };
  const TimeGrid g = make_grid(1.0, 0.5, 64);
  const auto r = run(pr, g, 4000, 1.0, 0.0, 0.0);
  const double h = g.step();
  for (int i = 0; i <= g.terminal_index(); ++i) {
    const double discrete = std::pow(1.0 + h * s * s, g.terminal_index() - i);
    const double exact = std::exp(s * s * (1.0 - g.time_of(i)));
    EXPECT_NEAR(r->adjoints.bundle.P(0, i), discrete, 1e-10);
    EXPECT_NEAR(r->adjoints.bundle.P(0, i), exact, 2e-3);
    EXPECT_NEAR(r->adjoints.bundle.Q(0, i), 0.0, 1e-10);
  }
}

TEST(SecondAdjoint, ConstantTerminalCurvature) {
  DelayProblem pr = frozen_problem();
  pr.terminal_cost = [](double x) { return TerminalJet{1.5 * x * x, 3.0 * x, 3.0}; };
  const TimeGrid g = make_grid(1.0, 0.5, 8);
  const auto r = run(pr, g, 100, 0.2, 0.0, 0.0);
  for (int i = 0; i <= g.terminal_index(); ++i) {
    ASSERT_NEAR(r->adjoints.bundle.P(5, i), 3.0, 1e-12);
    ASSERT_NEAR(r->adjoints.bundle.p(5, i), 0.6, 1e-12);
  }
}

TEST(Brde, QuadratureOfSimpleIntegrands) {
  const TimeGrid g = make_grid(1.0, 0.5, 10);
  const double h = g.step();
  const PathField one = solve_brde(g, 3, [](std::size_t, int) { return 1.0; });
  const PathField lin = solve_brde(g, 3, [&](std::size_t, int i) { return g.time_of(i); });
  const int n = g.terminal_index();
  for (int i = 0; i <= g.last_index(); ++i) {
    const double t = g.time_of(i);
    if (i >= n) {
      EXPECT_EQ(one(1, i), 0.0);
      EXPECT_EQ(lin(1, i), 0.0);
      continue;
    }
    EXPECT_NEAR(one(1, i), 1.0 - t, 1e-12);
    const double left_sum = h * h * (0.5 * n * (n - 1) - 0.5 * i * (i - 1));
    EXPECT_NEAR(lin(1, i), left_sum, 1e-12);
    EXPECT_NEAR(lin(1, i), 0.5 * (1.0 - t * t), 0.5 * h * (1.0 - t) + 1e-12);
  }
}

TEST(Brde, IntegrandCombinesAllTerms) {
  const Jet b{0.0, 0.0, 2.0, 0.0, 0.0, 5.0};
  const Jet sigma{0.0, 3.0, 7.0, 0.0, 0.0, 11.0};
  const Jet l{0.0, 0.0, 0.0, 0.0, 0.0, 13.0};
  const double p = 0.5, q = 0.25, P = 2.0, Q = -1.0;
  const double expected = 2.0 * P + 3.0 * 7.0 * P + 7.0 * Q + 5.0 * p + 11.0 * q + 13.0;
  EXPECT_DOUBLE_EQ(brde_integrand(b, sigma, l, p, q, P, Q), expected);
}

TEST(KGate, FailsOnNonvanishingK) {
  const TimeGrid g = make_grid(1.0, 0.5, 10);
  const PathField one = solve_brde(g, 4, [](std::size_t, int) { return 1.0; });
  const KReport bad = check_k_vanishes(one, g, 1e-3);
  EXPECT_FALSE(bad.pass);
  EXPECT_NEAR(bad.sup_mean_abs_K, 1.0, 1e-12);
  EXPECT_NE(bad.note.find("not asserted"), std::string::npos);

  const PathField zero = solve_brde(g, 4, [](std::size_t, int) { return 0.0; });
  const KReport good = check_k_vanishes(zero, g, 1e-3);
  EXPECT_TRUE(good.pass);
  EXPECT_EQ(good.note.find("not asserted"), std::string::npos);
}

TEST(KGate, SmoothProblemHasNonzeroK) {
  const TimeGrid g = make_grid(1.0, 0.5, 8);
  const auto r = run(smooth_test_problem(), g, 2000, 1.0, -1.0, -1.0);
  EXPECT_FALSE(check_k_vanishes(r->adjoints.bundle.K, g, 1e-3).pass);
}

TEST(LqAdjoints, SolvedMatchExact) {
  const LqParams params;
  const TimeGrid g = make_grid(params.horizon, params.delay, 8);
  BrownianEnsemble ens = sample_brownian(g, 2000, 5);
  const InitialData init = lq_initial_data(params, g);
  const ControlProcess u = closed_form_process(params, g);
  const DelayProblem pr = lq_problem(params);
  const StatePaths x = simulate(pr, u, init, ens);
  const AdjointRun solved = solve_adjoints(pr, OptimalPair{x, u}, ens);
  const AdjointBundle exact = lq_exact_adjoints(params, g);
  for (int i = 0; i <= g.last_index(); ++i) {
    for (std::size_t p = 0; p < 2000; p += 199) {
      ASSERT_NEAR(solved.bundle.p(p, i), exact.p(0, i), 1e-12);
      ASSERT_NEAR(solved.bundle.q(p, i), exact.q(0, i), 1e-12);
      ASSERT_NEAR(solved.bundle.P(p, i), exact.P(0, i), 1e-12);
      ASSERT_NEAR(solved.bundle.Q(p, i), exact.Q(0, i), 1e-12);
      ASSERT_NEAR(solved.bundle.K(p, i), exact.K(0, i), 1e-12);
    }
  }
  EXPECT_TRUE(check_k_vanishes(solved.bundle.K, g, 1e-3).pass);
}

TEST(Terminals, SetExactlyAndZeroBeyondHorizon) {
  const TimeGrid g = make_grid(1.0, 0.5, 8);
  const DelayProblem pr = smooth_test_problem();
  const auto r = run(pr, g, 500, 1.0, -1.0, 1.0);
  const int n = g.terminal_index();
  for (std::size_t p = 0; p < 500; ++p) {
    const TerminalJet h = pr.terminal_cost(r->state(p, n));
    ASSERT_EQ(r->adjoints.bundle.p(p, n), h.d_x);
    ASSERT_EQ(r->adjoints.bundle.P(p, n), h.d_xx);
    for (int j = n + 1; j <= g.last_index(); ++j) {
      ASSERT_EQ(r->adjoints.bundle.p(p, j), 0.0);
      ASSERT_EQ(r->adjoints.bundle.q(p, j), 0.0);
      ASSERT_EQ(r->adjoints.bundle.P(p, j), 0.0);
      ASSERT_EQ(r->adjoints.bundle.Q(p, j), 0.0);
      ASSERT_EQ(r->adjoints.bundle.K(p, j), 0.0);
    }
  }
}

TEST(CoefficientTable, EvaluatesAtDelayedArguments) {
  const TimeGrid g = make_grid(1.0, 0.5, 4);
  const DelayProblem pr = smooth_test_problem();
  BrownianEnsemble ens = sample_brownian(g, 10, 3);
  const InitialData init = InitialData::constant(g, 1.0, -1.0);
  const ControlProcess u = ControlProcess::constant(g, init, 1.0);
  const StatePaths x = simulate(pr, u, init, ens);
  const CoefficientTable table(pr, OptimalPair{x, u});
  for (int i = 0; i <= g.terminal_index(); ++i) {
    const EvalPoint e = eval_point(x, u, 3, i);
    EXPECT_EQ(e.x_delay, x(3, i - g.delay_shift()));
    EXPECT_EQ(e.u_delay, u(0, i - g.delay_shift()));
    const Jet b = pr.drift({g.time_of(i), e.x, e.x_delay, e.u, e.u_delay});
    EXPECT_EQ(table.drift(3, i).value, b.value);
    EXPECT_EQ(table.drift(3, i).d_x, b.d_x);
  }
}
