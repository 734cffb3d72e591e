#include <gtest/gtest.h>

#include <cmath>

#include "delaymp/core/error.hpp"
#include "delaymp/lq/lq.hpp"
#include "delaymp/sdde/test_problems.hpp"
#include "delaymp/variation/variation.hpp"

using namespace delaymp;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no delaymp::Error thrown";
  return Errc::InvalidArgument;
}

}  // namespace

TEST(Spike, NoOpPerturbationsLeaveControlUnchanged) {
  const TimeGrid g = make_grid(1.0, 0.5, 10);
  const InitialData init = InitialData::constant(g, 0.0, -1.0);
  const ControlProcess u = ControlProcess::constant(g, init, -1.0);
  EXPECT_TRUE(spike(u, SpikeSpec{4, 0, 1.0}) == u);
  EXPECT_TRUE(spike(u, SpikeSpec{4, 3, -1.0}) == u);
  EXPECT_TRUE(spike(u, SpikeSpec{4, 3, u}) == u);
}

TEST(Spike, OverwritesHalfOpenNodeRange) {
  const TimeGrid g = make_grid(1.0, 0.5, 10);
  const InitialData init = InitialData::constant(g, 0.0, -1.0);
  const ControlProcess u = ControlProcess::constant(g, init, -1.0);
  const ControlProcess ue = spike(u, SpikeSpec{4, 2, 1.0});
  int changed = 0;
  for (int i = g.first_index(); i <= g.terminal_index(); ++i) {
    if (ue(0, i) != u(0, i)) {
      ++changed;
      EXPECT_TRUE(i == 4 || i == 5) << i;
      EXPECT_EQ(ue(0, i), 1.0);
    }
  }
  EXPECT_EQ(changed, 2);
}

TEST(Spike, ValidationErrors) {
  const TimeGrid g = make_grid(1.0, 0.5, 10);
  const ControlSet set = ControlSet::outside(-1.0, 1.0);
  EXPECT_EQ(code_of([&] { validate_spike(g, SpikeSpec{18, 3, 1.0}, set); }), Errc::SpikeOutOfRange);
  EXPECT_EQ(code_of([&] { validate_spike(g, SpikeSpec{-1, 1, 1.0}, set); }), Errc::SpikeOutOfRange);
  EXPECT_EQ(code_of([&] { validate_spike(g, SpikeSpec{2, 1, 0.0}, set); }), Errc::OutsideControlSet);
  EXPECT_NO_THROW(validate_spike(g, SpikeSpec{17, 3, 1.0}, set));
}

TEST(Variational, NoOpSpikeGivesZeroVariations) {
  const TimeGrid g = make_grid(1.0, 0.5, 8);
  const DelayProblem pr = smooth_test_problem();
  const BrownianEnsemble ens = sample_brownian(g, 200, 9);
  const InitialData init = InitialData::constant(g, 1.0, -1.0);
  const ControlProcess u = ControlProcess::constant(g, init, 1.0);
  const StatePaths x = simulate(pr, u, init, ens);
  const VariationPaths v = simulate_variational(pr, OptimalPair{x, u}, SpikeSpec{3, 2, 1.0}, ens);
  for (std::size_t p = 0; p < 200; ++p) {
    for (int i = g.first_index(); i <= g.terminal_index(); ++i) {
      ASSERT_EQ(v.x1(p, i), 0.0);
      ASSERT_EQ(v.x2(p, i), 0.0);
    }
  }
}

TEST(Variational, ZeroBeforeSpike) {
  const TimeGrid g = make_grid(1.0, 0.5, 8);
  const DelayProblem pr = smooth_test_problem();
  const BrownianEnsemble ens = sample_brownian(g, 200, 10);
  const InitialData init = InitialData::constant(g, 1.0, -1.0);
  const ControlProcess u = ControlProcess::constant(g, init, -1.0);
  const StatePaths x = simulate(pr, u, init, ens);
  const int tau = 5;
  const VariationPaths v = simulate_variational(pr, OptimalPair{x, u}, SpikeSpec{tau, 2, 1.0}, ens);
  bool moved = false;
  for (std::size_t p = 0; p < 200; ++p) {
    for (int i = g.first_index(); i <= tau; ++i) {
      ASSERT_EQ(v.x1(p, i), 0.0);
      ASSERT_EQ(v.x2(p, i), 0.0);
    }
    moved = moved || v.x1(p, tau + 1) != 0.0;
  }
  EXPECT_TRUE(moved);
}

TEST(Variational, StateIndependentCoefficientsAreExact) {
  LqParams params;
  params.C = params.D = params.Dbar = 0.0;
  const TimeGrid g = make_grid(1.0, 0.5, 10);
  const DelayProblem pr = lq_problem(params);
  const BrownianEnsemble ens = sample_brownian(g, 50, 11);
  const InitialData init = lq_initial_data(params, g);
  const ControlProcess u = ControlProcess::constant(g, init, -1.0);
  const SpikeSpec s{3, 4, 2.0};
  const StatePaths x = simulate(pr, u, init, ens);
  const StatePaths xe = simulate(pr, spike(u, s), init, ens);
  const VariationPaths v = simulate_variational(pr, OptimalPair{x, u}, s, ens);
  const double h = g.step();
  const int m = g.delay_shift();
  // x1(t_i) = h sum_{j<i} [M dv_j + Mbar dv_{j-m}] with dv = 3 on [3, 7).
  const auto dv = [](int j) { return (j >= 3 && j < 7) ? 3.0 : 0.0; };
  double expected = 0.0;
  for (int i = 0; i <= g.terminal_index(); ++i) {
    for (std::size_t p = 0; p < 50; p += 7) {
      ASSERT_NEAR(v.x1(p, i), expected, 1e-12);
      ASSERT_NEAR(xe(p, i) - x(p, i), v.x1(p, i), 1e-12);
      ASSERT_EQ(v.x2(p, i), 0.0);
    }
    expected += h * (params.M * dv(i) + params.Mbar * dv(i - m));
  }
  const PathField r = variation_remainder(xe, x, v);
  for (int i = 0; i <= g.terminal_index(); ++i) EXPECT_NEAR(r(0, i), 0.0, 1e-12);
}

TEST(OrderStudy, DriftOnlyFirstMomentHasSlopeTwo) {
  DelayProblem pr = frozen_problem();
  pr.drift = [](const Arguments& a) { return Jet{a.v}; };
  const TimeGrid g = make_grid(1.0, 0.5, 64);
  const InitialData init = InitialData::constant(g, 0.0, 0.0);
  const ControlProcess u = ControlProcess::constant(g, init, 0.0);
  const OrderStudy st = order_study(pr, u, init, 16, 1.0, {2, 4, 8, 16}, {500, 3});
  ASSERT_EQ(st.rows.size(), 4u);
  for (const OrderRow& row : st.rows) {
    EXPECT_NEAR(row.m1, row.eps * row.eps, 1e-12);
    EXPECT_NEAR(row.m2, row.eps * row.eps, 1e-12);
  }
  EXPECT_NEAR(st.slopes[0], 2.0, 1e-9);
  EXPECT_NEAR(st.slopes[1], 2.0, 1e-9);
  EXPECT_TRUE(std::isnan(st.slopes[3]));
}

TEST(OrderStudy, RejectsTooFewEpsilons) {
  const TimeGrid g = make_grid(1.0, 0.5, 64);
  const InitialData init = InitialData::constant(g, 0.0, 0.0);
  const ControlProcess u = ControlProcess::constant(g, init, 0.0);
  const DelayProblem pr = frozen_problem();
  EXPECT_EQ(code_of([&] { order_study(pr, u, init, 4, 1.0, {2, 4}, {10, 1}); }),
            Errc::InsufficientEpsilons);
  EXPECT_EQ(code_of([&] { order_study(pr, u, init, 4, 1.0, {2, 3, 4}, {10, 1}); }),
            Errc::InsufficientEpsilons);
}

TEST(VariationalGapTest, NoOpSpikeIsZero) {
  const LqParams params;
  const TimeGrid g = make_grid(1.0, 0.5, 10);
  const DelayProblem pr = lq_problem(params);
  const BrownianEnsemble ens = sample_brownian(g, 300, 12);
  const InitialData init = lq_initial_data(params, g);
  const ControlProcess u = closed_form_process(params, g);
  const StatePaths x = simulate(pr, u, init, ens);
  const VariationalGap gap = variational_gap(pr, OptimalPair{x, u}, init, SpikeSpec{2, 3, -1.0},
                                             lq_exact_adjoints(params, g), ens);
  EXPECT_EQ(gap.lhs16.mean, 0.0);
  EXPECT_EQ(gap.lhs25.mean, 0.0);
  EXPECT_EQ(gap.cost_gap.mean, 0.0);
}

TEST(VariationalGapTest, LqHamiltonianGapMatchesAnalyticValue) {
  const LqParams params;
  const TimeGrid g = make_grid(1.0, 0.5, 10);
  const DelayProblem pr = lq_problem(params);
  const BrownianEnsemble ens = sample_brownian(g, 4000, 13);
  const InitialData init = lq_initial_data(params, g);
  const ControlProcess u = closed_form_process(params, g);
  const StatePaths x = simulate(pr, u, init, ens);
  const SpikeSpec s{4, 2, 1.0};
  const VariationalGap gap =
      variational_gap(pr, OptimalPair{x, u}, init, s, lq_exact_adjoints(params, g), ens);
  // Switching -1 to 1 on [0.2, 0.3): dl = 0, db = 2M now and 2Mbar one delay later.
  const double eps = 2 * g.step();
  const double expected = eps * (2.0 * params.M + 2.0 * params.Mbar);
  EXPECT_NEAR(gap.lhs25.mean, expected, 1e-12);
  EXPECT_NEAR(gap.cost_gap.mean, expected, 3.0 * gap.cost_gap.std_error + 1e-12);
  EXPECT_NEAR(gap.lhs16.mean, gap.cost_gap.mean, 3.0 * gap.cost_gap.std_error + 1e-12);
}

TEST(CrossTerm, AssertedOnlyWhenKVanishes) {
  const LqParams params;
  const TimeGrid g = make_grid(1.0, 0.5, 10);
  const DelayProblem pr = lq_problem(params);
  const BrownianEnsemble ens = sample_brownian(g, 500, 14);
  const InitialData init = lq_initial_data(params, g);
  const ControlProcess u = closed_form_process(params, g);
  const StatePaths x = simulate(pr, u, init, ens);
  const SpikeSpec s{4, 2, 1.0};
  const VariationPaths v = simulate_variational(pr, OptimalPair{x, u}, s, ens);
  const AdjointBundle adj = lq_exact_adjoints(params, g);
  const CrossTermReport lq = cross_term_identity(pr, OptimalPair{x, u}, v, adj,
                                                 check_k_vanishes(adj.K, g, 1e-3));
  EXPECT_TRUE(lq.asserted);
  EXPECT_TRUE(lq.integrand_identically_zero);
  EXPECT_TRUE(lq.consistent);
  EXPECT_EQ(lq.label, "asserted");

  const DelayProblem sm = smooth_test_problem();
  const InitialData init2 = InitialData::constant(g, 1.0, -1.0);
  const ControlProcess u2 = ControlProcess::constant(g, init2, -1.0);
  const StatePaths x2 = simulate(sm, u2, init2, ens);
  const AdjointRun run = solve_adjoints(sm, OptimalPair{x2, u2}, ens);
  const VariationPaths v2 = simulate_variational(sm, OptimalPair{x2, u2}, s, ens);
  const CrossTermReport smooth = cross_term_identity(sm, OptimalPair{x2, u2}, v2, run.bundle,
                                                     check_k_vanishes(run.bundle.K, g, 1e-3));
  EXPECT_FALSE(smooth.asserted);
  EXPECT_FALSE(smooth.integrand_identically_zero);
  EXPECT_EQ(smooth.label, "not asserted");
}
