#include <gtest/gtest.h>

#include "delaymp/core/error.hpp"
#include "delaymp/lq/lq.hpp"

using namespace delaymp;

TEST(ClosedForm, DefaultParametersGiveMinusOne) {
  const LqParams p;
  for (double tau : {0.0, 0.25, 0.49, 0.5, 0.75, 1.0}) {
    const ClosedFormValue c = closed_form_control(p, tau);
    EXPECT_DOUBLE_EQ(c.value, -1.0) << tau;
    EXPECT_TRUE(c.admissible);
    EXPECT_EQ(c.indicator, tau < 0.5);
  }
  EXPECT_DOUBLE_EQ(closed_form_control(p, 0.1).half_convention_value, -2.0);
}

TEST(ClosedForm, ShapeFollowsIndicator) {
  LqParams p;
  p.M = 6.0;
  p.Mbar = 2.0;
  p.N = 1.0;
  p.Nbar = 3.0;
  EXPECT_DOUBLE_EQ(closed_form_control(p, 0.2).value, -1.0);
  EXPECT_DOUBLE_EQ(closed_form_control(p, 0.7).value, -3.0);

  p.M = p.Mbar = 0.0;
  const ClosedFormValue zero = closed_form_control(p, 0.2);
  EXPECT_DOUBLE_EQ(zero.value, 0.0);
  EXPECT_FALSE(zero.admissible);
}

TEST(ClosedForm, ProcessOnGrid) {
  const LqParams p;
  const TimeGrid g = make_grid(1.0, 0.5, 10);
  const ControlProcess u = closed_form_process(p, g);
  EXPECT_TRUE(u.deterministic());
  for (int i = g.first_index(); i <= g.terminal_index(); ++i) EXPECT_EQ(u(0, i), -1.0);
  EXPECT_TRUE(u.admissible(p.controls));
}

TEST(Params, Validation) {
  LqParams p;
  p.N = 0.0;
  try {
    p.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidArgument);
  }
  EXPECT_NO_THROW(LqParams{}.validate());
}

TEST(Cost, ClosedFormCostIsMinusTwo) {
  const LqParams p;
  const TimeGrid g = make_grid(1.0, 0.5, 16);
  const ControlProcess u = closed_form_process(p, g);
  // Rate N + Nbar - M - Mbar = -2 on all of [0, 1], and phi = 0.
  EXPECT_NEAR(lq_expected_cost(p, u), -2.0, 1e-12);
  EXPECT_NEAR(lq_constant_cost(p, -1.0, -1.0), -2.0, 1e-12);
  const SampleSummary mc = lq_cost(p, u, sample_brownian(g, 20000, 41));
  EXPECT_NEAR(mc.mean, -2.0, 3.0 * mc.std_error);
}

TEST(Cost, ZeroControlCostsInitialState) {
  LqParams p;
  p.phi = 0.7;
  p.eta = 0.0;
  const TimeGrid g = make_grid(1.0, 0.5, 8);
  const InitialData init = lq_initial_data(p, g);
  const ControlProcess zero = ControlProcess::constant(g, init, 0.0);
  EXPECT_NEAR(lq_constant_cost(p, 0.0, 0.0), 0.7, 1e-15);
  EXPECT_NEAR(lq_expected_cost(p, zero), 0.7, 1e-15);
  const SampleSummary mc = lq_cost(p, zero, sample_brownian(g, 5000, 42));
  EXPECT_NEAR(mc.mean, 0.7, 3.0 * mc.std_error + 1e-15);
}

TEST(Cost, ConstantControlWithDifferentPast) {
  const LqParams p;
  const TimeGrid g = make_grid(1.0, 0.5, 8);
  const ControlProcess two = ControlProcess::constant(g, lq_initial_data(p, g), 2.0);
  // N T 4 + Nbar (delta + (T - delta) 4) + M 2 + Mbar (-delta + 2 (T - delta)).
  EXPECT_NEAR(lq_constant_cost(p, 2.0, -1.0), 11.5, 1e-12);
  EXPECT_NEAR(lq_expected_cost(p, two), 11.5, 1e-12);
}

TEST(ExactAdjoints, UnitOnHorizonZeroBeyond) {
  const LqParams p;
  const TimeGrid g = make_grid(1.0, 0.5, 4);
  const AdjointBundle a = lq_exact_adjoints(p, g);
  for (int i = 0; i <= g.last_index(); ++i) {
    EXPECT_EQ(a.p(0, i), i <= g.terminal_index() ? 1.0 : 0.0);
    EXPECT_EQ(a.q(0, i), 0.0);
    EXPECT_EQ(a.P(0, i), 0.0);
    EXPECT_EQ(a.Q(0, i), 0.0);
    EXPECT_EQ(a.K(0, i), 0.0);
  }
}

TEST(Optimality, ClosedFormBeatsDefaultAlternatives) {
  const LqParams p;
  const TimeGrid g = make_grid(1.0, 0.5, 10);
  const OptimalityReport r = verify_optimality(p, sample_brownian(g, 8000, 43), default_alternatives(p, g));
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.alternatives.size(), 4u);
  // The spike switches -1 to 1 on two nodes: 2 h (2 M + 2 Mbar).
  const double analytic[] = {6.0, 0.375, 13.5, 0.8};
  for (std::size_t k = 0; k < 4; ++k) {
    const AlternativeResult& a = r.alternatives[k];
    ASSERT_TRUE(a.analytic_gap.has_value());
    EXPECT_NEAR(*a.analytic_gap, analytic[k], 1e-12) << a.label;
    EXPECT_NEAR(a.gap.mean, analytic[k], 4.0 * a.gap.std_error) << a.label;
    EXPECT_GT(a.gap.mean, 0.0);
  }
}

TEST(Optimality, RejectsInadmissibleAlternative) {
  const LqParams p;
  const TimeGrid g = make_grid(1.0, 0.5, 4);
  const ControlProcess zero = ControlProcess::constant(g, lq_initial_data(p, g), 0.0);
  try {
    verify_optimality(p, sample_brownian(g, 10, 1), {zero});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InadmissibleAlternative);
  }
}
