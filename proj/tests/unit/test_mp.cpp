#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "delaymp/core/error.hpp"
#include "delaymp/lq/lq.hpp"
#include "delaymp/mp/mp.hpp"
#include "delaymp/sdde/test_problems.hpp"

using namespace delaymp;

namespace {

struct LqCase {
  LqParams params;
  TimeGrid grid = make_grid(1.0, 0.5, 10);
  DelayProblem problem = lq_problem(params);
  BrownianEnsemble ens = sample_brownian(grid, 2000, 31);
  InitialData init = lq_initial_data(params, grid);
  ControlProcess control;
  StatePaths state;

  explicit LqCase(double u)
      : control(ControlProcess::constant(grid, init, u)),
        state(simulate(problem, control, init, ens)) {}
};

/// Margin of the LQ problem against u = -1 with p = 1, q = P = 0.
double lq_margin(const LqParams& p, double v, bool anticipated) {
  double m = p.N * (v * v - 1.0) + p.M * (v + 1.0);
  if (anticipated) m += p.Nbar * (v * v - 1.0) + p.Mbar * (v + 1.0);
  return m;
}

}  // namespace

TEST(Hamiltonian, LqFormula) {
  const LqParams pr;
  const DelayProblem problem = lq_problem(pr);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    HamiltonianInput in{0.3, d(rng), d(rng), d(rng), d(rng), d(rng), d(rng), d(rng),
                        EvalPoint{d(rng), d(rng), d(rng), d(rng)}};
    const double sigma = pr.C * in.x_delay + pr.D * in.v + pr.Dbar * in.v_delay;
    const double sigma0 = pr.C * in.anchor.x_delay + pr.D * in.anchor.u + pr.Dbar * in.anchor.u_delay;
    const double expected = pr.N * in.v * in.v + pr.Nbar * in.v_delay * in.v_delay +
                            in.p * (pr.M * in.v + pr.Mbar * in.v_delay) + in.q * sigma +
                            0.5 * in.P * sigma * sigma - in.P * sigma0 * sigma;
    EXPECT_NEAR(hamiltonian(problem, in), expected, 1e-12);
  }
}

TEST(Hamiltonian, DifferenceFoldsIntoSquaredDiffusionGap) {
  const DelayProblem problem = smooth_test_problem();
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    const double t = 0.4, x = d(rng), xd = d(rng), u = d(rng), ud = d(rng), v = d(rng);
    const double p = d(rng), q = d(rng), P = d(rng);
    const EvalPoint anchor{x, xd, u, ud};
    const double hv = hamiltonian(problem, {t, x, xd, v, ud, p, q, P, anchor});
    const double hu = hamiltonian(problem, {t, x, xd, u, ud, p, q, P, anchor});
    const Arguments av{t, x, xd, v, ud}, au{t, x, xd, u, ud};
    const double ds = problem.diffusion(av).value - problem.diffusion(au).value;
    const double fold = problem.running_cost(av).value - problem.running_cost(au).value +
                        p * (problem.drift(av).value - problem.drift(au).value) + q * ds +
                        0.5 * P * ds * ds;
    EXPECT_NEAR(hv - hu, fold, 1e-12);
  }
}

TEST(Margin, VanishesAtCandidateValue) {
  const LqCase c(-1.0);
  const AdjointRun adj = solve_adjoints(c.problem, OptimalPair{c.state, c.control}, c.ens);
  for (int tau : {0, 3, 10, 15}) {
    const MarginEstimate m = mp_margin(c.problem, OptimalPair{c.state, c.control}, adj.bundle, tau, -1.0);
    EXPECT_NEAR(m.margin, 0.0, 1e-12) << tau;
  }
}

TEST(Margin, LqValuesWithExactAndSolvedAdjoints) {
  const LqCase c(-1.0);
  const OptimalPair pair{c.state, c.control};
  const AdjointBundle exact = lq_exact_adjoints(c.params, c.grid);
  const AdjointRun solved = solve_adjoints(c.problem, pair, c.ens);
  const int boundary = c.grid.terminal_index() - c.grid.delay_shift();
  for (int tau : {0, 4, boundary - 1, boundary, c.grid.terminal_index() - 1}) {
    for (double v : {-3.0, -1.5, -1.0, 1.0, 2.0}) {
      const double expected = lq_margin(c.params, v, tau < boundary);
      EXPECT_NEAR(mp_margin(c.problem, pair, exact, tau, v).margin, expected, 1e-10);
      EXPECT_NEAR(mp_margin(c.problem, pair, solved.bundle, tau, v).margin, expected, 1e-10);
    }
  }
  EXPECT_NEAR(mp_margin(c.problem, pair, exact, 0, 1.0).margin, 8.0, 1e-12);
  EXPECT_NEAR(mp_margin(c.problem, pair, exact, boundary, 1.0).margin, 4.0, 1e-12);
}

TEST(Scan, FlagsSuboptimalCandidate) {
  const LqCase c(1.0);
  const OptimalPair pair{c.state, c.control};
  const MpReport r = scan_max_condition(c.problem, pair, lq_exact_adjoints(c.params, c.grid),
                                        {-2.0, -1.0, 1.0, 2.0}, {0, 5});
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.violations.empty());
  EXPECT_NEAR(r.min_margin, -8.0, 1e-12);
  for (std::size_t k : r.violations) EXPECT_LT(r.cells[k].v, 1.0);
}

TEST(Scan, PassesForClosedForm) {
  const LqCase c(-1.0);
  const OptimalPair pair{c.state, c.control};
  std::vector<int> taus;
  for (int i = 0; i < c.grid.terminal_index(); ++i) taus.push_back(i);
  const MpReport r = scan_max_condition(c.problem, pair, lq_exact_adjoints(c.params, c.grid),
                                        c.params.controls.sample(-3.0, 3.0, 13), taus);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_EQ(r.boundary_index, c.grid.terminal_index() - c.grid.delay_shift());
  EXPECT_NEAR(r.min_margin, 0.0, 1e-12);
  for (const MpCell& cell : r.cells) EXPECT_EQ(cell.tol, 1e-12);
}

TEST(Scan, InputErrorsAndSinglePoint) {
  const LqCase c(-1.0);
  const OptimalPair pair{c.state, c.control};
  const AdjointBundle adj = lq_exact_adjoints(c.params, c.grid);
  const auto code = [&](const std::vector<double>& v, const std::vector<int>& t) {
    try {
      scan_max_condition(c.problem, pair, adj, v, t);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvalidArgument;
  };
  EXPECT_EQ(code({}, {0}), Errc::EmptyGrid);
  EXPECT_EQ(code({1.0}, {}), Errc::EmptyGrid);
  EXPECT_EQ(code({0.0}, {0}), Errc::OutsideControlSet);

  MpScanOptions only;
  only.include_boundary = false;
  const MpReport r = scan_max_condition(c.problem, pair, adj, {2.0}, {0}, only);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_NEAR(r.cells[0].margin, lq_margin(c.params, 2.0, true), 1e-12);
  EXPECT_TRUE(r.pass);
}
