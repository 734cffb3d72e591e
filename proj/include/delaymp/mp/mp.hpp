#pragma once

#include <optional>
#include <vector>

#include "delaymp/absde/basis.hpp"
#include "delaymp/adjoint/adjoint.hpp"

namespace delaymp {

struct HamiltonianInput {
  double tau = 0.0;
  double x = 0.0;
  double x_delay = 0.0;
  double v = 0.0;
  double v_delay = 0.0;
  double p = 0.0;
  double q = 0.0;
  double P = 0.0;
  /// Theta(tau) of the candidate pair, used in the -P sigma(Theta) sigma term.
  EvalPoint anchor;
};

/// H = l + p b + q sigma + P sigma^2 / 2 - P sigma(tau, Theta) sigma.
double hamiltonian(const DelayProblem& problem, const HamiltonianInput& in);

struct MarginEstimate {
  double margin = 0.0;
  double std_error = 0.0;
};

/// Cross-path mean of
///   H(tau, x, x_d, v, u_d) - H(tau, Theta(tau))
///   + Pi_tau[H(tau + delta, .., v) - H(tau + delta, Theta(tau + delta))]
/// where the second line is present only when tau < T - delta and Pi_tau is
/// the regression projection on the basis at tau.
MarginEstimate mp_margin(const DelayProblem& problem, OptimalPair pair,
                         const AdjointBundle& adjoints, int tau_index, double v,
                         const RegressionBasis& basis = {});

struct MpCell {
  int tau_index = 0;
  double tau = 0.0;
  double v = 0.0;
  double margin = 0.0;
  double std_error = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct MpScanOptions {
  /// Fixed tolerance; when empty each cell uses 3 standard errors of its own
  /// margin estimate (floored at `min_tol`).
  std::optional<double> tol;
  double min_tol = 1e-12;
  /// Append the finite boundary points of U to the scanned values.
  bool include_boundary = true;
  RegressionBasis basis;
};

struct MpReport {
  std::vector<MpCell> cells;
  std::vector<std::size_t> violations;  ///< indices into `cells`
  int boundary_index = 0;               ///< node of T - delta
  bool pass = true;
  double min_margin = 0.0;
};

/// Throws Errc::EmptyGrid for an empty v or tau grid and
/// Errc::OutsideControlSet when a scanned value is not in U.
MpReport scan_max_condition(const DelayProblem& problem, OptimalPair pair,
                            const AdjointBundle& adjoints, const std::vector<double>& v_grid,
                            const std::vector<int>& tau_indices, const MpScanOptions& options = {});

}  // namespace delaymp
