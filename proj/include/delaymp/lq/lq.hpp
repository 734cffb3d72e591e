#pragma once

#include <optional>
#include <string>
#include <vector>

#include "delaymp/adjoint/adjoint.hpp"
#include "delaymp/core/stats.hpp"
#include "delaymp/sdde/control.hpp"
#include "delaymp/sdde/problem.hpp"

namespace delaymp {

/// dX = (M v + Mbar v_d) dt + (C X_d + D v + Dbar v_d) dB,
/// J = E[ int (N v^2 + Nbar v_d^2) dt + X(T) ]  (no 1/2 on the running cost).
struct LqParams {
  double M = 2.0;
  double Mbar = 2.0;
  double C = 0.5;
  double D = 0.3;
  double Dbar = 0.2;
  double N = 1.0;
  double Nbar = 1.0;
  double phi = 0.0;  ///< constant initial state path
  double eta = -1.0;  ///< constant initial control path
  double horizon = 1.0;
  double delay = 0.5;
  ControlSet controls = ControlSet::outside(-1.0, 1.0);

  /// Throws Errc::InvalidArgument unless N > 0 and Nbar > 0.
  void validate() const;
};

DelayProblem lq_problem(const LqParams& params);
InitialData lq_initial_data(const LqParams& params, const TimeGrid& grid);

struct ClosedFormValue {
  double value = 0.0;
  bool admissible = false;
  /// Minimiser if the running cost carried a factor 1/2.
  double half_convention_value = 0.0;
  bool indicator = false;  ///< tau < T - delta
};

/// u(tau) = -(M + Mbar I) / (2 (N + Nbar I)), I = 1 on [0, T - delta).
ClosedFormValue closed_form_control(const LqParams& params, double tau);

/// Closed-form control on the grid, with the initial control path on
/// [-delta, 0).
ControlProcess closed_form_process(const LqParams& params, const TimeGrid& grid);

SampleSummary lq_cost(const LqParams& params, const ControlProcess& control,
                      const BrownianEnsemble& ens);

/// Exact expected cost of a deterministic control on the grid: the diffusion
/// has zero mean, so only the drift and running cost contribute.
double lq_expected_cost(const LqParams& params, const ControlProcess& control);

/// Same for a control constant at v on [0, T] with constant past v0.
double lq_constant_cost(const LqParams& params, double v, double v0);

/// p = 1 on [0, T], q = P = Q = K = 0; all processes vanish on (T, T + delta].
AdjointBundle lq_exact_adjoints(const LqParams& params, const TimeGrid& grid);

struct AlternativeResult {
  std::string label;
  SampleSummary cost;
  SampleSummary gap;  ///< paired J(alt) - J(candidate) on common noise
  std::optional<double> analytic_gap;
  bool pass = false;  ///< gap.mean >= -3 gap.std_error
};

struct OptimalityReport {
  SampleSummary candidate_cost;
  std::vector<AlternativeResult> alternatives;
  bool pass = false;
};

/// Alternatives spanning both rays of U plus a spike of the closed form to 1
/// on the nodes nearest to [0.2, 0.3).
std::vector<ControlProcess> default_alternatives(const LqParams& params, const TimeGrid& grid);

/// Throws Errc::InadmissibleAlternative for an alternative leaving U.
OptimalityReport verify_optimality(const LqParams& params, const BrownianEnsemble& ens,
                                   const std::vector<ControlProcess>& alternatives);

}  // namespace delaymp
