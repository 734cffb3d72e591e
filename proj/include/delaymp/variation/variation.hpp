#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "delaymp/adjoint/adjoint.hpp"
#include "delaymp/core/stats.hpp"
#include "delaymp/sdde/control.hpp"
#include "delaymp/sdde/simulate.hpp"

namespace delaymp {

/// Needle perturbation on the half-open node range [tau, tau + eps).
struct SpikeSpec {
  int tau_index = 0;
  int eps_steps = 0;
  /// A constant value, or a control whose values on the spike nodes are used.
  std::variant<double, ControlProcess> replacement = 0.0;
};

/// Throws Errc::SpikeOutOfRange unless [tau, tau + eps] lies in [0, T], and
/// Errc::OutsideControlSet if a replacement value is not in `set`.
void validate_spike(const TimeGrid& grid, const SpikeSpec& s, const ControlSet& set);

/// Base control with the spike nodes overwritten; identical to `base`
/// elsewhere.
ControlProcess spike(const ControlProcess& base, const SpikeSpec& s);

/// First and second variations on the nodes of [-delta, T].
struct VariationPaths {
  PathField x1;
  PathField x2;
};

namespace detail {
/// Euler steps of both variational equations on one path. Every span is
/// indexed from node -m (dB from interval -m); x1 and x2 are overwritten.
void variation_path(const DelayProblem& problem, const TimeGrid& grid, std::span<const double> x,
                    std::span<const double> u, std::span<const double> u_eps,
                    std::span<const double> dB, std::span<double> x1, std::span<double> x2);
}  // namespace detail

/// Simulates x1 and x2 for the pair perturbed by `s` on the pair's ensemble.
VariationPaths simulate_variational(const DelayProblem& problem, OptimalPair pair,
                                    const SpikeSpec& s, const BrownianEnsemble& ens);

/// xi = x^eps - x - x1 on every node of [-delta, T].
PathField variation_remainder(const StatePaths& perturbed, const StatePaths& base,
                              const VariationPaths& v);
/// eta = x^eps - x - x1 - x2.
PathField second_variation_remainder(const StatePaths& perturbed, const StatePaths& base,
                                     const VariationPaths& v);

struct OrderRow {
  int eps_steps = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  double m1 = 0.0;  ///< E sup |x^eps - x|^2
  double m2 = 0.0;  ///< E sup |x1|^2
  double m3 = 0.0;  ///< E sup |x2|
  double m4 = 0.0;  ///< E sup |x^eps - x - x1|^2
  double m5 = 0.0;  ///< E sup |x^eps - x - x1 - x2|
};

struct OrderStudy {
  std::vector<OrderRow> rows;
  /// OLS slopes of log m_k against log eps, k = 1..5.
  std::array<double, 5> slopes{};
};

struct OrderStudyOptions {
  std::size_t n_paths = 20000;
  std::uint64_t seed = 20240521;
};

/// For each eps (in steps) draws a fresh ensemble keyed by
/// derive_seed(seed, k), k being the position in `eps_steps`, and simulates
/// x, x^eps, x1, x2 path by path. Throws Errc::InsufficientEpsilons unless
/// there are at least three values spanning a factor of at least 4.
OrderStudy order_study(const DelayProblem& problem, const ControlProcess& base,
                       const InitialData& init, int tau_index,
                       const std::variant<double, ControlProcess>& replacement,
                       const std::vector<int>& eps_steps, const OrderStudyOptions& options = {});

struct VariationalGap {
  SampleSummary lhs16;  ///< full second-order expansion of the cost change
  SampleSummary lhs25;  ///< E int [dl + p db + q dsigma + P dsigma^2 / 2] dt
  SampleSummary cost_gap;
};

VariationalGap variational_gap(const DelayProblem& problem, OptimalPair pair,
                               const InitialData& init, const SpikeSpec& s,
                               const AdjointBundle& adjoints, const BrownianEnsemble& ens);

struct CrossTermReport {
  SampleSummary estimate;  ///< E int x1(t) x1(t - delta) g(t) dt
  bool integrand_identically_zero = false;
  bool asserted = false;  ///< K vanished, so the identity is claimed
  bool consistent = false;  ///< |mean| <= 3 standard errors
  std::string label;  ///< "asserted" or "not asserted"
};

/// g is the BRDE integrand evaluated with the supplied adjoints.
CrossTermReport cross_term_identity(const DelayProblem& problem, OptimalPair pair,
                                    const VariationPaths& variation, const AdjointBundle& adjoints,
                                    const KReport& k_report);

}  // namespace delaymp
