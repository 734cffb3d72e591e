#pragma once

#include <memory>
#include <string>

#include "delaymp/absde/absde.hpp"
#include "delaymp/sdde/control.hpp"
#include "delaymp/sdde/problem.hpp"
#include "delaymp/sdde/simulate.hpp"

namespace delaymp {

/// Theta(t) = (x(t), x(t - delta), u(t), u(t - delta)) on one path.
struct EvalPoint {
  double x = 0.0;
  double x_delay = 0.0;
  double u = 0.0;
  double u_delay = 0.0;
};

EvalPoint eval_point(const StatePaths& paths, const ControlProcess& control, std::size_t path,
                     int index);

/// A candidate optimal pair: control u and its state paths x on one ensemble.
struct OptimalPair {
  const StatePaths& state;
  const ControlProcess& control;
};

/// Coefficient jets of b, sigma, l at Theta on every path and node of [0, T],
/// plus the terminal jet of h at x(T).
class CoefficientTable {
 public:
  CoefficientTable(const DelayProblem& problem, OptimalPair pair);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t n_paths() const noexcept { return n_paths_; }
  const Jet& drift(std::size_t path, int index) const noexcept { return at(drift_, path, index); }
  const Jet& diffusion(std::size_t path, int index) const noexcept {
    return at(diffusion_, path, index);
  }
  const Jet& cost(std::size_t path, int index) const noexcept { return at(cost_, path, index); }
  const TerminalJet& terminal(std::size_t path) const noexcept { return terminal_[path]; }

 private:
  const Jet& at(const std::vector<Jet>& v, std::size_t path, int index) const noexcept {
    return v[path * width_ + static_cast<std::size_t>(index)];
  }

  TimeGrid grid_;
  std::size_t n_paths_;
  std::size_t width_;
  std::vector<Jet> drift_, diffusion_, cost_;
  std::vector<TerminalJet> terminal_;
};

/// First adjoint (p, q): generator
///   b_x p + sigma_x q + l_x + E_t[b_xd p + sigma_xd q + l_xd](t + delta)
/// with p(T) = h_x(x(T)) and p = q = 0 on (T, T + delta]. The anticipated
/// product is formed on each path before it is conditioned; past T it is 0.
AbsdeSpec build_first_adjoint(std::shared_ptr<const CoefficientTable> table);

struct FirstAdjoint {
  PathField p;
  PathField q;
};

/// Second adjoint (P, Q): generator
///   (2 b_x + sigma_x^2) P + 2 sigma_x Q + b_xx p + sigma_xx q + l_xx
///   + E_t[sigma_xd^2 P + b_xdxd p + sigma_xdxd q + l_xdxd](t + delta)
/// with P(T) = h_xx(x(T)) and P = Q = 0 on (T, T + delta].
AbsdeSpec build_second_adjoint(std::shared_ptr<const CoefficientTable> table,
                               std::shared_ptr<const FirstAdjoint> first);

/// Integrand of the K equation at node i of one path:
/// b_xd P + sigma_x sigma_xd P + sigma_xd Q + b_xxd p + sigma_xxd q + l_xxd.
double brde_integrand(const Jet& b, const Jet& sigma, const Jet& l, double p, double q, double P,
                      double Q) noexcept;

/// Pathwise left-point quadrature K_i = K_{i+1} + h g_i with K = 0 on
/// [T, T + delta]. `integrand(path, i)` supplies g_i.
PathField solve_brde(const TimeGrid& grid, std::size_t n_paths,
                     const std::function<double(std::size_t, int)>& integrand);

struct AdjointBundle {
  TimeGrid grid;
  PathField p, q, P, Q, K;  ///< nodes [0, T + delta]
};

struct AdjointRun {
  AdjointBundle bundle;
  AbsdeSolution first;
  AbsdeSolution second;
};

/// Solves (p, q), then (P, Q), then K for the pair on `ens`.
AdjointRun solve_adjoints(const DelayProblem& problem, OptimalPair pair,
                          const BrownianEnsemble& ens, const RegressionBasis& basis = {});

struct KReport {
  double sup_mean_abs_K = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

/// sup over nodes of [0, T] of the cross-path mean of |K|. The maximum
/// condition is only asserted when this passes.
KReport check_k_vanishes(const PathField& K, const TimeGrid& grid, double tol);

}  // namespace delaymp
