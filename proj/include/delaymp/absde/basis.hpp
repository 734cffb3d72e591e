#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace delaymp {

/// Polynomials of total degree <= `degree` in the standardized pair
/// (X(t), X(t - delta)).
struct RegressionBasis {
  int degree = 2;
  bool ridge_enabled = true;
  double ridge_rel = 1e-8;
  double cond_threshold = 1e10;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
  }
};

/// Least-squares projector onto the basis evaluated at one grid node.
///
/// Each regressor is centred and scaled by its cross-sectional standard
/// deviation. A regressor with (numerically) zero spread is dropped together
/// with every monomial containing it; if the remaining Gram matrix still has
/// condition number above the threshold, a ridge term of `ridge_rel` times the
/// mean diagonal is added (or Errc::IllConditionedRegression is thrown when
/// ridge is disabled).
class NodeRegression {
 public:
  NodeRegression(std::span<const double> x, std::span<const double> x_delay,
                 const RegressionBasis& basis);

  std::size_t n_paths() const noexcept { return n_paths_; }
  /// Monomial exponents (power of x, power of x_delay) kept after pruning.
  const std::vector<std::pair<int, int>>& monomials() const noexcept { return monomials_; }
  double condition() const noexcept { return condition_; }
  bool ridge_applied() const noexcept { return ridge_applied_; }

  Eigen::VectorXd coefficients(std::span<const double> target) const;
  /// Fitted values of `target` on every path.
  void project(std::span<const double> target, std::span<double> out) const;
  std::vector<double> project(std::span<const double> target) const;

 private:
  std::size_t n_paths_;
  std::vector<std::pair<int, int>> monomials_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> design_;
  Eigen::LDLT<Eigen::MatrixXd> solver_;
  double condition_ = 1.0;
  bool ridge_applied_ = false;
};

}  // namespace delaymp
