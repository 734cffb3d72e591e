#include "delaymp/absde/basis.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "delaymp/core/error.hpp"
#include "delaymp/core/parallel.hpp"
#include "delaymp/core/stats.hpp"

namespace delaymp {

namespace {

struct Standardizer {
  double mean = 0.0;
  double scale = 1.0;
  bool degenerate = false;
};

Standardizer standardize(std::span<const double> v) {
  const auto summary = summarize(v);
  Standardizer s;
  s.mean = summary.mean;
  s.degenerate = !(summary.sd > 1e-12 * (1.0 + std::abs(summary.mean)));
  s.scale = s.degenerate ? 1.0 : summary.sd;
  return s;
}

}  // namespace

NodeRegression::NodeRegression(std::span<const double> x, std::span<const double> x_delay,
                               const RegressionBasis& basis)
    : n_paths_(x.size()) {
  if (x.size() != x_delay.size()) {
    throw Error(Errc::EnsembleMismatch, "regressors have different path counts");
  }
  if (basis.degree < 0) throw Error(Errc::InvalidArgument, "basis degree must be >= 0");
  if (n_paths_ < 2 * basis.size()) {
    throw Error(Errc::InvalidArgument,
                fmt::format("{} paths cannot support a {}-function basis", n_paths_, basis.size()));
  }
  const Standardizer sx = standardize(x);
  const Standardizer sd = standardize(x_delay);
  for (int total = 0; total <= basis.degree; ++total) {
    for (int b = 0; b <= total; ++b) {
      const int a = total - b;
      if ((a > 0 && sx.degenerate) || (b > 0 && sd.degenerate)) continue;
      monomials_.emplace_back(a, b);
    }
  }
  const auto k = static_cast<Eigen::Index>(monomials_.size());
  design_.resize(static_cast<Eigen::Index>(n_paths_), k);
  parallel_for(n_paths_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const double zx = (x[p] - sx.mean) / sx.scale;
      const double zd = (x_delay[p] - sd.mean) / sd.scale;
      for (Eigen::Index c = 0; c < k; ++c) {
        const auto [a, b] = monomials_[static_cast<std::size_t>(c)];
        design_(static_cast<Eigen::Index>(p), c) = std::pow(zx, a) * std::pow(zd, b);
      }
    }
  });

  Eigen::MatrixXd gram(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = r; c < k; ++c) {
      CompensatedSum acc;
      for (std::size_t p = 0; p < n_paths_; ++p) {
        const auto row = static_cast<Eigen::Index>(p);
        acc.add(design_(row, r) * design_(row, c));
      }
      gram(r, c) = gram(c, r) = acc.value() / static_cast<double>(n_paths_);
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  condition_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (condition_ > basis.cond_threshold) {
    if (!basis.ridge_enabled) {
      throw Error(Errc::IllConditionedRegression,
                  fmt::format("design condition {:.3g} exceeds {:.3g} and ridge is disabled",
                              condition_, basis.cond_threshold));
    }
    gram.diagonal().array() += basis.ridge_rel * gram.diagonal().mean();
    ridge_applied_ = true;
  }
  solver_.compute(gram);
}

Eigen::VectorXd NodeRegression::coefficients(std::span<const double> target) const {
  if (target.size() != n_paths_) {
    throw Error(Errc::EnsembleMismatch, "regression target has the wrong path count");
  }
  const Eigen::Index k = design_.cols();
  Eigen::VectorXd rhs(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    CompensatedSum acc;
    for (std::size_t p = 0; p < n_paths_; ++p) {
      acc.add(design_(static_cast<Eigen::Index>(p), c) * target[p]);
    }
    rhs(c) = acc.value() / static_cast<double>(n_paths_);
  }
  return solver_.solve(rhs);
}

void NodeRegression::project(std::span<const double> target, std::span<double> out) const {
  const Eigen::VectorXd beta = coefficients(target);
  parallel_for(n_paths_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      out[p] = design_.row(static_cast<Eigen::Index>(p)).dot(beta);
    }
  });
}

std::vector<double> NodeRegression::project(std::span<const double> target) const {
  std::vector<double> out(n_paths_);
  project(target, out);
  return out;
}

}  // namespace delaymp
