#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include "bayesda/dataset.hpp"
#include "bayesda/types.hpp"

namespace bayesda {

/// Fitted per-class posterior over the class mean: the noise scale MAP
/// psi_hat^2, the mean-prior precision MAP alpha_hat (identically zero), and
/// the resulting posterior variance s_hat^2 = 1 / (alpha_hat + n / psi_hat^2).
template <typename Scalar = double>
struct ClassPosterior {
  int label = 0;
  Index n = 0;
  Scalar psi_hat_sq = 0;
  Scalar alpha_hat = 0;
  Scalar s_hat_sq = 0;
  Vector<Scalar> mean;
};

/// Closed-form hyperparameter estimates from class statistics:
/// alpha_hat = 0 and psi_hat^2 = n * Sigma^2 / ((n - 1) * d).
template <typename Scalar>
ClassPosterior<Scalar> fit_hyperparameters(const ClassSummary<Scalar>& summary,
                                           Index d) {
  if (d < 1) throw std::invalid_argument("fit: dimension must be positive");
  if (summary.mean.size() != d) {
    throw std::invalid_argument("fit: summary dimension mismatch");
  }
  if (summary.n < 2) {
    throw std::invalid_argument("degenerate class size: class " +
                                std::to_string(summary.label) + " has " +
                                std::to_string(summary.n) + " sample(s), need >= 2");
  }
  if (!(summary.sigma_sq > Scalar(0))) {
    throw std::invalid_argument("zero within-class variance: class " +
                                std::to_string(summary.label));
  }
  ClassPosterior<Scalar> post;
  post.label = summary.label;
  post.n = summary.n;
  post.mean = summary.mean;
  post.alpha_hat = Scalar(0);
  post.psi_hat_sq =
      Scalar(summary.n) * summary.sigma_sq / (Scalar(summary.n - 1) * Scalar(d));
  post.s_hat_sq =
      Scalar(1) / (post.alpha_hat + Scalar(summary.n) / post.psi_hat_sq);
  return post;
}

/// The scalar reduction of the predictive integral: widths a_sigma, effective
/// query offsets |y~_sigma|, and the log ratios that shift the exponent.
template <typename Scalar = double>
struct PredictiveStats {
  Scalar a0 = 0;
  Scalar a1 = 0;
  Scalar y0_tilde = 0;
  Scalar y1_tilde = 0;
  Scalar log_c = 0;  // log(psi_hat_0 / psi_hat_1)
  Scalar log_e = 0;  // log(sigma_bar_0 / sigma_bar_1)
  Index d = 0;
};

template <typename Scalar, typename Derived>
PredictiveStats<Scalar> predictive_statistics(
    const ClassPosterior<Scalar>& post0, const ClassPosterior<Scalar>& post1,
    std::pair<Scalar, Scalar> imbalance, const Eigen::MatrixBase<Derived>& x_star) {
  static_assert(std::is_same_v<typename Derived::Scalar, Scalar>,
                "query scalar type must match the posterior scalar type");
  const auto [bar0, bar1] = imbalance;
  if (!(bar0 > Scalar(0)) || !(bar1 > Scalar(0)) ||
      std::abs(bar0 + bar1 - Scalar(1)) > Scalar(1e-9)) {
    throw std::invalid_argument(
        "predictive statistics: class proportions must be positive and sum to 1");
  }
  const Index d = post0.mean.size();
  if (post1.mean.size() != d || x_star.size() != d) {
    throw std::invalid_argument("predictive statistics: dimension mismatch");
  }

  PredictiveStats<Scalar> stats;
  stats.d = d;
  stats.a0 = Scalar(0.5) * post0.s_hat_sq / post0.psi_hat_sq;
  stats.a1 = Scalar(0.5) * post1.s_hat_sq / post1.psi_hat_sq;

  // y~_sigma from its defining sums, self-checked against the simplification
  // (x* - <x>_sigma) / s_hat_sigma which is exact when alpha_hat = 0.
  auto offset = [&x_star](const ClassPosterior<Scalar>& post) {
    const Scalar s_hat = std::sqrt(post.s_hat_sq);
    Vector<Scalar> y_tilde =
        x_star / s_hat - (s_hat / post.psi_hat_sq) * (Scalar(post.n) * post.mean);
    const Scalar norm = y_tilde.norm();
    const Scalar simplified = (x_star - post.mean).norm() / s_hat;
    if (std::abs(norm - simplified) > Scalar(1e-8) * (Scalar(1) + simplified)) {
      throw std::logic_error("predictive statistics: offset self-check failed");
    }
    return norm;
  };
  stats.y0_tilde = offset(post0);
  stats.y1_tilde = offset(post1);

  stats.log_c =
      Scalar(0.5) * (std::log(post0.psi_hat_sq) - std::log(post1.psi_hat_sq));
  stats.log_e = std::log(bar0) - std::log(bar1);
  return stats;
}

/// Leading-order log-odds rate: its sign decides the class in the closed-form
/// predictor, and it deliberately omits the O(1/d) imbalance term log_e.
template <typename Scalar>
Scalar lambda10(const PredictiveStats<Scalar>& stats) {
  const Scalar d = Scalar(stats.d);
  // Grouped per class so that exchanging the labels negates the result to
  // the last bit.
  const Scalar class1 = stats.a1 + stats.a1 * stats.y1_tilde * stats.y1_tilde / d;
  const Scalar class0 = stats.a0 + stats.a0 * stats.y0_tilde * stats.y0_tilde / d;
  return (class1 - class0) - stats.log_c;
}

/// View of the same statistics with the class roles exchanged.
template <typename Scalar>
PredictiveStats<Scalar> swap_classes(const PredictiveStats<Scalar>& stats) {
  PredictiveStats<Scalar> out = stats;
  std::swap(out.a0, out.a1);
  std::swap(out.y0_tilde, out.y1_tilde);
  out.log_c = -stats.log_c;
  out.log_e = -stats.log_e;
  return out;
}

}  // namespace bayesda
