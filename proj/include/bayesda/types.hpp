#pragma once

#include <Eigen/Dense>

namespace bayesda {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

// Sample-major feature storage: one contiguous row per observation.
template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr const char* kVersion = "0.1.0";

// Sign convention used uniformly in every predictive exponent, derived from
// the posterior odds ratio p(x*|0)sigma_bar_0 / p(x*|1)sigma_bar_1: the class
// imbalance enters as +log(sigma_bar_0/sigma_bar_1).
inline constexpr const char* kLogESignConvention =
    "exponent adds +log(sigma_bar_0/sigma_bar_1)";

}  // namespace bayesda
