#pragma once

#include <cmath>

#include "bayesda/types.hpp"

namespace bayesda {

/// Numerically stable logistic function 1 / (1 + exp(-x)).
/// Never evaluates exp of a positive argument, so it cannot overflow.
template <typename Scalar>
inline Scalar sigmoid(Scalar x) {
  if (x >= Scalar(0)) {
    return Scalar(1) / (Scalar(1) + std::exp(-x));
  }
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

/// Elementwise stable evaluation of 1 / (1 + exp(z)) == sigmoid(-z).
template <typename Derived>
inline Array<typename Derived::Scalar> inv_one_plus_exp(
    const Eigen::ArrayBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  Array<Scalar> t = (-z.abs()).exp();
  return (z >= Scalar(0)).select(t / (Scalar(1) + t), (Scalar(1) + t).inverse());
}

template <typename Scalar>
inline bool relative_close(Scalar a, Scalar b, Scalar tol) {
  using std::abs;
  return abs(a - b) <= tol * (Scalar(1) + std::max(abs(a), abs(b)));
}

}  // namespace bayesda
