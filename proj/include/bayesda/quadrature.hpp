#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "bayesda/types.hpp"

namespace bayesda {

/// Nodes and probability-normalized weights of a Gaussian quadrature rule:
/// sum_i w_i f(x_i) approximates the expectation of f under the rule's weight
/// density, exactly for polynomials up to degree 2n - 1.
template <typename Scalar = double>
struct QuadratureRule {
  Vector<Scalar> nodes;    // strictly increasing
  Vector<Scalar> weights;  // positive, sum to one
};

namespace detail {

// Golub-Welsch: eigen-decompose the symmetric tridiagonal Jacobi matrix of
// the monic orthogonal polynomial recurrence. Eigenvalues are the nodes; the
// squared first eigenvector components are the weights (already normalized to
// one because the eigenbasis is orthonormal).
template <typename Scalar>
QuadratureRule<Scalar> golub_welsch(const Vector<Scalar>& diag,
                                    const Vector<Scalar>& subdiag) {
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Dense> solver;
  solver.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("quadrature: tridiagonal eigensolver failed");
  }
  QuadratureRule<Scalar> rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = solver.eigenvectors().row(0).transpose().array().square();
  rule.weights /= rule.weights.sum();
  return rule;
}

}  // namespace detail

/// Gauss-Hermite rule in the probabilists' normalization: expectation under
/// the standard normal density. Recurrence He_{k+1} = x He_k - k He_{k-1}.
template <typename Scalar = double>
QuadratureRule<Scalar> hermite_rule(int n) {
  if (n < 1) throw std::invalid_argument("hermite rule: need n >= 1");
  Vector<Scalar> diag = Vector<Scalar>::Zero(n);
  Vector<Scalar> subdiag(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) subdiag[k - 1] = std::sqrt(Scalar(k));
  return detail::golub_welsch(diag, subdiag);
}

/// Expectation rule for a chi-square variable with `dof` degrees of freedom.
/// Built from the generalized Gauss-Laguerre rule with alpha = dof/2 - 1
/// under the substitution Y = 2t, which maps the Gamma(dof/2, 2) density onto
/// the Laguerre weight t^alpha e^-t. Exact for polynomials in Y up to degree
/// 2n - 1. Valid for dof >= 2, i.e. data dimension d = dof + 1 >= 3.
template <typename Scalar = double>
QuadratureRule<Scalar> chisquare_rule(Index dof, int n) {
  if (dof < 2) {
    throw std::invalid_argument("chisquare rule: dimension below analytic validity");
  }
  if (n < 1) throw std::invalid_argument("chisquare rule: need n >= 1");
  const Scalar alpha = Scalar(dof) / Scalar(2) - Scalar(1);
  Vector<Scalar> diag(n);
  Vector<Scalar> subdiag(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag[k] = Scalar(2 * k + 1) + alpha;
  for (int k = 1; k < n; ++k) subdiag[k - 1] = std::sqrt(Scalar(k) * (Scalar(k) + alpha));
  QuadratureRule<Scalar> rule = detail::golub_welsch(diag, subdiag);
  rule.nodes *= Scalar(2);
  return rule;
}

/// Log-density of Y = |y|^2 for a (d-1)-dimensional standard normal y, i.e.
/// the chi-square density with d - 1 degrees of freedom:
///   log W(y) = -((d-1)/2) log 2 - lgamma((d-1)/2) - y/2 + ((d-3)/2) log y.
/// Evaluated entirely in the log domain; y < 0 returns -infinity.
template <typename Scalar>
Scalar w_log_density(Scalar y, Index d) {
  if (d < 3) {
    throw std::invalid_argument("w density: dimension below analytic validity");
  }
  if (y < Scalar(0)) return -std::numeric_limits<Scalar>::infinity();
  const Scalar half_dof = Scalar(d - 1) / Scalar(2);
  // The log y coefficient vanishes at d = 3; skip the term so y = 0 stays finite.
  const Scalar shape_term =
      d == 3 ? Scalar(0) : (Scalar(d - 3) / Scalar(2)) * std::log(y);
  return -half_dof * std::numbers::ln2_v<Scalar> - std::lgamma(half_dof) -
         y / Scalar(2) + shape_term;
}

}  // namespace bayesda
