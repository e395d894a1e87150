#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bayesda/dataset.hpp"
#include "bayesda/rng.hpp"
#include "bayesda/types.hpp"

namespace bayesda {

/// Isotropic two-class Gaussian generator: n0 samples of N(mu0, lambda0^2 I_d)
/// labeled 0 followed by n1 samples of N(mu1, lambda1^2 I_d) labeled 1.
struct SimConfig {
  Index n0 = 50;
  Index n1 = 50;
  Index d = 0;
  double mu0 = 0.0;
  double mu1 = 0.0;
  double lambda0 = 0.24;
  double lambda1 = 0.28;
  std::uint64_t seed = 0;
};

inline void validate(const SimConfig& config) {
  if (config.d < 1) throw std::invalid_argument("simulate: d must be positive");
  if (config.n0 < 0 || config.n1 < 0 || config.n0 + config.n1 < 2) {
    throw std::invalid_argument("simulate: need n0 + n1 >= 2");
  }
  if (!(config.lambda0 > 0) || !(config.lambda1 > 0)) {
    throw std::invalid_argument("simulate: lambdas must be positive");
  }
}

/// Each sample draws from its own (seed, row) keyed stream, so the output is
/// byte-identical for a given seed no matter how callers parallelize.
template <typename Scalar = double>
Dataset<Scalar> simulate_dataset(const SimConfig& config) {
  validate(config);
  const Index n = config.n0 + config.n1;
  RowMatrix<Scalar> x(n, config.d);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const bool cls1 = i >= config.n0;
    const double mu = cls1 ? config.mu1 : config.mu0;
    const double lambda = cls1 ? config.lambda1 : config.lambda0;
    labels[static_cast<std::size_t>(i)] = cls1 ? 1 : 0;
    NormalStream stream(stream_key(config.seed, static_cast<std::uint64_t>(i)));
    for (Index j = 0; j < config.d; ++j) {
      x(i, j) = Scalar(mu + lambda * stream.next());
    }
  }
  return Dataset<Scalar>(std::move(x), std::move(labels));
}

}  // namespace bayesda
