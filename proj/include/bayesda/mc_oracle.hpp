#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "bayesda/dataset.hpp"
#include "bayesda/math.hpp"
#include "bayesda/posterior.hpp"
#include "bayesda/rng.hpp"
#include "bayesda/types.hpp"

namespace bayesda {

struct McEstimate {
  double mean = 0;
  double std_error = 0;
  std::int64_t n_samples = 0;
};

/// Plain Monte-Carlo estimate of the unreduced 2d-dimensional predictive
/// integral: average over y0, y1 ~ N(0, I_d) of
///   1 / (1 + exp(a1 |y1 - y~1|^2 - a0 |y0 - y~0|^2 - d log(C) + log(E)))
/// with C = psi0/psi1 and E = sigma_bar0/sigma_bar1. The +log(E) sign follows
/// from the posterior odds ratio p(x*|0) sigma_bar0 / p(x*|1) sigma_bar1.
///
/// The offset vectors are rebuilt here from their defining sums over the raw
/// dataset, independently of predictive_statistics, so the estimate can serve
/// as an oracle for the reduced quadrature predictors.
///
/// MC sample s draws from the (seed, s) keyed stream; partial sums are merged
/// in fixed chunk order, so the result is identical for any thread count.
template <typename Scalar, typename Derived>
McEstimate mc_oracle_probability(const Dataset<Scalar>& data,
                                 const ClassPosterior<Scalar>& post0,
                                 const ClassPosterior<Scalar>& post1,
                                 std::pair<Scalar, Scalar> imbalance,
                                 const Eigen::MatrixBase<Derived>& x_star,
                                 std::int64_t n_samples, std::uint64_t seed,
                                 int n_threads = 0) {
  static_assert(std::is_same_v<typename Derived::Scalar, Scalar>,
                "query scalar type must match the posterior scalar type");
  const Index d = data.dim();
  if (x_star.size() != d) {
    throw std::invalid_argument("mc oracle: query dimension mismatch");
  }
  if (n_samples < 1) throw std::invalid_argument("mc oracle: need n_samples >= 1");
  const auto [bar0, bar1] = imbalance;
  if (!(bar0 > Scalar(0)) || !(bar1 > Scalar(0))) {
    throw std::invalid_argument("mc oracle: class proportions must be positive");
  }

  const Scalar a0 = Scalar(0.5) * post0.s_hat_sq / post0.psi_hat_sq;
  const Scalar a1 = Scalar(0.5) * post1.s_hat_sq / post1.psi_hat_sq;

  auto offset_vector = [&](const ClassPosterior<Scalar>& post, int label) {
    Vector<Scalar> class_sum = Vector<Scalar>::Zero(d);
    for (Index i = 0; i < data.size(); ++i) {
      if (data.label(i) == label) class_sum += data.sample(i);
    }
    const Scalar s_hat = std::sqrt(post.s_hat_sq);
    Vector<Scalar> y_tilde = x_star / s_hat - (s_hat / post.psi_hat_sq) * class_sum;
    return y_tilde;
  };
  const Vector<Scalar> y0_tilde = offset_vector(post0, 0);
  const Vector<Scalar> y1_tilde = offset_vector(post1, 1);

  const Scalar shift =
      -Scalar(d) * Scalar(0.5) *
          (std::log(post0.psi_hat_sq) - std::log(post1.psi_hat_sq)) +
      (std::log(bar0) - std::log(bar1));

  constexpr std::int64_t kChunk = 1 << 16;
  const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<double> sums(static_cast<std::size_t>(n_chunks), 0.0);
  std::vector<double> sq_sums(static_cast<std::size_t>(n_chunks), 0.0);

  auto run_chunk = [&](std::int64_t c) {
    const std::int64_t begin = c * kChunk;
    const std::int64_t end = std::min(begin + kChunk, n_samples);
    double sum = 0.0, sq = 0.0;
    for (std::int64_t s = begin; s < end; ++s) {
      NormalStream stream(stream_key(seed, static_cast<std::uint64_t>(s)));
      Scalar q1 = 0, q0 = 0;
      for (Index j = 0; j < d; ++j) {
        const Scalar t = Scalar(stream.next()) - y1_tilde[j];
        q1 += t * t;
      }
      for (Index j = 0; j < d; ++j) {
        const Scalar t = Scalar(stream.next()) - y0_tilde[j];
        q0 += t * t;
      }
      const double v = sigmoid(static_cast<double>(-(a1 * q1 - a0 * q0 + shift)));
      sum += v;
      sq += v * v;
    }
    sums[static_cast<std::size_t>(c)] = sum;
    sq_sums[static_cast<std::size_t>(c)] = sq;
  };

  int workers = n_threads > 0
                    ? n_threads
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<std::int64_t>(workers, n_chunks));
  if (workers <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t c = w; c < n_chunks; c += workers) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  double total = 0.0, total_sq = 0.0;
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    total += sums[static_cast<std::size_t>(c)];
    total_sq += sq_sums[static_cast<std::size_t>(c)];
  }
  McEstimate est;
  est.n_samples = n_samples;
  est.mean = total / static_cast<double>(n_samples);
  const double var = std::max(0.0, total_sq / static_cast<double>(n_samples) -
                                       est.mean * est.mean);
  est.std_error = std::sqrt(var / static_cast<double>(n_samples));
  return est;
}

}  // namespace bayesda
