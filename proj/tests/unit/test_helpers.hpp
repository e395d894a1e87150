#pragma once

#include <utility>
#include <vector>

#include "bayesda/dataset.hpp"
#include "bayesda/rng.hpp"
#include "bayesda/types.hpp"

namespace bayesda::testing {

// Four points in d = 3 with hand-computable statistics: class 0 on the x axis,
// class 1 on the y axis. Used across the posterior and predictor tests.
inline Dataset<double> tiny_dataset() {
  RowMatrix<double> x(4, 3);
  x << 0, 0, 0,
       2, 0, 0,
       0, 2, 0,
       0, 4, 0;
  return Dataset<double>(x, {0, 0, 1, 1});
}

inline Dataset<double> random_dataset(Index n0, Index n1, Index d,
                                      std::uint64_t seed, double spread = 1.0) {
  RowMatrix<double> x(n0 + n1, d);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n0 + n1));
  for (Index i = 0; i < n0 + n1; ++i) {
    NormalStream stream(stream_key(seed, static_cast<std::uint64_t>(i)));
    const double shift = i < n0 ? 0.0 : 0.5;
    for (Index j = 0; j < d; ++j) x(i, j) = shift + spread * stream.next();
    labels.push_back(i < n0 ? 0 : 1);
  }
  return Dataset<double>(std::move(x), std::move(labels));
}

inline Vector<double> random_vector(Index d, std::uint64_t seed, double scale = 1.0) {
  Vector<double> v(d);
  NormalStream stream(stream_key(seed, 0xabcd));
  for (Index j = 0; j < d; ++j) v[j] = scale * stream.next();
  return v;
}

}  // namespace bayesda::testing
