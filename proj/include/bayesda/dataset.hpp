#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bayesda/types.hpp"

namespace bayesda {

/// Immutable labeled sample collection: N rows of d finite covariates plus a
/// binary label per row. All fitting and prediction routines are free
/// functions over this type.
template <typename Scalar = double>
class Dataset {
 public:
  Dataset(RowMatrix<Scalar> features, std::vector<int> labels)
      : features_(std::move(features)), labels_(std::move(labels)) {
    if (features_.rows() == 0 || features_.cols() == 0) {
      throw std::invalid_argument("dataset: needs at least one sample and one feature");
    }
    if (features_.rows() != static_cast<Index>(labels_.size())) {
      throw std::invalid_argument("dataset: feature rows and label count differ");
    }
    if (!features_.allFinite()) {
      throw std::invalid_argument("dataset: non-finite feature value");
    }
    for (int label : labels_) {
      if (label != 0 && label != 1) {
        throw std::invalid_argument("dataset: labels must be 0 or 1");
      }
    }
  }

  Index size() const { return features_.rows(); }
  Index dim() const { return features_.cols(); }
  const RowMatrix<Scalar>& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  int label(Index i) const { return labels_[static_cast<std::size_t>(i)]; }

  /// Contiguous view of sample i as a column vector.
  auto sample(Index i) const { return features_.row(i).transpose(); }

  Index class_count(int label) const {
    return static_cast<Index>(std::count(labels_.begin(), labels_.end(), label));
  }

  /// Copy with sample i removed (row order otherwise preserved).
  Dataset without(Index i) const {
    if (i < 0 || i >= size()) throw std::invalid_argument("dataset: sample index out of range");
    RowMatrix<Scalar> f(size() - 1, dim());
    std::vector<int> l;
    l.reserve(static_cast<std::size_t>(size() - 1));
    Index r = 0;
    for (Index j = 0; j < size(); ++j) {
      if (j == i) continue;
      f.row(r++) = features_.row(j);
      l.push_back(labels_[static_cast<std::size_t>(j)]);
    }
    return Dataset(std::move(f), std::move(l));
  }

 private:
  RowMatrix<Scalar> features_;
  std::vector<int> labels_;
};

/// Per-class sufficient statistics: count, mean vector, mean squared norm
/// <x^2> and the scalar spread Sigma^2 = <x^2> - |<x>|^2.
template <typename Scalar = double>
struct ClassSummary {
  int label = 0;
  Index n = 0;
  Vector<Scalar> mean;
  Scalar mean_sq_norm = 0;
  Scalar sigma_sq = 0;
};

namespace detail {

// Shared by summarize_class and the leave-one-out harness: direct summation
// over all samples with the given label, skipping one optional index.
template <typename Scalar>
ClassSummary<Scalar> summarize_with_skip(const Dataset<Scalar>& data, int label,
                                         Index skip) {
  ClassSummary<Scalar> out;
  out.label = label;
  Vector<Scalar> sum = Vector<Scalar>::Zero(data.dim());
  Scalar sum_sq = 0;
  for (Index i = 0; i < data.size(); ++i) {
    if (i == skip || data.label(i) != label) continue;
    sum += data.sample(i);
    sum_sq += data.sample(i).squaredNorm();
    ++out.n;
  }
  if (out.n == 0) {
    throw std::invalid_argument("empty class: no samples with label " +
                                std::to_string(label));
  }
  out.mean = sum / Scalar(out.n);
  out.mean_sq_norm = sum_sq / Scalar(out.n);
  out.sigma_sq = std::max(Scalar(0), out.mean_sq_norm - out.mean.squaredNorm());
  return out;
}

}  // namespace detail

template <typename Scalar>
ClassSummary<Scalar> summarize_class(const Dataset<Scalar>& data, int label) {
  return detail::summarize_with_skip(data, label, Index(-1));
}

/// Pearson correlation of every feature column with the 0/1 label, returned
/// as (column index, |r|) sorted by descending |r|; zero-variance columns get
/// r = 0 and ties break toward the lower index.
template <typename Scalar>
std::vector<std::pair<Index, Scalar>> rank_features_by_correlation(
    const Dataset<Scalar>& data) {
  const Index n = data.size();
  if (n < 2) throw std::invalid_argument("rank: needs at least two samples");
  if (data.class_count(0) == 0 || data.class_count(1) == 0) {
    throw std::invalid_argument("rank: both classes must be present");
  }

  Vector<Scalar> lab(n);
  for (Index i = 0; i < n; ++i) lab[i] = Scalar(data.label(i));
  lab.array() -= lab.mean();
  const Scalar lab_norm = lab.norm();

  const auto& x = data.features();
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> col_means = x.colwise().mean();
  RowMatrix<Scalar> centered = x.rowwise() - col_means;
  Vector<Scalar> numer = centered.transpose() * lab;
  Vector<Scalar> col_norms = centered.colwise().norm().transpose();

  std::vector<std::pair<Index, Scalar>> ranked;
  ranked.reserve(static_cast<std::size_t>(data.dim()));
  for (Index j = 0; j < data.dim(); ++j) {
    const Scalar denom = col_norms[j] * lab_norm;
    const Scalar r = denom > Scalar(0) ? numer[j] / denom : Scalar(0);
    ranked.emplace_back(j, std::abs(r));
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

/// New dataset keeping the given feature columns, in the given order.
template <typename Scalar>
Dataset<Scalar> project_features(const Dataset<Scalar>& data,
                                 const std::vector<Index>& indices) {
  if (indices.empty()) throw std::invalid_argument("project: empty index list");
  std::vector<char> seen(static_cast<std::size_t>(data.dim()), 0);
  for (Index j : indices) {
    if (j < 0 || j >= data.dim()) {
      throw std::invalid_argument("project: feature index " + std::to_string(j) +
                                  " out of range");
    }
    if (seen[static_cast<std::size_t>(j)]++) {
      throw std::invalid_argument("project: duplicate feature index " +
                                  std::to_string(j));
    }
  }
  RowMatrix<Scalar> f(data.size(), static_cast<Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    f.col(static_cast<Index>(k)) = data.features().col(indices[k]);
  }
  return Dataset<Scalar>(std::move(f), data.labels());
}

}  // namespace bayesda
