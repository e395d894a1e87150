#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bayesda/dataset.hpp"
#include "bayesda/posterior.hpp"
#include "bayesda/predictors.hpp"
#include "bayesda/rng.hpp"
#include "bayesda/simulate.hpp"
#include "bayesda/types.hpp"

namespace bayesda {

enum class FoldTag { loocv_held_out, training };

inline const char* fold_tag_name(FoldTag tag) {
  return tag == FoldTag::loocv_held_out ? "loocv-held-out" : "training";
}

struct ScoredSample {
  Index index = 0;
  int true_label = 0;
  double score = 0;
  FoldTag fold = FoldTag::loocv_held_out;
};

struct RocPoint {
  double fpr = 0;
  double tpr = 0;
};

struct EvaluationReport {
  Method method = Method::lold;
  Index d = 0;
  double threshold = 0.5;
  double accuracy = 0;
  double train_error = 0;
  double test_error = 0;
  std::vector<RocPoint> roc;
  double auc = 0;
  double wall_time_sec = 0;
  int repeats = 1;
  double accuracy_std_error = 0;
  // Doubled-node self-check of the quadrature predictors; empty for the
  // closed-form and baseline methods.
  std::optional<double> quadrature_delta;
  bool quadrature_converged = true;
};

namespace detail {

// One leave-one-out fold: statistics are rebuilt by direct summation over the
// remaining samples, never by downdating cached totals, so the held-out row
// cannot influence its own fold's fit.
template <typename Scalar>
double score_fold(const Dataset<Scalar>& data, Index held_out,
                  const PredictorConfig& config,
                  const FdIntegrator<Scalar>* fd, const LdIntegrator<Scalar>* ld) {
  const int held_label = data.label(held_out);
  const Index n0 = data.class_count(0) - (held_label == 0 ? 1 : 0);
  const Index n1 = data.class_count(1) - (held_label == 1 ? 1 : 0);
  if (n0 < 2 || n1 < 2) {
    const int bad = n0 < 2 ? 0 : 1;
    throw std::runtime_error(
        "loocv: holding out sample " + std::to_string(held_out) + " leaves class " +
        std::to_string(bad) + " with " + std::to_string(bad == 0 ? n0 : n1) +
        " sample(s) (degenerate class size)");
  }
  const auto s0 = detail::summarize_with_skip(data, 0, held_out);
  const auto s1 = detail::summarize_with_skip(data, 1, held_out);
  const Scalar total = Scalar(n0 + n1);
  const std::pair<Scalar, Scalar> imbalance{Scalar(n0) / total, Scalar(n1) / total};
  const auto query = data.sample(held_out);

  if (config.method == Method::baseline) {
    return static_cast<double>(predict_plugin_baseline(s0, s1, imbalance, query));
  }
  const auto post0 = fit_hyperparameters(s0, data.dim());
  const auto post1 = fit_hyperparameters(s1, data.dim());
  const auto stats = predictive_statistics(post0, post1, imbalance, query);
  switch (config.method) {
    case Method::fd: return static_cast<double>(fd->probability(stats));
    case Method::ld: return static_cast<double>(ld->probability(stats));
    default: return static_cast<double>(predict_lold(stats, config));
  }
}

// Runs body(i) for i in [0, count), optionally across threads. Results must
// be written by index; any thrown exception is rethrown for the lowest index.
template <typename Body>
void parallel_for_index(Index count, int n_threads, Body&& body) {
  const int workers =
      static_cast<int>(std::min<Index>(std::max(n_threads, 1), count));
  if (workers <= 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (Index i = w; i < count; i += workers) {
        try {
          body(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Leave-one-out scores in dataset order: fold i refits every statistic on
/// the other N - 1 samples (including the class proportions) and scores
/// sample i. Folds are independent, so scores are identical for any thread
/// count.
template <typename Scalar>
std::vector<ScoredSample> loocv(const Dataset<Scalar>& data,
                                const PredictorConfig& config, int n_threads = 1) {
  validate(config);
  std::optional<FdIntegrator<Scalar>> fd;
  std::optional<LdIntegrator<Scalar>> ld;
  if (config.method == Method::fd) {
    fd.emplace(data.dim(), config.hermite_nodes, config.chisquare_nodes);
  } else if (config.method == Method::ld) {
    ld.emplace(data.dim(), config.hermite_nodes);
  }

  std::vector<ScoredSample> scored(static_cast<std::size_t>(data.size()));
  detail::parallel_for_index(data.size(), n_threads, [&](Index i) {
    const double p = detail::score_fold(data, i, config, fd ? &*fd : nullptr,
                                        ld ? &*ld : nullptr);
    scored[static_cast<std::size_t>(i)] =
        ScoredSample{i, data.label(i), p, FoldTag::loocv_held_out};
  });
  return scored;
}

/// In-sample scores: fit once on the full dataset, score every training row.
template <typename Scalar>
std::vector<ScoredSample> training_scores(const Dataset<Scalar>& data,
                                          const PredictorConfig& config,
                                          int n_threads = 1) {
  validate(config);
  const auto s0 = summarize_class(data, 0);
  const auto s1 = summarize_class(data, 1);
  if (s0.n < 2 || s1.n < 2) {
    throw std::invalid_argument("training scores: need >= 2 samples per class");
  }
  const Scalar total = Scalar(data.size());
  const std::pair<Scalar, Scalar> imbalance{Scalar(s0.n) / total, Scalar(s1.n) / total};

  std::optional<FdIntegrator<Scalar>> fd;
  std::optional<LdIntegrator<Scalar>> ld;
  std::optional<ClassPosterior<Scalar>> post0, post1;
  if (config.method != Method::baseline) {
    post0 = fit_hyperparameters(s0, data.dim());
    post1 = fit_hyperparameters(s1, data.dim());
    if (config.method == Method::fd) {
      fd.emplace(data.dim(), config.hermite_nodes, config.chisquare_nodes);
    } else if (config.method == Method::ld) {
      ld.emplace(data.dim(), config.hermite_nodes);
    }
  }

  std::vector<ScoredSample> scored(static_cast<std::size_t>(data.size()));
  detail::parallel_for_index(data.size(), n_threads, [&](Index i) {
    const auto query = data.sample(i);
    double p = 0;
    if (config.method == Method::baseline) {
      p = static_cast<double>(predict_plugin_baseline(s0, s1, imbalance, query));
    } else {
      const auto stats = predictive_statistics(*post0, *post1, imbalance, query);
      switch (config.method) {
        case Method::fd: p = static_cast<double>(fd->probability(stats)); break;
        case Method::ld: p = static_cast<double>(ld->probability(stats)); break;
        default: p = static_cast<double>(predict_lold(stats, config));
      }
    }
    scored[static_cast<std::size_t>(i)] =
        ScoredSample{i, data.label(i), p, FoldTag::training};
  });
  return scored;
}

/// Statistics of one leave-one-out fold, exposed for diagnostics and tests.
template <typename Scalar>
PredictiveStats<Scalar> fold_statistics(const Dataset<Scalar>& data, Index held_out) {
  const auto s0 = detail::summarize_with_skip(data, 0, held_out);
  const auto s1 = detail::summarize_with_skip(data, 1, held_out);
  const Scalar total = Scalar(s0.n + s1.n);
  const auto post0 = fit_hyperparameters(s0, data.dim());
  const auto post1 = fit_hyperparameters(s1, data.dim());
  return predictive_statistics(post0, post1,
                               {Scalar(s0.n) / total, Scalar(s1.n) / total},
                               data.sample(held_out));
}

/// Fraction of samples misclassified at the given threshold.
inline double error_rate(const std::vector<ScoredSample>& scored, double threshold) {
  if (scored.empty()) throw std::invalid_argument("error rate: no scores");
  std::size_t wrong = 0;
  for (const auto& s : scored) {
    wrong += classify(s.score, threshold) != s.true_label ? 1u : 0u;
  }
  return static_cast<double>(wrong) / static_cast<double>(scored.size());
}

/// Threshold sweep over the distinct scores (descending, preceded by a +inf
/// sentinel). Points are (false positive rate, true positive rate), starting
/// at (0,0), ending at (1,1), non-decreasing in both coordinates.
inline std::vector<RocPoint> roc_curve(const std::vector<ScoredSample>& scored) {
  std::int64_t positives = 0, negatives = 0;
  for (const auto& s : scored) (s.true_label == 1 ? positives : negatives)++;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("roc: both labels must be present");
  }

  std::vector<std::pair<double, int>> by_score;
  by_score.reserve(scored.size());
  for (const auto& s : scored) by_score.emplace_back(s.score, s.true_label);
  std::sort(by_score.begin(), by_score.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  std::vector<RocPoint> points;
  points.push_back({0.0, 0.0});
  std::int64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < by_score.size()) {
    const double s = by_score[i].first;
    for (; i < by_score.size() && by_score[i].first == s; ++i) {
      (by_score[i].second == 1 ? tp : fp)++;
    }
    points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                      static_cast<double>(tp) / static_cast<double>(positives)});
  }
  return points;
}

/// Trapezoidal area under a ROC polyline.
inline double auc(const std::vector<RocPoint>& roc) {
  if (roc.size() < 2) throw std::invalid_argument("auc: need at least two points");
  double area = 0;
  for (std::size_t k = 1; k < roc.size(); ++k) {
    area += (roc[k].fpr - roc[k - 1].fpr) * (roc[k].tpr + roc[k - 1].tpr) / 2.0;
  }
  return area;
}

/// Full single-dataset evaluation: LOOCV plus in-sample scoring, errors at
/// the threshold, ROC/AUC over the held-out scores, and wall time.
template <typename Scalar>
EvaluationReport evaluate_loocv(const Dataset<Scalar>& data,
                                const PredictorConfig& config, double threshold,
                                int n_threads = 1,
                                std::vector<ScoredSample>* held_out_scores = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  auto held_out = loocv(data, config, n_threads);
  auto in_sample = training_scores(data, config, n_threads);
  EvaluationReport report;
  report.method = config.method;
  report.d = data.dim();
  report.threshold = threshold;
  report.test_error = error_rate(held_out, threshold);
  report.accuracy = 1.0 - report.test_error;
  report.train_error = error_rate(in_sample, threshold);
  report.roc = roc_curve(held_out);
  report.auc = auc(report.roc);
  if (config.method == Method::fd || config.method == Method::ld) {
    const auto check =
        check_quadrature_convergence(fold_statistics(data, Index(0)), config);
    report.quadrature_delta = static_cast<double>(check.delta);
    report.quadrature_converged = check.converged;
  }
  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (held_out_scores) *held_out_scores = std::move(held_out);
  return report;
}

/// Simulated benchmark: for each (dimension, method) cell, `repeats` seeded
/// datasets are generated, evaluated by LOOCV and averaged. Dataset seeds
/// depend only on (seed, d, repeat), so every method sees identical data.
struct BenchmarkSpec {
  SimConfig base;  // d is overridden per cell
  std::vector<Index> dims;
  std::vector<Method> methods;
  int repeats = 10;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  int hermite_nodes = 40;
  int chisquare_nodes = 60;
  // Mirrors the dimensions the quadrature methods are intended for.
  bool enforce_dim_limits = true;
  int n_threads = 1;
};

inline std::vector<EvaluationReport> benchmark_table(const BenchmarkSpec& spec) {
  if (spec.dims.empty() || spec.methods.empty() || spec.repeats < 1) {
    throw std::invalid_argument("benchmark: need dims, methods and repeats >= 1");
  }
  if (spec.enforce_dim_limits) {
    for (Index d : spec.dims) {
      for (Method m : spec.methods) {
        if ((m == Method::fd && d > 10) || (m == Method::ld && d > 100)) {
          throw std::invalid_argument(
              std::string("benchmark: method ") + method_name(m) + " at d = " +
              std::to_string(d) +
              " exceeds its default dimension limit (override to run anyway)");
        }
      }
    }
  }

  std::vector<EvaluationReport> reports;
  for (Index d : spec.dims) {
    // One dataset per repeat, shared across methods.
    std::vector<Dataset<double>> datasets;
    datasets.reserve(static_cast<std::size_t>(spec.repeats));
    for (int r = 0; r < spec.repeats; ++r) {
      SimConfig sim = spec.base;
      sim.d = d;
      sim.seed = stream_key(stream_key(spec.seed, static_cast<std::uint64_t>(d)),
                            static_cast<std::uint64_t>(r));
      datasets.push_back(simulate_dataset(sim));
    }
    for (Method m : spec.methods) {
      PredictorConfig config;
      config.method = m;
      config.hermite_nodes = spec.hermite_nodes;
      config.chisquare_nodes = spec.chisquare_nodes;

      EvaluationReport cell;
      cell.method = m;
      cell.d = d;
      cell.threshold = spec.threshold;
      cell.repeats = spec.repeats;
      std::vector<ScoredSample> pooled;
      std::vector<double> accuracies;
      double test_sum = 0, train_sum = 0, wall = 0;
      for (const auto& data : datasets) {
        const auto start = std::chrono::steady_clock::now();
        auto held_out = loocv(data, config, spec.n_threads);
        auto in_sample = training_scores(data, config, spec.n_threads);
        wall += std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
        const double test_err = error_rate(held_out, spec.threshold);
        accuracies.push_back(1.0 - test_err);
        test_sum += test_err;
        train_sum += error_rate(in_sample, spec.threshold);
        pooled.insert(pooled.end(), held_out.begin(), held_out.end());
        if (!cell.quadrature_delta &&
            (m == Method::fd || m == Method::ld)) {
          const auto check = check_quadrature_convergence(
              fold_statistics(data, Index(0)), config);
          cell.quadrature_delta = static_cast<double>(check.delta);
          cell.quadrature_converged = check.converged;
        }
      }
      cell.test_error = test_sum / spec.repeats;
      cell.accuracy = 1.0 - cell.test_error;
      cell.train_error = train_sum / spec.repeats;
      if (accuracies.size() > 1) {
        const double mean = 1.0 - cell.test_error;
        double ss = 0;
        for (double a : accuracies) ss += (a - mean) * (a - mean);
        cell.accuracy_std_error = std::sqrt(
            ss / (static_cast<double>(accuracies.size()) - 1.0) /
            static_cast<double>(accuracies.size()));
      }
      cell.roc = roc_curve(pooled);
      cell.auc = auc(cell.roc);
      cell.wall_time_sec = wall;
      reports.push_back(std::move(cell));
    }
  }
  return reports;
}

}  // namespace bayesda
