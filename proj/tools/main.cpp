// Command-line interface: simulation, feature ranking, prediction, LOOCV
// evaluation, ROC extraction and the simulated benchmark table.
//
// Exit codes: 0 success, 1 validation/usage error, 2 computation error.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bayesda/dataset.hpp"
#include "bayesda/evaluation.hpp"
#include "bayesda/io.hpp"
#include "bayesda/posterior.hpp"
#include "bayesda/predictors.hpp"
#include "bayesda/simulate.hpp"
#include "bayesda/types.hpp"

namespace {

using namespace bayesda;

struct CommonPredictorFlags {
  std::string method = "lold";
  int hermite_nodes = 40;
  int chisquare_nodes = 60;
  std::string lold_form = "sigmoid";
  bool lold_imbalance_correction = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--method", method, "Predictor: fd, ld, lold or baseline")
        ->check(CLI::IsMember({"fd", "ld", "lold", "baseline"}));
    cmd->add_option("--hermite-nodes", hermite_nodes,
                    "Gauss-Hermite nodes per Gaussian dimension");
    cmd->add_option("--chisquare-nodes", chisquare_nodes,
                    "Nodes per chi-square dimension (fd only)");
    cmd->add_option("--lold-form", lold_form, "lold score form: sigmoid or step")
        ->check(CLI::IsMember({"sigmoid", "step"}));
    cmd->add_flag("--lold-imbalance-correction", lold_imbalance_correction,
                  "Reinstate the subleading log(E)/d imbalance term in lold");
  }

  PredictorConfig config() const {
    PredictorConfig c;
    c.method = parse_method(method);
    c.hermite_nodes = hermite_nodes;
    c.chisquare_nodes = chisquare_nodes;
    c.lold_form = lold_form == "step" ? LoldForm::step : LoldForm::sigmoid;
    c.lold_imbalance_correction = lold_imbalance_correction;
    return c;
  }
};

void warn_if_unconverged(const std::optional<double>& delta, bool converged) {
  if (delta && !converged) {
    std::cerr << "warning: quadrature not converged (doubling nodes changed the "
                 "probability by "
              << *delta << "); increase node counts\n";
  }
}

int cmd_simulate(const SimConfig& sim, const std::string& out) {
  write_dataset(out, simulate_dataset(sim));
  return 0;
}

int cmd_rank(const std::string& data_path, Index top_k, const std::string& out,
             const std::string& projected_out) {
  const auto data = load_dataset(data_path);
  auto ranked = rank_features_by_correlation(data);
  if (top_k > 0) {
    if (top_k > static_cast<Index>(ranked.size())) {
      throw std::invalid_argument("rank: --top-k exceeds feature count");
    }
    ranked.resize(static_cast<std::size_t>(top_k));
  }
  write_ranking_csv(out, ranked);
  if (!projected_out.empty()) {
    std::vector<Index> indices;
    indices.reserve(ranked.size());
    for (const auto& [index, corr] : ranked) indices.push_back(index);
    write_dataset(projected_out, project_features(data, indices));
  }
  return 0;
}

int cmd_predict(const std::string& train_path, const std::string& query_path,
                const CommonPredictorFlags& flags, double threshold,
                const std::string& out) {
  const auto train = load_dataset(train_path);
  const auto queries = load_query_matrix(query_path);
  if (queries.cols() != train.dim()) {
    throw std::invalid_argument(
        "predict: query has " + std::to_string(queries.cols()) +
        " feature column(s) but the training set has " + std::to_string(train.dim()));
  }
  const PredictorConfig config = flags.config();
  validate(config);

  const auto s0 = summarize_class(train, 0);
  const auto s1 = summarize_class(train, 1);
  const double total = static_cast<double>(train.size());
  const std::pair<double, double> imbalance{s0.n / total, s1.n / total};

  std::optional<FdIntegrator<double>> fd;
  std::optional<LdIntegrator<double>> ld;
  std::optional<ClassPosterior<double>> post0, post1;
  if (config.method != Method::baseline) {
    post0 = fit_hyperparameters(s0, train.dim());
    post1 = fit_hyperparameters(s1, train.dim());
    if (config.method == Method::fd) {
      fd.emplace(train.dim(), config.hermite_nodes, config.chisquare_nodes);
    } else if (config.method == Method::ld) {
      ld.emplace(train.dim(), config.hermite_nodes);
    }
  }

  std::ofstream file = detail::open_output(out);
  file << "index,probability,label\n";
  bool checked = false;
  for (Index i = 0; i < queries.rows(); ++i) {
    const auto query = queries.row(i).transpose();
    double p = 0;
    if (config.method == Method::baseline) {
      p = predict_plugin_baseline(s0, s1, imbalance, query);
    } else {
      const auto stats = predictive_statistics(*post0, *post1, imbalance, query);
      switch (config.method) {
        case Method::fd: p = fd->probability(stats); break;
        case Method::ld: p = ld->probability(stats); break;
        default: p = predict_lold(stats, config);
      }
      if (!checked && (config.method == Method::fd || config.method == Method::ld)) {
        checked = true;
        const auto check = check_quadrature_convergence(stats, config);
        warn_if_unconverged(static_cast<double>(check.delta), check.converged);
      }
    }
    file << i << ',' << detail::format_double(p) << ',' << classify(p, threshold)
         << '\n';
  }
  return 0;
}

int cmd_loocv(const std::string& data_path, const CommonPredictorFlags& flags,
              double threshold, int threads, const std::string& out,
              std::string report_path) {
  const auto data = load_dataset(data_path);
  const PredictorConfig config = flags.config();
  std::vector<ScoredSample> held_out;
  const auto report = evaluate_loocv(data, config, threshold, threads, &held_out);
  write_scores_csv(out, held_out);
  warn_if_unconverged(report.quadrature_delta, report.quadrature_converged);

  if (report_path.empty()) report_path = out + ".report.json";
  ReportFile file;
  file.report = report;
  file.config = config;
  file.threads = threads;
  write_report_file(report_path, file);
  std::cout << "accuracy " << detail::format_double(report.accuracy) << "\n"
            << "auc " << detail::format_double(report.auc) << "\n"
            << "wall_time_sec " << detail::format_double(report.wall_time_sec)
            << "\n";
  return 0;
}

int cmd_roc(const std::string& scores_path, const std::string& out) {
  auto scored = load_scores_csv(scores_path);
  const auto points = roc_curve(scored);
  write_roc_csv(out, points);
  std::cout << "auc " << detail::format_double(auc(points)) << "\n";
  return 0;
}

int cmd_benchmark(const SimConfig& base, const std::vector<Index>& dims,
                  const std::vector<std::string>& method_names, int repeats,
                  std::uint64_t seed, double threshold, int hermite_nodes,
                  int chisquare_nodes, bool no_dim_limits, int threads,
                  const std::string& out, std::string report_dir) {
  BenchmarkSpec spec;
  spec.base = base;
  spec.dims = dims;
  for (const auto& name : method_names) spec.methods.push_back(parse_method(name));
  spec.repeats = repeats;
  spec.seed = seed;
  spec.threshold = threshold;
  spec.hermite_nodes = hermite_nodes;
  spec.chisquare_nodes = chisquare_nodes;
  spec.enforce_dim_limits = !no_dim_limits;
  spec.n_threads = threads;

  const auto reports = benchmark_table(spec);
  write_benchmark_csv(out, reports);

  if (report_dir.empty()) {
    report_dir = std::filesystem::path(out).parent_path().string();
    if (report_dir.empty()) report_dir = ".";
  }
  std::filesystem::create_directories(report_dir);
  for (const auto& report : reports) {
    ReportFile file;
    file.report = report;
    file.config.method = report.method;
    file.config.hermite_nodes = hermite_nodes;
    file.config.chisquare_nodes = chisquare_nodes;
    file.threads = threads;
    file.seed = seed;
    const std::string name = std::string("report_") + method_name(report.method) +
                             "_d" + std::to_string(report.d) + ".json";
    write_report_file((std::filesystem::path(report_dir) / name).string(), file);
    warn_if_unconverged(report.quadrature_delta, report.quadrature_converged);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic Bayesian binary outcome prediction for arbitrary dimension"};
  app.require_subcommand(1);

  // simulate
  SimConfig sim;
  std::string sim_out;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Write a two-class isotropic Gaussian dataset");
  simulate_cmd->add_option("--n0", sim.n0, "Class-0 sample count");
  simulate_cmd->add_option("--n1", sim.n1, "Class-1 sample count");
  simulate_cmd->add_option("--d", sim.d, "Dimension")->required();
  simulate_cmd->add_option("--mu0", sim.mu0, "Class-0 per-coordinate mean");
  simulate_cmd->add_option("--mu1", sim.mu1, "Class-1 per-coordinate mean");
  simulate_cmd->add_option("--lambda0", sim.lambda0, "Class-0 standard deviation");
  simulate_cmd->add_option("--lambda1", sim.lambda1, "Class-1 standard deviation");
  simulate_cmd->add_option("--seed", sim.seed, "RNG seed");
  simulate_cmd->add_option("--out", sim_out, "Output dataset CSV")->required();

  // rank
  std::string rank_data, rank_out, rank_projected;
  Index rank_top_k = 0;
  auto* rank_cmd =
      app.add_subcommand("rank", "Rank features by |correlation| with the label");
  rank_cmd->add_option("--data", rank_data, "Dataset CSV")->required();
  rank_cmd->add_option("--top-k", rank_top_k, "Keep only the top k features");
  rank_cmd->add_option("--out", rank_out, "Ranking CSV")->required();
  rank_cmd->add_option("--projected-out", rank_projected,
                       "Also write the dataset projected onto the ranked features");

  // predict
  std::string predict_train, predict_query, predict_out;
  double predict_threshold = 0.5;
  CommonPredictorFlags predict_flags;
  auto* predict_cmd =
      app.add_subcommand("predict", "Score query points against a training set");
  predict_cmd->add_option("--train", predict_train, "Training dataset CSV")->required();
  predict_cmd->add_option("--query", predict_query, "Query CSV (features only)")
      ->required();
  predict_cmd->add_option("--threshold", predict_threshold, "Decision threshold");
  predict_cmd->add_option("--out", predict_out, "Output CSV")->required();
  predict_flags.attach(predict_cmd);

  // loocv
  std::string loocv_data, loocv_out, loocv_report;
  double loocv_threshold = 0.5;
  int loocv_threads = 1;
  CommonPredictorFlags loocv_flags;
  auto* loocv_cmd =
      app.add_subcommand("loocv", "Leave-one-out evaluation of one dataset");
  loocv_cmd->add_option("--data", loocv_data, "Dataset CSV")->required();
  loocv_cmd->add_option("--threshold", loocv_threshold, "Decision threshold");
  loocv_cmd->add_option("--threads", loocv_threads, "Worker threads");
  loocv_cmd->add_option("--out", loocv_out, "Held-out scores CSV")->required();
  loocv_cmd->add_option("--report", loocv_report,
                        "Report JSON path (default: <out>.report.json)");
  loocv_flags.attach(loocv_cmd);

  // roc
  std::string roc_scores, roc_out;
  auto* roc_cmd = app.add_subcommand("roc", "ROC curve and AUC from a scores CSV");
  roc_cmd->add_option("--scores", roc_scores, "Scores CSV (from loocv)")->required();
  roc_cmd->add_option("--out", roc_out, "ROC points CSV")->required();

  // benchmark
  SimConfig bench_base;
  std::vector<Index> bench_dims;
  std::vector<std::string> bench_methods;
  int bench_repeats = 10;
  std::uint64_t bench_seed = 0;
  double bench_threshold = 0.5;
  int bench_hermite = 40, bench_chisquare = 60, bench_threads = 1;
  bool bench_no_limits = false;
  std::string bench_out, bench_report_dir;
  auto* bench_cmd = app.add_subcommand(
      "benchmark", "Accuracy table over simulated datasets of several dimensions");
  bench_cmd->add_option("--dims", bench_dims, "Dimensions, comma separated")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--methods", bench_methods, "Methods, comma separated")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--repeats", bench_repeats, "Simulated datasets per cell");
  bench_cmd->add_option("--seed", bench_seed, "Master seed");
  bench_cmd->add_option("--threshold", bench_threshold, "Decision threshold");
  bench_cmd->add_option("--n0", bench_base.n0, "Class-0 sample count");
  bench_cmd->add_option("--n1", bench_base.n1, "Class-1 sample count");
  bench_cmd->add_option("--mu0", bench_base.mu0, "Class-0 per-coordinate mean");
  bench_cmd->add_option("--mu1", bench_base.mu1, "Class-1 per-coordinate mean");
  bench_cmd->add_option("--lambda0", bench_base.lambda0, "Class-0 standard deviation");
  bench_cmd->add_option("--lambda1", bench_base.lambda1, "Class-1 standard deviation");
  bench_cmd->add_option("--hermite-nodes", bench_hermite, "Gauss-Hermite nodes");
  bench_cmd->add_option("--chisquare-nodes", bench_chisquare, "Chi-square nodes");
  bench_cmd->add_flag("--no-dim-limits", bench_no_limits,
                      "Allow fd beyond d = 10 and ld beyond d = 100");
  bench_cmd->add_option("--threads", bench_threads, "Worker threads");
  bench_cmd->add_option("--out", bench_out, "Benchmark table CSV")->required();
  bench_cmd->add_option("--report-dir", bench_report_dir,
                        "Directory for per-cell report JSON files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(sim, sim_out);
    if (rank_cmd->parsed()) {
      return cmd_rank(rank_data, rank_top_k, rank_out, rank_projected);
    }
    if (predict_cmd->parsed()) {
      return cmd_predict(predict_train, predict_query, predict_flags,
                         predict_threshold, predict_out);
    }
    if (loocv_cmd->parsed()) {
      return cmd_loocv(loocv_data, loocv_flags, loocv_threshold, loocv_threads,
                       loocv_out, loocv_report);
    }
    if (roc_cmd->parsed()) return cmd_roc(roc_scores, roc_out);
    if (bench_cmd->parsed()) {
      return cmd_benchmark(bench_base, bench_dims, bench_methods, bench_repeats,
                           bench_seed, bench_threshold, bench_hermite,
                           bench_chisquare, bench_no_limits, bench_threads,
                           bench_out, bench_report_dir);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
