#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bayesda/dataset.hpp"
#include "bayesda/evaluation.hpp"
#include "bayesda/predictors.hpp"
#include "bayesda/types.hpp"

namespace bayesda {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

inline bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc() && result.ptr == end;
}

inline std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
  return out;
}

// Reads a rectangular numeric CSV, auto-skipping a header row (any first-row
// cell that does not parse as a number). Returns per-row cell values; errors
// carry 1-based row/column positions counted over the whole file.
inline std::vector<std::vector<double>> read_numeric_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected = 0;
  bool first_content_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    std::vector<double> values(cells.size());
    bool all_numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_double(cells[c], values[c])) {
        all_numeric = false;
        bad_col = c + 1;
        break;
      }
    }
    if (!all_numeric) {
      if (first_content_row) {
        first_content_row = false;  // header row
        continue;
      }
      throw std::invalid_argument(path + ": row " + std::to_string(line_no) +
                                  " column " + std::to_string(bad_col) +
                                  ": not a number");
    }
    first_content_row = false;
    if (expected == 0) {
      expected = values.size();
    } else if (values.size() != expected) {
      throw std::invalid_argument(path + ": row " + std::to_string(line_no) +
                                  " has " + std::to_string(values.size()) +
                                  " cells, expected " + std::to_string(expected));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::invalid_argument(path + ": no data rows");
  return rows;
}

}  // namespace detail

/// Reads a labeled dataset: first column is the 0/1 label, the remaining
/// columns are features. A header row is auto-detected and skipped.
inline Dataset<double> load_dataset(const std::string& path) {
  const auto rows = detail::read_numeric_csv(path);
  const std::size_t cols = rows.front().size();
  if (cols < 2) {
    throw std::invalid_argument(path + ": need a label column plus features");
  }
  const Index n = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(cols - 1);
  RowMatrix<double> features(n, d);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    const double lab = row[0];
    if (lab != 0.0 && lab != 1.0) {
      throw std::invalid_argument(path + ": non-binary label '" +
                                  detail::format_double(lab) + "' at data row " +
                                  std::to_string(i + 1));
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(lab);
    for (Index j = 0; j < d; ++j) {
      const double v = row[static_cast<std::size_t>(j + 1)];
      if (!std::isfinite(v)) {
        throw std::invalid_argument(path + ": non-finite feature at data row " +
                                    std::to_string(i + 1) + " column " +
                                    std::to_string(j + 2));
      }
      features(i, j) = v;
    }
  }
  return Dataset<double>(std::move(features), std::move(labels));
}

inline void write_dataset(const std::string& path, const Dataset<double>& data) {
  std::ofstream out = detail::open_output(path);
  out << "label";
  for (Index j = 0; j < data.dim(); ++j) out << ",x" << j;
  out << '\n';
  for (Index i = 0; i < data.size(); ++i) {
    out << data.label(i);
    for (Index j = 0; j < data.dim(); ++j) {
      out << ',' << detail::format_double(data.features()(i, j));
    }
    out << '\n';
  }
}

/// Reads an unlabeled query matrix: every column is a feature.
inline RowMatrix<double> load_query_matrix(const std::string& path) {
  const auto rows = detail::read_numeric_csv(path);
  const Index n = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(rows.front().size());
  RowMatrix<double> queries(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      const double v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!std::isfinite(v)) {
        throw std::invalid_argument(path + ": non-finite value at data row " +
                                    std::to_string(i + 1) + " column " +
                                    std::to_string(j + 1));
      }
      queries(i, j) = v;
    }
  }
  return queries;
}

inline void write_scores_csv(const std::string& path,
                             const std::vector<ScoredSample>& scored) {
  std::ofstream out = detail::open_output(path);
  out << "index,true_label,score,fold\n";
  for (const auto& s : scored) {
    out << s.index << ',' << s.true_label << ',' << detail::format_double(s.score)
        << ',' << fold_tag_name(s.fold) << '\n';
  }
}

inline std::vector<ScoredSample> load_scores_csv(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  std::vector<ScoredSample> scored;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (first) {
      first = false;
      double probe = 0;
      if (!detail::parse_double(cells[0], probe)) continue;  // header
    }
    if (cells.size() != 4) {
      throw std::invalid_argument(path + ": row " + std::to_string(line_no) +
                                  " has " + std::to_string(cells.size()) +
                                  " cells, expected 4");
    }
    ScoredSample s;
    double idx = 0, lab = 0;
    if (!detail::parse_double(cells[0], idx) || !detail::parse_double(cells[1], lab) ||
        !detail::parse_double(cells[2], s.score)) {
      throw std::invalid_argument(path + ": row " + std::to_string(line_no) +
                                  ": malformed score row");
    }
    if (lab != 0.0 && lab != 1.0) {
      throw std::invalid_argument(path + ": non-binary label at row " +
                                  std::to_string(line_no));
    }
    if (!(s.score >= 0.0 && s.score <= 1.0)) {
      throw std::invalid_argument(path + ": score outside [0, 1] at row " +
                                  std::to_string(line_no));
    }
    s.index = static_cast<Index>(idx);
    s.true_label = static_cast<int>(lab);
    const std::string fold(cells[3]);
    if (fold == fold_tag_name(FoldTag::loocv_held_out)) {
      s.fold = FoldTag::loocv_held_out;
    } else if (fold == fold_tag_name(FoldTag::training)) {
      s.fold = FoldTag::training;
    } else {
      throw std::invalid_argument(path + ": unknown fold tag '" + fold + "' at row " +
                                  std::to_string(line_no));
    }
    scored.push_back(s);
  }
  if (scored.empty()) throw std::invalid_argument(path + ": no score rows");
  return scored;
}

inline void write_roc_csv(const std::string& path, const std::vector<RocPoint>& roc) {
  std::ofstream out = detail::open_output(path);
  out << "fpr,tpr\n";
  for (const auto& p : roc) {
    out << detail::format_double(p.fpr) << ',' << detail::format_double(p.tpr) << '\n';
  }
}

inline void write_ranking_csv(const std::string& path,
                              const std::vector<std::pair<Index, double>>& ranked) {
  std::ofstream out = detail::open_output(path);
  out << "feature_index,abs_correlation\n";
  for (const auto& [index, corr] : ranked) {
    out << index << ',' << detail::format_double(corr) << '\n';
  }
}

inline void write_benchmark_csv(const std::string& path,
                                const std::vector<EvaluationReport>& reports) {
  std::ofstream out = detail::open_output(path);
  out << "d,method,threshold,accuracy,accuracy_std_error,train_error,test_error,"
         "auc,repeats,wall_time_sec\n";
  for (const auto& r : reports) {
    out << r.d << ',' << method_name(r.method) << ','
        << detail::format_double(r.threshold) << ','
        << detail::format_double(r.accuracy) << ','
        << detail::format_double(r.accuracy_std_error) << ','
        << detail::format_double(r.train_error) << ','
        << detail::format_double(r.test_error) << ','
        << detail::format_double(r.auc) << ',' << r.repeats << ','
        << detail::format_double(r.wall_time_sec) << '\n';
  }
}

/// Evaluation report plus everything needed to audit it: the predictor
/// configuration, the seed when one applies, the artifact version and the
/// resolved imbalance sign convention.
struct ReportFile {
  EvaluationReport report;
  PredictorConfig config;
  int threads = 1;
  std::optional<std::uint64_t> seed;
  std::string artifact_version = kVersion;
  std::string log_e_convention = kLogESignConvention;
};

inline nlohmann::json to_json(const ReportFile& file) {
  nlohmann::json j;
  j["artifact_version"] = file.artifact_version;
  j["log_e_convention"] = file.log_e_convention;
  if (file.seed) {
    j["seed"] = *file.seed;
  } else {
    j["seed"] = nullptr;
  }
  j["threads"] = file.threads;
  j["config"] = {
      {"method", method_name(file.config.method)},
      {"hermite_nodes", file.config.hermite_nodes},
      {"chisquare_nodes", file.config.chisquare_nodes},
      {"lold_form", file.config.lold_form == LoldForm::step ? "step" : "sigmoid"},
      {"lold_imbalance_correction", file.config.lold_imbalance_correction},
  };
  const auto& r = file.report;
  nlohmann::json roc = nlohmann::json::array();
  for (const auto& p : r.roc) roc.push_back({p.fpr, p.tpr});
  j["report"] = {
      {"method", method_name(r.method)},
      {"d", r.d},
      {"threshold", r.threshold},
      {"accuracy", r.accuracy},
      {"train_error", r.train_error},
      {"test_error", r.test_error},
      {"roc", std::move(roc)},
      {"auc", r.auc},
      {"wall_time_sec", r.wall_time_sec},
      {"repeats", r.repeats},
      {"accuracy_std_error", r.accuracy_std_error},
      {"quadrature_converged", r.quadrature_converged},
  };
  if (r.quadrature_delta) {
    j["report"]["quadrature_delta"] = *r.quadrature_delta;
  } else {
    j["report"]["quadrature_delta"] = nullptr;
  }
  return j;
}

inline ReportFile report_file_from_json(const nlohmann::json& j) {
  ReportFile file;
  file.artifact_version = j.at("artifact_version").get<std::string>();
  file.log_e_convention = j.at("log_e_convention").get<std::string>();
  if (!j.at("seed").is_null()) file.seed = j.at("seed").get<std::uint64_t>();
  file.threads = j.at("threads").get<int>();
  const auto& c = j.at("config");
  file.config.method = parse_method(c.at("method").get<std::string>());
  file.config.hermite_nodes = c.at("hermite_nodes").get<int>();
  file.config.chisquare_nodes = c.at("chisquare_nodes").get<int>();
  file.config.lold_form = c.at("lold_form").get<std::string>() == "step"
                              ? LoldForm::step
                              : LoldForm::sigmoid;
  file.config.lold_imbalance_correction =
      c.at("lold_imbalance_correction").get<bool>();
  const auto& r = j.at("report");
  file.report.method = parse_method(r.at("method").get<std::string>());
  file.report.d = r.at("d").get<Index>();
  file.report.threshold = r.at("threshold").get<double>();
  file.report.accuracy = r.at("accuracy").get<double>();
  file.report.train_error = r.at("train_error").get<double>();
  file.report.test_error = r.at("test_error").get<double>();
  for (const auto& p : r.at("roc")) {
    file.report.roc.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  file.report.auc = r.at("auc").get<double>();
  file.report.wall_time_sec = r.at("wall_time_sec").get<double>();
  file.report.repeats = r.at("repeats").get<int>();
  file.report.accuracy_std_error = r.at("accuracy_std_error").get<double>();
  file.report.quadrature_converged = r.at("quadrature_converged").get<bool>();
  if (!r.at("quadrature_delta").is_null()) {
    file.report.quadrature_delta = r.at("quadrature_delta").get<double>();
  }
  return file;
}

inline void write_report_file(const std::string& path, const ReportFile& file) {
  std::ofstream out = detail::open_output(path);
  out << to_json(file).dump(2) << '\n';
}

inline ReportFile load_report_file(const std::string& path) {
  std::ifstream in = detail::open_input(path);
  nlohmann::json j;
  in >> j;
  return report_file_from_json(j);
}

}  // namespace bayesda
