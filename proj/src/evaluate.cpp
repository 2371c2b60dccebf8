#include "molbench/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "molbench/classifiers.hpp"
#include "molbench/csv.hpp"
#include "molbench/metrics.hpp"
#include "molbench/random.hpp"

namespace molbench::harness {

namespace {

constexpr double kUnscored = -std::numeric_limits<double>::infinity();

struct TaskData {
  std::vector<int> train_rows;
  std::vector<int> train_y;
  std::vector<int> test_rows;
  std::vector<int> test_y;
};

std::vector<TaskData> task_data(const Dataset& data, const Split& split) {
  std::vector<TaskData> out(static_cast<std::size_t>(data.tasks()));
  for (int t = 0; t < data.tasks(); ++t) {
    auto& td = out[static_cast<std::size_t>(t)];
    for (int r : split.train_idx) {
      if (data.label(r, t) == kMissingLabel) continue;
      td.train_rows.push_back(r);
      td.train_y.push_back(data.label(r, t));
    }
    for (int r : split.test_idx) {
      if (data.label(r, t) == kMissingLabel) continue;
      td.test_rows.push_back(r);
      td.test_y.push_back(data.label(r, t));
    }
  }
  return out;
}

FeatureMatrix standardized(const FeatureMatrix& train, const FeatureMatrix& x) {
  const Eigen::RowVectorXd mean = train.colwise().mean();
  Eigen::RowVectorXd scale(train.cols());
  for (Eigen::Index c = 0; c < train.cols(); ++c) {
    const double var = (train.col(c).array() - mean(c)).square().mean();
    scale(c) = var > 0 ? std::sqrt(var) : 1.0;
  }
  FeatureMatrix out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out.row(r) = (x.row(r) - mean).cwiseQuotient(scale);
  return out;
}

std::string format_auroc(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string_view to_string(Head head) {
  switch (head) {
    case Head::knn: return "knn";
    case Head::logreg: return "logreg";
    case Head::random_forest: return "random_forest";
  }
  return "?";
}

Head head_from_string(std::string_view name) {
  if (name == "knn") return Head::knn;
  if (name == "logreg" || name == "lr") return Head::logreg;
  if (name == "random_forest" || name == "rf") return Head::random_forest;
  throw ConfigError("unknown classifier head '" + std::string(name) + "'");
}

std::vector<double> default_grid(Head head) {
  switch (head) {
    case Head::knn: return {1, 3, 5, 7, 9};
    case Head::logreg: {
      std::vector<double> g;
      for (int i = 0; i < 10; ++i) g.push_back(std::pow(10.0, -2.0 + 5.0 * i / 9.0));
      return g;
    }
    case Head::random_forest: return {2, 4, 6, 8, 10};
  }
  return {};
}

ClassifierSpec ClassifierSpec::defaults(Head head, std::uint64_t seed) { return {head, default_grid(head), seed}; }

std::vector<ScoreRecord> ScoreTable::with_head(std::string_view head) const {
  std::vector<ScoreRecord> out;
  for (const auto& r : records) {
    if (r.head == head) out.push_back(r);
  }
  return out;
}

std::optional<double> ScoreTable::find(std::string_view model, std::string_view dataset, std::string_view head) const {
  for (const auto& r : records) {
    if (r.model == model && r.dataset == dataset && r.head == head) return r.auroc;
  }
  return std::nullopt;
}

void ScoreTable::sort() {
  std::stable_sort(records.begin(), records.end(), [](const ScoreRecord& a, const ScoreRecord& b) {
    return std::tie(a.model, a.dataset, a.head) < std::tie(b.model, b.dataset, b.head);
  });
}

void write_score_table(std::ostream& out, const ScoreTable& table) {
  csv::write_row(out, {"model", "dataset", "head", "auroc"});
  for (const auto& r : table.records) csv::write_row(out, {r.model, r.dataset, r.head, format_auroc(r.auroc)});
}

void write_score_table(const std::string& path, const ScoreTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_score_table(out, table);
}

ScoreTable parse_score_table(std::string_view text) {
  const auto t = csv::parse_table(text);
  const auto cm = t.column("model"), cd = t.column("dataset"), ch = t.column("head"), ca = t.column("auroc");
  if (!cm || !cd || !ch || !ca) throw DataError("score table needs columns model,dataset,head,auroc");
  ScoreTable out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    if (row.size() < t.header.size()) throw DataError("score table line " + std::to_string(i + 2) + ": missing cells");
    ScoreRecord r{row[*cm], row[*cd], row[*ch], 0};
    try {
      std::size_t used = 0;
      r.auroc = std::stod(row[*ca], &used);
      if (used != row[*ca].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError("score table line " + std::to_string(i + 2) + ": bad auroc '" + row[*ca] + "'");
    }
    if (!(r.auroc >= 0 && r.auroc <= 1)) {
      throw DataError("score table line " + std::to_string(i + 2) + ": auroc outside [0,1]");
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

ScoreTable read_score_table(const std::string& path) { return parse_score_table(csv::read_file(path)); }

std::vector<ScoreRecord> Evaluation::records(const std::string& model, const std::string& dataset) const {
  std::vector<ScoreRecord> out;
  for (const auto& h : heads) out.push_back({model, dataset, std::string(to_string(h.head)), h.test_auroc});
  out.push_back({model, dataset, "best", best});
  return out;
}

std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("need at least 2 folds");
  std::vector<int> fold(labels.size(), 0);
  Rng rng = make_stream(seed, 0x666f6c64);
  for (int cls : {0, 1}) {
    std::vector<int> rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) rows.push_back(static_cast<int>(i));
    }
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[uniform_below(rng, i)]);
    for (std::size_t i = 0; i < rows.size(); ++i) fold[static_cast<std::size_t>(rows[i])] = static_cast<int>(i % static_cast<std::size_t>(folds));
  }
  return fold;
}

std::vector<double> fit_predict(Head head, double param, const FeatureMatrix& train_x, std::span<const int> train_y,
                                const FeatureMatrix& test_x, std::uint64_t seed, const EvalOptions& options) {
  switch (head) {
    case Head::knn: {
      const int k = static_cast<int>(std::lround(param));
      if (options.standardize_knn) {
        return train_predict_knn(standardized(train_x, train_x), train_y, standardized(train_x, test_x), k);
      }
      return train_predict_knn(train_x, train_y, test_x, k);
    }
    case Head::logreg: return train_predict_logreg(train_x, train_y, test_x, param);
    case Head::random_forest: {
      ForestParams p;
      p.n_trees = options.rf_trees;
      p.min_samples_split = static_cast<int>(std::lround(param));
      p.seed = seed;
      return train_predict_rf(train_x, train_y, test_x, p);
    }
  }
  return {};
}

Evaluation tune_and_evaluate(const Dataset& data, const FeatureMatrix& x, const std::vector<ClassifierSpec>& specs,
                             const Split& split, const EvalOptions& options) {
  if (x.rows() != data.size()) throw DataError("feature rows do not match dataset size");
  if (specs.empty()) throw ConfigError("no classifier heads configured");
  const auto tasks = task_data(data, split);

  bool any_scorable = false;
  for (const auto& td : tasks) {
    const auto pos = std::count(td.test_y.begin(), td.test_y.end(), 1);
    if (pos > 0 && pos < static_cast<std::ptrdiff_t>(td.test_y.size())) any_scorable = true;
  }
  if (!any_scorable) throw EvaluationSkipped(data.name + ": no task has both classes on the test side");

  Evaluation result;
  for (const auto& spec : specs) {
    if (spec.grid.empty()) throw ConfigError("empty grid for head " + std::string(to_string(spec.head)));
    const int g_count = static_cast<int>(spec.grid.size());
    const int folds = options.folds;

    // cv[task][grid][fold], kUnscored when a fold lacks a class.
    std::vector<double> cv(tasks.size() * static_cast<std::size_t>(g_count * folds), kUnscored);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      const auto& td = tasks[t];
      if (td.train_rows.size() < 2) continue;
      const auto fold_of = stratified_folds(td.train_y, folds, hash_words({spec.seed, t}));
      const int items = g_count * folds;
#pragma omp parallel for schedule(dynamic)
      for (int item = 0; item < items; ++item) {
        const int g = item / folds;
        const int f = item % folds;
        std::vector<int> fit_rows, fit_y, val_rows, val_y;
        for (std::size_t i = 0; i < td.train_rows.size(); ++i) {
          if (fold_of[i] == f) {
            val_rows.push_back(td.train_rows[i]);
            val_y.push_back(td.train_y[i]);
          } else {
            fit_rows.push_back(td.train_rows[i]);
            fit_y.push_back(td.train_y[i]);
          }
        }
        if (fit_rows.empty() || val_rows.empty()) continue;
        const auto scores = fit_predict(spec.head, spec.grid[static_cast<std::size_t>(g)], select_rows(x, fit_rows),
                                        fit_y, select_rows(x, val_rows),
                                        hash_words({spec.seed, t, static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(f)}),
                                        options);
        if (const auto a = auroc(scores, val_y)) {
          cv[(t * static_cast<std::size_t>(g_count) + static_cast<std::size_t>(g)) * static_cast<std::size_t>(folds) +
             static_cast<std::size_t>(f)] = *a;
        }
      }
    }

    HeadResult hr;
    hr.head = spec.head;
    int best_g = 0;
    double best_score = kUnscored;
    for (int g = 0; g < g_count; ++g) {
      double task_sum = 0;
      int task_n = 0;
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        double sum = 0;
        int n = 0;
        for (int f = 0; f < folds; ++f) {
          const double v = cv[(t * static_cast<std::size_t>(g_count) + static_cast<std::size_t>(g)) * static_cast<std::size_t>(folds) +
                              static_cast<std::size_t>(f)];
          if (v != kUnscored) {
            sum += v;
            ++n;
          }
        }
        if (n > 0) {
          task_sum += sum / n;
          ++task_n;
        }
      }
      const double score = task_n > 0 ? task_sum / task_n : kUnscored;
      hr.cv_scores.push_back(score);
      if (score > best_score) {
        best_score = score;
        best_g = g;
      }
    }
    hr.selected = spec.grid[static_cast<std::size_t>(best_g)];

    double sum = 0;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      const auto& td = tasks[t];
      if (td.train_rows.empty() || td.test_rows.empty()) continue;
      const auto scores = fit_predict(spec.head, hr.selected, select_rows(x, td.train_rows), td.train_y,
                                      select_rows(x, td.test_rows),
                                      hash_words({spec.seed, t, static_cast<std::uint64_t>(best_g), static_cast<std::uint64_t>(folds)}),
                                      options);
      if (const auto a = auroc(scores, td.test_y)) {
        sum += *a;
        ++hr.tasks_scored;
      }
    }
    hr.test_auroc = hr.tasks_scored > 0 ? sum / hr.tasks_scored : 0.0;
    result.heads.push_back(std::move(hr));
  }
  result.best = 0;
  for (const auto& h : result.heads) result.best = std::max(result.best, h.test_auroc);
  return result;
}

}  // namespace molbench::harness
