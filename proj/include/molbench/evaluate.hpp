#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "molbench/dataset.hpp"
#include "molbench/errors.hpp"
#include "molbench/split.hpp"

namespace molbench::harness {

enum class Head { knn, logreg, random_forest };

std::string_view to_string(Head head);
/// Accepts "knn", "logreg" and "random_forest" (also "rf", "lr").
Head head_from_string(std::string_view name);

/// kNN k in {1,3,5,7,9}; logreg lambda at 10 log-spaced values in [1e-2, 1e3];
/// RF min_samples_split in {2,4,6,8,10}.
std::vector<double> default_grid(Head head);

struct ClassifierSpec {
  Head head = Head::knn;
  std::vector<double> grid;
  std::uint64_t seed = 0;

  static ClassifierSpec defaults(Head head, std::uint64_t seed = 0);
};

struct EvalOptions {
  int folds = 5;
  int rf_trees = 500;
  /// kNN normally sees raw vectors; logreg always standardizes.
  bool standardize_knn = false;
};

struct ScoreRecord {
  std::string model;
  std::string dataset;
  std::string head;
  double auroc = 0;

  bool operator==(const ScoreRecord&) const = default;
};

struct ScoreTable {
  std::vector<ScoreRecord> records;

  /// Records with the given head, in table order.
  std::vector<ScoreRecord> with_head(std::string_view head) const;
  std::optional<double> find(std::string_view model, std::string_view dataset, std::string_view head) const;
  /// Stable order by (model, dataset, head).
  void sort();
};

/// CSV with header model,dataset,head,auroc; auroc printed with 6 decimals.
void write_score_table(std::ostream& out, const ScoreTable& table);
void write_score_table(const std::string& path, const ScoreTable& table);
ScoreTable parse_score_table(std::string_view text);
ScoreTable read_score_table(const std::string& path);

/// Raised when no task has both classes on the test side.
class EvaluationSkipped : public DataError {
public:
  using DataError::DataError;
};

struct HeadResult {
  Head head = Head::knn;
  double selected = 0;
  /// Mean cross-validation AUROC of every grid point, in grid order.
  std::vector<double> cv_scores;
  double test_auroc = 0;
  int tasks_scored = 0;
};

struct Evaluation {
  std::vector<HeadResult> heads;
  double best = 0;

  /// One record per head plus "best".
  std::vector<ScoreRecord> records(const std::string& model, const std::string& dataset) const;
};

/// For each head: k-fold stratified CV on the train side for every grid
/// point (score = mean over tasks of the mean fold AUROC, undefined folds
/// skipped), first best grid point refit on the full train side, then test
/// AUROC averaged over tasks whose test side has both classes. `best` is the
/// maximum test AUROC over heads. Throws EvaluationSkipped when no task can
/// be scored on the test side.
Evaluation tune_and_evaluate(const Dataset& data, const FeatureMatrix& x, const std::vector<ClassifierSpec>& specs,
                             const Split& split, const EvalOptions& options = {});

/// Scores for one fitted head; exposed for tests.
std::vector<double> fit_predict(Head head, double param, const FeatureMatrix& train_x, std::span<const int> train_y,
                                const FeatureMatrix& test_x, std::uint64_t seed, const EvalOptions& options = {});

/// Stratified fold assignment for labels; positives and negatives are each
/// shuffled with the seed and dealt round-robin.
std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed);

}  // namespace molbench::harness
