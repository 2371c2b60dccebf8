#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "molbench/bbt.hpp"
#include "molbench/evaluate.hpp"

namespace molbench::report {

// ---------------------------------------------------------------------------
// Average results

struct ModelAverage {
  std::string model;
  double mean_rank = 0;
  double mean_auroc = 0;
  int datasets = 0;
};

/// Per dataset, models ranked by descending AUROC (rank 1 = best) with
/// average ranks for exact ties; rows sorted by mean rank, then name. Throws
/// DataError listing the missing (model, dataset) cells when the table is
/// not complete for the head.
std::vector<ModelAverage> aggregate_report(const harness::ScoreTable& scores, std::string_view head = "best");

// ---------------------------------------------------------------------------
// Pairwise wins

struct WinMatrix {
  std::vector<std::string> models;
  /// Datasets scored for both models of each pair.
  Eigen::MatrixXi shared;
  Eigen::MatrixXi wins;
  Eigen::MatrixXi ties;

  double win_fraction(int i, int j) const;
  double tie_fraction(int i, int j) const;
};

/// wins(i, j) counts datasets where i beats j by more than epsilon; the rest
/// within epsilon are ties and count for neither side.
WinMatrix win_matrix(const harness::ScoreTable& scores, double epsilon, std::string_view head = "best");

// ---------------------------------------------------------------------------
// Baseline comparison

struct DatasetVsBaseline {
  std::string dataset;
  double baseline_auroc = 0;
  int models = 0;  // non-baseline models scored on the dataset
  int strictly_above = 0;
  int above_epsilon = 0;
  double pct_strictly_above = 0;
  double pct_above_epsilon = 0;
};

struct ModelWins {
  std::string model;
  int wins = 0;       // datasets where the model holds the maximum
  int near_wins = 0;  // wins plus datasets within near_win_epsilon of the maximum
  int datasets = 0;
};

struct BaselineComparison {
  std::string baseline;
  std::vector<DatasetVsBaseline> datasets;
  std::vector<ModelWins> models;
};

/// Throws ConfigError when the baseline has no score for the head.
BaselineComparison baseline_comparison(const harness::ScoreTable& scores, const std::string& baseline,
                                       double near_win_epsilon, std::string_view head = "best");

// ---------------------------------------------------------------------------
// Posterior decisions against the baseline

struct BaselineDecision {
  std::string model;
  bbt::PairSummary summary;  // pi(model beats baseline)
  bbt::Decision decision = bbt::Decision::inconclusive;
};

/// One row per non-baseline model, in posterior model order. Throws
/// ConfigError when the baseline is not among the posterior's models.
std::vector<BaselineDecision> decisions_vs_baseline(const bbt::AbilityPosterior& p, const std::string& baseline,
                                                    const bbt::BBTConfig& cfg);

// ---------------------------------------------------------------------------
// Writers

void write_aggregate_csv(std::ostream& out, const std::vector<ModelAverage>& rows);
/// Long format: model,opponent,wins,losses,ties,datasets,win_fraction,tie_fraction.
void write_win_matrix_csv(std::ostream& out, const WinMatrix& m);
void write_baseline_datasets_csv(std::ostream& out, const BaselineComparison& c);
void write_baseline_models_csv(std::ostream& out, const BaselineComparison& c);
void write_decisions_csv(std::ostream& out, const std::string& baseline, const std::vector<BaselineDecision>& rows);
void write_ppc_csv(std::ostream& out, const std::vector<std::string>& models, const std::vector<bbt::PpcResult>& rows);
void write_win_table_csv(std::ostream& out, const bbt::WinTable& w);

}  // namespace molbench::report
