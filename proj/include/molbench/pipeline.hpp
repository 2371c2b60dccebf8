#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "molbench/bbt.hpp"
#include "molbench/evaluate.hpp"
#include "molbench/fingerprints.hpp"

namespace molbench::pipeline {

inline constexpr int kConfigVersion = 1;

struct DatasetEntry {
  std::string name;
  std::filesystem::path path;
  std::string smiles_column = "smiles";
  /// Empty selects every non-SMILES column.
  std::vector<std::string> tasks;
  bool largest_fragment_only = false;
};

struct RepresentationEntry {
  std::string name;
  /// Built-in fingerprint; when unset the representation is read from files.
  std::optional<fp::FingerprintConfig> fingerprint;
  /// Path pattern with "{dataset}" replaced by the dataset name.
  std::string embedding_pattern;
  /// Per-dataset paths; take precedence over the pattern.
  std::map<std::string, std::filesystem::path> embedding_files;
};

struct BenchmarkConfig {
  int version = kConfigVersion;
  std::filesystem::path output_dir = "molbench_out";
  std::filesystem::path cache_dir;  // defaults to output_dir / "cache"
  std::vector<DatasetEntry> datasets;
  std::vector<RepresentationEntry> representations;
  double frac_train = 0.8;
  std::uint64_t split_seed = 0;
  std::vector<harness::Head> heads{harness::Head::knn, harness::Head::logreg, harness::Head::random_forest};
  std::map<harness::Head, std::vector<double>> grids;
  std::uint64_t classifier_seed = 0;
  harness::EvalOptions eval;
  bbt::BBTConfig bbt;
  std::string baseline = "ECFP-count";
  double near_win_epsilon = 0.01;

  std::vector<harness::ClassifierSpec> classifier_specs() const;
  /// Embedding file of a file-backed representation for one dataset.
  std::filesystem::path embedding_path(const RepresentationEntry& rep, const DatasetEntry& dataset) const;
  std::filesystem::path effective_cache_dir() const;
  /// Applies one seed to the split, the classifiers and the sampler.
  void set_seed(std::uint64_t seed);
  /// Throws ConfigError.
  void validate() const;
};

/// Relative paths in the document resolve against `base_dir`. Throws
/// ConfigError on malformed JSON, unknown keys, wrong types or invalid values.
BenchmarkConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
BenchmarkConfig load_config(const std::filesystem::path& path);

struct RunOptions {
  /// Reuse cached cells whose key still matches.
  bool resume = false;
  /// Progress lines; nothing is printed when null.
  std::ostream* log = nullptr;
};

struct EvaluationRun {
  harness::ScoreTable scores;
  int cells = 0;
  int computed = 0;
  int cached = 0;
  /// "model/dataset: reason" for cells without a scorable test task.
  std::vector<std::string> skipped;
};

/// Cache key of one (representation, dataset) cell: a content hash of the
/// dataset file, the representation (fingerprint settings or embedding file
/// bytes), the split settings and the classifier specs, as 16 hex digits.
std::string cell_key(const BenchmarkConfig& cfg, const DatasetEntry& dataset, const RepresentationEntry& rep);

/// Evaluates every (representation, dataset) cell, in parallel across cells,
/// caching each finished cell under the cache directory, and writes
/// output_dir/scores.csv. Errors carry the model and dataset name and keep
/// their type; cells finished before the error stay cached.
EvaluationRun run_evaluation(const BenchmarkConfig& cfg, const RunOptions& options = {});

struct Comparison {
  bbt::WinTable wins;
  bbt::AbilityPosterior posterior;
  bbt::Ranking ranking;
  std::vector<bbt::PairRow> pairs;
  std::vector<bbt::PpcResult> ppc;
};

/// Posterior comparison of the "best" records written under out_dir:
/// win_table.csv, pairwise.csv, ranking.json, ppc.csv and, when the baseline
/// is among the models, decisions_vs_baseline.csv.
Comparison run_comparison(const harness::ScoreTable& scores, const bbt::BBTConfig& cfg, const std::string& baseline,
                          const std::filesystem::path& out_dir);

/// average_results.csv, win_matrix.csv, baseline_by_dataset.csv and
/// wins_by_model.csv under out_dir.
void write_reports(const harness::ScoreTable& scores, const std::string& baseline, double near_win_epsilon,
                   double tie_epsilon, const std::filesystem::path& out_dir);

struct PipelineResult {
  EvaluationRun evaluation;
  std::optional<Comparison> comparison;
};

/// Evaluation, reports (output_dir/reports) and, with at least two models,
/// the posterior comparison (output_dir/bbt).
PipelineResult run_pipeline(const BenchmarkConfig& cfg, const RunOptions& options = {});

}  // namespace molbench::pipeline
