#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "molbench/fingerprints.hpp"
#include "molbench/molgraph.hpp"

namespace molbench::harness {

/// Row-major molecules x features matrix consumed by every classifier head.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::int8_t kMissingLabel = -1;

struct Dataset {
  std::string name;
  std::vector<std::string> smiles;
  std::vector<molgraph::Molecule> molecules;
  std::vector<std::string> task_names;
  /// molecules x tasks, entries 0, 1 or kMissingLabel.
  std::vector<std::int8_t> labels;
  /// Data row (0-based, header excluded) each molecule came from.
  std::vector<int> source_rows;
  /// Rows discarded because their SMILES failed to parse.
  std::size_t dropped_rows = 0;

  int size() const { return static_cast<int>(molecules.size()); }
  int tasks() const { return static_cast<int>(task_names.size()); }
  std::int8_t label(int row, int task) const {
    return labels[static_cast<std::size_t>(row) * task_names.size() + static_cast<std::size_t>(task)];
  }
  /// Rows with a non-missing label for `task`, ascending.
  std::vector<int> labelled_rows(int task) const;
};

struct LoadOptions {
  /// Keep only the largest fragment of multi-fragment SMILES (salts).
  bool largest_fragment_only = false;
};

/// Reads a dataset CSV with a header row. Empty `task_columns` selects every
/// column other than the SMILES column. Label cells must be 0, 1 (or 0.0,
/// 1.0) or empty. Throws DataError for a missing column, a non-binary label,
/// a task without labels, or when no row parses.
Dataset load_dataset(const std::string& path, const std::string& smiles_column,
                     const std::vector<std::string>& task_columns = {}, const LoadOptions& options = {});

/// Same as load_dataset, on CSV text already in memory.
Dataset parse_dataset(std::string_view csv_text, const std::string& name, const std::string& smiles_column,
                      const std::vector<std::string>& task_columns = {}, const LoadOptions& options = {});

struct EmbeddingTable {
  std::string model_name;
  FeatureMatrix vectors;

  int rows() const { return static_cast<int>(vectors.rows()); }
  int dim() const { return static_cast<int>(vectors.cols()); }
};

/// Loads embedding vectors from CSV (optional non-numeric header row) or the
/// EMB1 binary format, detected by its magic. Rejects ragged rows, non-finite
/// values and, when `expected_rows` is given, a row-count mismatch.
EmbeddingTable load_embeddings(const std::string& path, std::optional<int> expected_rows = std::nullopt);

/// EMB1: "EMB1", u32 version = 1, u64 rows, u32 dim, rows*dim float32, all
/// little-endian.
void write_embeddings_binary(const std::string& path, const FeatureMatrix& vectors);
void write_embeddings_csv(const std::string& path, const FeatureMatrix& vectors);

/// Fingerprint matrix as CSV with header f0..f{n-1}, one row per molecule.
void write_fingerprints_csv(const std::string& path, const fp::FingerprintMatrix& matrix);
/// Fingerprint matrix in the EMB1 container (counts stored as float32).
void write_fingerprints_binary(const std::string& path, const fp::FingerprintMatrix& matrix);

FeatureMatrix to_features(const fp::FingerprintMatrix& matrix);

/// Drops rows whose index is not in `rows`; order follows `rows`.
FeatureMatrix select_rows(const FeatureMatrix& x, std::span<const int> rows);

}  // namespace molbench::harness
