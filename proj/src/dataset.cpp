#include "molbench/dataset.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "molbench/csv.hpp"
#include "molbench/errors.hpp"

namespace molbench::harness {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};
constexpr std::uint32_t kVersion = 1;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_double(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) return std::nullopt;
  // from_chars accepts nan/inf spellings; callers reject them as non-finite.
  double v = 0;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::int8_t parse_label(std::string_view cell, const std::string& where) {
  const std::string s = trim(cell);
  if (s.empty()) return kMissingLabel;
  if (s == "0" || s == "0.0") return 0;
  if (s == "1" || s == "1.0") return 1;
  throw DataError(where + ": non-binary label '" + s + "'");
}

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  using U = std::make_unsigned_t<std::conditional_t<std::is_floating_point_v<T>, std::int32_t, T>>;
  U bits;
  if constexpr (std::is_floating_point_v<T>) {
    static_assert(sizeof(T) == 4);
    bits = std::bit_cast<std::uint32_t>(value);
  } else {
    bits = static_cast<U>(value);
  }
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(const std::string& buf, std::size_t& pos, const std::string& path) {
  if (pos + sizeof(T) > buf.size()) throw DataError("'" + path + "': truncated EMB1 file");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
  }
  pos += sizeof(T);
  if constexpr (std::is_same_v<T, float>) {
    return std::bit_cast<float>(static_cast<std::uint32_t>(bits));
  } else {
    return static_cast<T>(bits);
  }
}

EmbeddingTable read_binary(const std::string& buf, const std::string& path) {
  std::size_t pos = 4;
  const auto version = get_le<std::uint32_t>(buf, pos, path);
  if (version != kVersion) throw DataError("'" + path + "': unsupported EMB1 version " + std::to_string(version));
  const auto rows = get_le<std::uint64_t>(buf, pos, path);
  const auto dim = get_le<std::uint32_t>(buf, pos, path);
  if (dim == 0) throw DataError("'" + path + "': embedding dimension must be positive");
  if (rows > (buf.size() - pos) / 4 / dim || buf.size() - pos != rows * dim * 4) {
    throw DataError("'" + path + "': EMB1 payload size does not match rows x dim");
  }
  EmbeddingTable t;
  t.vectors.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < dim; ++c) {
      const float v = get_le<float>(buf, pos, path);
      if (!std::isfinite(v)) {
        throw DataError("'" + path + "': non-finite value at row " + std::to_string(r) + ", column " +
                        std::to_string(c));
      }
      t.vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return t;
}

EmbeddingTable read_csv_embeddings(const std::string& text, const std::string& path) {
  auto records = csv::parse(text);
  if (records.empty()) throw DataError("'" + path + "': no embedding rows");
  std::size_t first = 0;
  // A first row that is not numeric is a header.
  if (!parse_double(records[0][0])) first = 1;
  if (records.size() == first) throw DataError("'" + path + "': no embedding rows");

  const std::size_t dim = records[first].size();
  EmbeddingTable t;
  t.vectors.resize(static_cast<Eigen::Index>(records.size() - first), static_cast<Eigen::Index>(dim));
  for (std::size_t r = first; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != dim) {
      throw DataError("'" + path + "': ragged row " + std::to_string(r + 1) + " has " + std::to_string(rec.size()) +
                      " values, expected " + std::to_string(dim));
    }
    for (std::size_t c = 0; c < dim; ++c) {
      const auto v = parse_double(rec[c]);
      if (!v) {
        const std::string cell = trim(rec[c]);
        throw DataError("'" + path + "': " +
                        (cell.empty() ? std::string("empty cell") : "non-numeric value '" + cell + "'") +
                        " on line " + std::to_string(r + 1));
      }
      if (!std::isfinite(*v)) throw DataError("'" + path + "': non-finite value on line " + std::to_string(r + 1));
      t.vectors(static_cast<Eigen::Index>(r - first), static_cast<Eigen::Index>(c)) = *v;
    }
  }
  return t;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

}  // namespace

std::vector<int> Dataset::labelled_rows(int task) const {
  std::vector<int> rows;
  for (int r = 0; r < size(); ++r) {
    if (label(r, task) != kMissingLabel) rows.push_back(r);
  }
  return rows;
}

Dataset parse_dataset(std::string_view csv_text, const std::string& name, const std::string& smiles_column,
                      const std::vector<std::string>& task_columns, const LoadOptions& options) {
  const auto table = csv::parse_table(csv_text);
  if (table.header.empty()) throw DataError(name + ": empty dataset file");
  const auto smiles_col = table.column(smiles_column);
  if (!smiles_col) throw DataError(name + ": missing SMILES column '" + smiles_column + "'");

  std::vector<std::size_t> task_cols;
  Dataset d;
  d.name = name;
  if (task_columns.empty()) {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c == *smiles_col) continue;
      task_cols.push_back(c);
      d.task_names.push_back(table.header[c]);
    }
  } else {
    for (const auto& t : task_columns) {
      const auto c = table.column(t);
      if (!c) throw DataError(name + ": missing task column '" + t + "'");
      task_cols.push_back(*c);
      d.task_names.push_back(t);
    }
  }
  if (task_cols.empty()) throw DataError(name + ": no task columns");

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = name + " line " + std::to_string(r + 2);
    auto cell = [&](std::size_t c) -> std::string_view { return c < row.size() ? std::string_view(row[c]) : ""; };

    std::vector<std::int8_t> labels;
    for (auto c : task_cols) labels.push_back(parse_label(cell(c), where));

    const std::string smi = trim(cell(*smiles_col));
    try {
      auto mol = molgraph::parse_smiles(smi);
      if (options.largest_fragment_only) mol = molgraph::largest_fragment(mol);
      d.molecules.push_back(std::move(mol));
    } catch (const molgraph::SmilesError&) {
      ++d.dropped_rows;
      continue;
    }
    d.smiles.push_back(smi);
    d.source_rows.push_back(static_cast<int>(r));
    d.labels.insert(d.labels.end(), labels.begin(), labels.end());
  }

  if (d.dropped_rows > 0) {
    std::clog << "warning: " << name << ": dropped " << d.dropped_rows << " row(s) with unparseable SMILES\n";
  }
  if (d.molecules.empty()) throw DataError(name + ": no valid rows");
  for (int t = 0; t < d.tasks(); ++t) {
    if (d.labelled_rows(t).empty()) throw DataError(name + ": task '" + d.task_names[static_cast<std::size_t>(t)] + "' has no labels");
  }
  return d;
}

Dataset load_dataset(const std::string& path, const std::string& smiles_column,
                     const std::vector<std::string>& task_columns, const LoadOptions& options) {
  return parse_dataset(csv::read_file(path), std::filesystem::path(path).stem().string(), smiles_column,
                       task_columns, options);
}

EmbeddingTable load_embeddings(const std::string& path, std::optional<int> expected_rows) {
  const std::string buf = csv::read_file(path);
  EmbeddingTable t = buf.size() >= 4 && std::memcmp(buf.data(), kMagic, 4) == 0 ? read_binary(buf, path)
                                                                                 : read_csv_embeddings(buf, path);
  t.model_name = std::filesystem::path(path).stem().string();
  if (expected_rows && t.rows() != *expected_rows) {
    throw DataError("'" + path + "': " + std::to_string(t.rows()) + " embedding rows but dataset has " +
                    std::to_string(*expected_rows) + " molecules");
  }
  return t;
}

void write_embeddings_binary(const std::string& path, const FeatureMatrix& vectors) {
  auto out = open_out(path, std::ios::binary);
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(vectors.rows()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(vectors.cols()));
  for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) put_le<float>(out, static_cast<float>(vectors(r, c)));
  }
}

void write_embeddings_csv(const std::string& path, const FeatureMatrix& vectors) {
  auto out = open_out(path);
  char buf[64];
  for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
      if (c) out << ',';
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, vectors(r, c));
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

void write_fingerprints_csv(const std::string& path, const fp::FingerprintMatrix& matrix) {
  auto out = open_out(path);
  for (int c = 0; c < matrix.cols; ++c) out << (c ? ",f" : "f") << c;
  out << '\n';
  for (int r = 0; r < matrix.rows; ++r) {
    const auto row = matrix.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << row[c];
    }
    out << '\n';
  }
}

void write_fingerprints_binary(const std::string& path, const fp::FingerprintMatrix& matrix) {
  write_embeddings_binary(path, to_features(matrix));
}

FeatureMatrix to_features(const fp::FingerprintMatrix& matrix) {
  FeatureMatrix x(matrix.rows, matrix.cols);
  for (int r = 0; r < matrix.rows; ++r) {
    const auto row = matrix.row(r);
    for (int c = 0; c < matrix.cols; ++c) x(r, c) = static_cast<double>(row[static_cast<std::size_t>(c)]);
  }
  return x;
}

FeatureMatrix select_rows(const FeatureMatrix& x, std::span<const int> rows) {
  FeatureMatrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

}  // namespace molbench::harness
