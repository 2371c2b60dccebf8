#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molbench/molgraph.hpp"

namespace molbench::fp {

enum class Kind { ecfp, atom_pair, topological_torsion };

std::string_view to_string(Kind kind);
Kind kind_from_string(std::string_view name);

struct FingerprintConfig {
  Kind kind = Kind::ecfp;
  int radius = 2;
  int length = 2048;
  bool counted = true;

  /// Throws std::invalid_argument unless 2 <= length (power of two) and
  /// 0 <= radius <= 10.
  void validate() const;
  /// Short label used in score tables, e.g. "ECFP-count" or "AtomPair-binary".
  std::string label() const;

  friend bool operator==(const FingerprintConfig&, const FingerprintConfig&) = default;
};

struct FingerprintVector {
  std::vector<std::uint32_t> values;
  FingerprintConfig config;

  std::uint64_t total() const;
  friend bool operator==(const FingerprintVector&, const FingerprintVector&) = default;
};

/// Per-atom identifiers from the (element, heavy degree, total H, charge,
/// ring flag, pi electrons) tuple.
std::vector<std::uint64_t> initial_invariants(const molgraph::Molecule& m);

/// Unfolded ECFP identifiers surviving bond-set deduplication, one entry per
/// surviving environment, ordered by (radius, identifier).
std::vector<std::uint64_t> ecfp_identifiers(const molgraph::Molecule& m, int radius);
std::vector<std::uint64_t> atom_pair_identifiers(const molgraph::Molecule& m);
std::vector<std::uint64_t> torsion_identifiers(const molgraph::Molecule& m);

FingerprintVector fold(std::span<const std::uint64_t> identifiers, int length, bool counted);

FingerprintVector ecfp(const molgraph::Molecule& m, const FingerprintConfig& cfg);
FingerprintVector atom_pair(const molgraph::Molecule& m, const FingerprintConfig& cfg);
FingerprintVector topological_torsion(const molgraph::Molecule& m, const FingerprintConfig& cfg);

/// Dispatches on cfg.kind.
FingerprintVector compute(const molgraph::Molecule& m, const FingerprintConfig& cfg);

/// Molecules x length matrix, row-major. The parallel version splits rows
/// across OpenMP threads and is bit-identical to the serial one.
struct FingerprintMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint32_t> values;

  std::span<const std::uint32_t> row(int r) const {
    return {values.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(cols),
            static_cast<std::size_t>(cols)};
  }
  friend bool operator==(const FingerprintMatrix&, const FingerprintMatrix&) = default;
};

FingerprintMatrix fingerprint_matrix(std::span<const molgraph::Molecule> mols, const FingerprintConfig& cfg);
FingerprintMatrix fingerprint_matrix_serial(std::span<const molgraph::Molecule> mols,
                                            const FingerprintConfig& cfg);

}  // namespace molbench::fp
