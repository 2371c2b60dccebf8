#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace molbench::molgraph {

enum class BondOrder : std::uint8_t { single = 1, double_ = 2, triple = 3, aromatic = 4 };

/// Integer code used wherever a bond order enters a hash.
constexpr int bond_code(BondOrder o) { return static_cast<int>(o); }

struct Atom {
  int atomic_number = 6;
  int formal_charge = 0;
  std::optional<int> isotope;
  /// Set only for bracket atoms; the bracket H count is authoritative.
  std::optional<int> explicit_h;
  bool aromatic = false;
  int implicit_h = 0;
  int index = 0;

  bool bracket() const { return explicit_h.has_value(); }
  int total_h() const { return implicit_h + explicit_h.value_or(0); }
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::single;
  bool in_ring = false;

  int other(int atom) const { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

/// Immutable heavy-atom graph.
///
/// Construction validates the graph (distinct endpoints, at most one bond per
/// atom pair) and builds adjacency and fragment membership. Ring flags and
/// aromaticity are assigned by perceive_rings(); parse_smiles() always returns
/// a perceived molecule.
class Molecule {
public:
  Molecule() = default;
  Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds);

  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }
  const Atom& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }
  std::span<const Neighbor> neighbors(int i) const { return adjacency_[static_cast<std::size_t>(i)]; }

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int bond_count() const { return static_cast<int>(bonds_.size()); }
  bool empty() const { return atoms_.empty(); }

  int heavy_degree(int i) const { return static_cast<int>(neighbors(i).size()); }
  std::optional<int> bond_between(int a, int b) const;

  int fragment_count() const { return fragment_count_; }
  int fragment_of(int atom) const { return fragment_[static_cast<std::size_t>(atom)]; }

  bool rings_perceived() const { return rings_perceived_; }
  bool atom_in_ring(int i) const;

private:
  friend Molecule perceive_rings(const Molecule& m);

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<int> fragment_;
  int fragment_count_ = 0;
  bool rings_perceived_ = false;
};

enum class ParseErrorKind {
  unclosed_ring,
  unmatched_parenthesis,
  unknown_element,
  valence_overflow,
  empty_fragment,
  syntax,
};

std::string_view to_string(ParseErrorKind kind);

class SmilesError : public std::runtime_error {
public:
  SmilesError(ParseErrorKind kind, std::size_t offset, const std::string& detail);

  ParseErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

private:
  ParseErrorKind kind_;
  std::size_t offset_;
};

/// Parses the supported SMILES subset: organic-subset and bracket atoms,
/// branches, ring closures (digits and %nn), bond symbols - = # :, aromatic
/// lowercase atoms and dot-separated fragments. Stereo markers are accepted
/// and dropped. Throws SmilesError.
Molecule parse_smiles(std::string_view text);

/// Atomic number for an element symbol, or 0 if unknown.
int element_from_symbol(std::string_view symbol);
std::string_view element_symbol(int atomic_number);

/// Lowest standard valences for organic-subset elements, ascending. Empty for
/// elements outside the organic subset.
std::span<const int> standard_valences(int atomic_number);

/// Bridge-based ring flags plus simplified per-ring aromaticity.
Molecule perceive_rings(const Molecule& m);

/// Pi-electron surrogate: 1 per double bond, 2 per triple bond, 1 if aromatic.
int pi_electrons(const Molecule& m, int atom);

class DistanceMatrix {
public:
  static constexpr int kUnreachable = std::numeric_limits<int>::max();

  explicit DistanceMatrix(int n = 0)
      : n_(n), d_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), kUnreachable) {}

  int size() const { return n_; }
  int at(int i, int j) const { return d_[index(i, j)]; }
  int& at(int i, int j) { return d_[index(i, j)]; }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  int n_;
  std::vector<int> d_;
};

/// All-pairs hop counts by BFS from every atom. Pairs in different fragments
/// hold DistanceMatrix::kUnreachable.
DistanceMatrix shortest_path_distances(const Molecule& m);
DistanceMatrix shortest_path_distances_serial(const Molecule& m);

/// Keeps only the fragment with the most heavy atoms (first one on ties).
Molecule largest_fragment(const Molecule& m);

/// Induced subgraph on `keep` (ascending atom indices). Hydrogen counts of
/// retained atoms absorb the valence of removed bonds.
Molecule induced_subgraph(const Molecule& m, std::span<const int> keep);

struct Scaffold {
  Molecule molecule;
  std::uint64_t key = 0;

  bool empty() const { return molecule.empty(); }
};

/// Bemis-Murcko core: ring systems plus linkers, keeping atoms that hang off a
/// retained atom by a double or triple bond.
Scaffold murcko_scaffold(const Molecule& m);

/// Order-independent Weisfeiler-Lehman hash of a molecule graph; 0 for the
/// empty graph and never 0 otherwise.
std::uint64_t scaffold_key(const Molecule& m);
inline std::uint64_t scaffold_key(const Scaffold& s) { return scaffold_key(s.molecule); }

}  // namespace molbench::molgraph
