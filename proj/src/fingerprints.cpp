#include "molbench/fingerprints.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "molbench/hash.hpp"

namespace molbench::fp {

using molgraph::Molecule;
using molgraph::Neighbor;

namespace {

// Domain tags keep the three identifier spaces apart.
constexpr std::uint64_t kTagInvariant = 0x4543465030ULL;
constexpr std::uint64_t kTagMorgan = 0x4543465052ULL;
constexpr std::uint64_t kTagPairType = 0x4150545950ULL;
constexpr std::uint64_t kTagPair = 0x4150414952ULL;
constexpr std::uint64_t kTagTorsion = 0x54544f5253ULL;

std::uint64_t as_word(int v) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(v)); }

using BondSet = std::vector<std::uint64_t>;

void require_kind(const FingerprintConfig& cfg, Kind kind) {
  cfg.validate();
  if (cfg.kind != kind) {
    throw std::invalid_argument("fingerprint config kind " + std::string(to_string(cfg.kind)) + " passed to " +
                                std::string(to_string(kind)));
  }
}

Molecule perceived(const Molecule& m) { return m.rings_perceived() ? m : molgraph::perceive_rings(m); }

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::ecfp: return "ecfp";
    case Kind::atom_pair: return "atom_pair";
    case Kind::topological_torsion: return "topological_torsion";
  }
  return "?";
}

Kind kind_from_string(std::string_view name) {
  if (name == "ecfp") return Kind::ecfp;
  if (name == "atom_pair" || name == "ap") return Kind::atom_pair;
  if (name == "topological_torsion" || name == "torsion" || name == "tt") return Kind::topological_torsion;
  throw std::invalid_argument("unknown fingerprint kind '" + std::string(name) + "'");
}

void FingerprintConfig::validate() const {
  if (length < 2 || (length & (length - 1)) != 0) {
    throw std::invalid_argument("fingerprint length must be a power of two >= 2, got " + std::to_string(length));
  }
  if (radius < 0 || radius > 10) {
    throw std::invalid_argument("ECFP radius must be in [0, 10], got " + std::to_string(radius));
  }
}

std::string FingerprintConfig::label() const {
  std::string out;
  switch (kind) {
    case Kind::ecfp:
      out = "ECFP";
      if (radius != 2) out += "r" + std::to_string(radius);
      break;
    case Kind::atom_pair: out = "AtomPair"; break;
    case Kind::topological_torsion: out = "Torsion"; break;
  }
  if (length != 2048) out += "-" + std::to_string(length);
  out += counted ? "-count" : "-binary";
  return out;
}

std::uint64_t FingerprintVector::total() const {
  return std::accumulate(values.begin(), values.end(), std::uint64_t{0});
}

std::vector<std::uint64_t> initial_invariants(const Molecule& input) {
  const Molecule m = perceived(input);
  std::vector<std::uint64_t> ids(static_cast<std::size_t>(m.atom_count()));
  for (int i = 0; i < m.atom_count(); ++i) {
    const auto& a = m.atom(i);
    ids[static_cast<std::size_t>(i)] =
        hash_words({kTagInvariant, as_word(a.atomic_number), as_word(m.heavy_degree(i)), as_word(a.total_h()),
                    as_word(a.formal_charge), m.atom_in_ring(i) ? 1u : 0u,
                    as_word(molgraph::pi_electrons(m, i))});
  }
  return ids;
}

std::vector<std::uint64_t> ecfp_identifiers(const Molecule& input, int radius) {
  const Molecule m = perceived(input);
  const auto n = static_cast<std::size_t>(m.atom_count());
  const std::size_t words = (static_cast<std::size_t>(m.bond_count()) + 63) / 64;

  std::vector<std::uint64_t> current = initial_invariants(m);
  std::vector<std::uint64_t> out(current.begin(), current.end());
  std::sort(out.begin(), out.end());

  std::vector<BondSet> cover(n, BondSet(words, 0));
  std::set<BondSet> seen{BondSet(words, 0)};

  std::vector<std::uint64_t> next(n);
  std::vector<BondSet> next_cover(n);
  std::vector<std::pair<int, std::uint64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    for (std::size_t a = 0; a < n; ++a) {
      env.clear();
      BondSet bs = cover[a];
      for (const Neighbor& nb : m.neighbors(static_cast<int>(a))) {
        env.emplace_back(molgraph::bond_code(m.bond(nb.bond).order), current[static_cast<std::size_t>(nb.atom)]);
        bs[static_cast<std::size_t>(nb.bond) / 64] |= std::uint64_t{1} << (nb.bond % 64);
        const BondSet& inner = cover[static_cast<std::size_t>(nb.atom)];
        for (std::size_t w = 0; w < words; ++w) bs[w] |= inner[w];
      }
      std::sort(env.begin(), env.end());
      StableHasher h;
      h.add(kTagMorgan).add(static_cast<std::uint64_t>(r)).add(current[a]);
      for (const auto& [code, id] : env) h.add(static_cast<std::uint64_t>(code)).add(id);
      next[a] = h.finish();
      next_cover[a] = std::move(bs);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return std::tie(next[x], x) < std::tie(next[y], y);
    });
    for (std::size_t a : order) {
      if (seen.insert(next_cover[a]).second) out.push_back(next[a]);
    }
    current.swap(next);
    cover.swap(next_cover);
  }
  return out;
}

std::vector<std::uint64_t> atom_pair_identifiers(const Molecule& input) {
  const Molecule m = perceived(input);
  const int n = m.atom_count();
  std::vector<std::uint64_t> type(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    type[static_cast<std::size_t>(i)] = hash_words({kTagPairType, as_word(m.atom(i).atomic_number),
                                                     as_word(m.heavy_degree(i)),
                                                     as_word(molgraph::pi_electrons(m, i))});
  }
  const auto dist = molgraph::shortest_path_distances_serial(m);
  std::vector<std::uint64_t> ids;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int d = dist.at(i, j);
      if (d < 1 || d > 30) continue;
      const auto ti = type[static_cast<std::size_t>(i)];
      const auto tj = type[static_cast<std::size_t>(j)];
      ids.push_back(hash_words({kTagPair, std::min(ti, tj), static_cast<std::uint64_t>(d), std::max(ti, tj)}));
    }
  }
  return ids;
}

std::vector<std::uint64_t> torsion_identifiers(const Molecule& input) {
  const Molecule m = perceived(input);
  const int n = m.atom_count();
  using Type = std::array<int, 3>;
  std::vector<Type> type(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    type[static_cast<std::size_t>(i)] = {m.atom(i).atomic_number, molgraph::pi_electrons(m, i), m.heavy_degree(i)};
  }

  std::vector<std::uint64_t> ids;
  auto emit = [&](const std::array<int, 4>& path) {
    std::array<Type, 4> fwd;
    std::array<Type, 4> rev;
    for (std::size_t k = 0; k < 4; ++k) {
      fwd[k] = type[static_cast<std::size_t>(path[k])];
      rev[3 - k] = fwd[k];
    }
    const auto& pick = std::min(fwd, rev);
    StableHasher h;
    h.add(kTagTorsion);
    for (const Type& t : pick) {
      for (int v : t) h.add(as_word(v));
    }
    ids.push_back(h.finish());
  };

  // Each undirected path a-b-c-d is visited from both ends; keep a < d.
  for (int a = 0; a < n; ++a) {
    for (const Neighbor& nb : m.neighbors(a)) {
      const int b = nb.atom;
      for (const Neighbor& nc : m.neighbors(b)) {
        const int c = nc.atom;
        if (c == a) continue;
        for (const Neighbor& nd : m.neighbors(c)) {
          const int d = nd.atom;
          if (d == a || d == b || d <= a) continue;
          emit({a, b, c, d});
        }
      }
    }
  }
  return ids;
}

FingerprintVector fold(std::span<const std::uint64_t> identifiers, int length, bool counted) {
  if (length < 2) throw std::invalid_argument("fold length must be >= 2");
  FingerprintVector v;
  v.values.assign(static_cast<std::size_t>(length), 0);
  const auto n = static_cast<std::uint64_t>(length);
  for (auto id : identifiers) {
    auto& slot = v.values[static_cast<std::size_t>(id % n)];
    slot = counted ? slot + 1 : 1;
  }
  v.config.length = length;
  v.config.counted = counted;
  return v;
}

FingerprintVector ecfp(const Molecule& m, const FingerprintConfig& cfg) {
  require_kind(cfg, Kind::ecfp);
  auto v = fold(ecfp_identifiers(m, cfg.radius), cfg.length, cfg.counted);
  v.config = cfg;
  return v;
}

FingerprintVector atom_pair(const Molecule& m, const FingerprintConfig& cfg) {
  require_kind(cfg, Kind::atom_pair);
  auto v = fold(atom_pair_identifiers(m), cfg.length, cfg.counted);
  v.config = cfg;
  return v;
}

FingerprintVector topological_torsion(const Molecule& m, const FingerprintConfig& cfg) {
  require_kind(cfg, Kind::topological_torsion);
  auto v = fold(torsion_identifiers(m), cfg.length, cfg.counted);
  v.config = cfg;
  return v;
}

FingerprintVector compute(const Molecule& m, const FingerprintConfig& cfg) {
  switch (cfg.kind) {
    case Kind::ecfp: return ecfp(m, cfg);
    case Kind::atom_pair: return atom_pair(m, cfg);
    case Kind::topological_torsion: return topological_torsion(m, cfg);
  }
  throw std::invalid_argument("unknown fingerprint kind");
}

namespace {

FingerprintMatrix empty_matrix(std::size_t rows, const FingerprintConfig& cfg) {
  cfg.validate();
  FingerprintMatrix out;
  out.rows = static_cast<int>(rows);
  out.cols = cfg.length;
  out.values.assign(rows * static_cast<std::size_t>(cfg.length), 0);
  return out;
}

void fill_row(FingerprintMatrix& out, int r, const Molecule& m, const FingerprintConfig& cfg) {
  const auto v = compute(m, cfg);
  std::copy(v.values.begin(), v.values.end(),
            out.values.begin() + static_cast<std::ptrdiff_t>(r) * static_cast<std::ptrdiff_t>(out.cols));
}

}  // namespace

FingerprintMatrix fingerprint_matrix_serial(std::span<const Molecule> mols, const FingerprintConfig& cfg) {
  auto out = empty_matrix(mols.size(), cfg);
  for (int r = 0; r < out.rows; ++r) fill_row(out, r, mols[static_cast<std::size_t>(r)], cfg);
  return out;
}

FingerprintMatrix fingerprint_matrix(std::span<const Molecule> mols, const FingerprintConfig& cfg) {
  auto out = empty_matrix(mols.size(), cfg);
  const int rows = out.rows;
#pragma omp parallel for schedule(dynamic, 16)
  for (int r = 0; r < rows; ++r) fill_row(out, r, mols[static_cast<std::size_t>(r)], cfg);
  return out;
}

}  // namespace molbench::fp
