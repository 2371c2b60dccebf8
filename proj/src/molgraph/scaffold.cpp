#include <algorithm>

#include "molbench/hash.hpp"
#include "molbench/molgraph.hpp"

namespace molbench::molgraph {

namespace {

bool multiple_bond(BondOrder o) { return o == BondOrder::double_ || o == BondOrder::triple; }

}  // namespace

Scaffold murcko_scaffold(const Molecule& input) {
  const Molecule m = input.rings_perceived() ? input : perceive_rings(input);
  const int n = m.atom_count();
  std::vector<bool> ring(static_cast<std::size_t>(n));
  bool any_ring = false;
  for (int i = 0; i < n; ++i) {
    ring[static_cast<std::size_t>(i)] = m.atom_in_ring(i);
    any_ring = any_ring || ring[static_cast<std::size_t>(i)];
  }
  if (!any_ring) return Scaffold{};

  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  auto live_neighbors = [&](int a) {
    int count = 0;
    for (const Neighbor& nb : m.neighbors(a)) count += alive[static_cast<std::size_t>(nb.atom)] ? 1 : 0;
    return count;
  };
  // Non-ring atom with a single live neighbor reached by a double/triple bond.
  auto pendant = [&](int a) {
    if (ring[static_cast<std::size_t>(a)] || live_neighbors(a) != 1) return false;
    for (const Neighbor& nb : m.neighbors(a)) {
      if (alive[static_cast<std::size_t>(nb.atom)]) return multiple_bond(m.bond(nb.bond).order);
    }
    return false;
  };
  // Live neighbors that are not pendant multiply-bonded atoms.
  auto skeletal_degree = [&](int a) {
    int count = 0;
    for (const Neighbor& nb : m.neighbors(a)) {
      if (alive[static_cast<std::size_t>(nb.atom)] && !pendant(nb.atom)) ++count;
    }
    return count;
  };
  auto anchored = [&](int a) { return ring[static_cast<std::size_t>(a)] || skeletal_degree(a) >= 2; };

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> doomed;
    for (int a = 0; a < n; ++a) {
      if (!alive[static_cast<std::size_t>(a)] || ring[static_cast<std::size_t>(a)]) continue;
      if (pendant(a)) {
        for (const Neighbor& nb : m.neighbors(a)) {
          if (alive[static_cast<std::size_t>(nb.atom)] && !anchored(nb.atom)) doomed.push_back(a);
        }
        continue;
      }
      if (skeletal_degree(a) <= 1) doomed.push_back(a);
    }
    for (int a : doomed) {
      alive[static_cast<std::size_t>(a)] = false;
      changed = true;
    }
  }

  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (alive[static_cast<std::size_t>(i)]) keep.push_back(i);
  }
  Scaffold s;
  s.molecule = induced_subgraph(m, keep);
  s.key = scaffold_key(s.molecule);
  return s;
}

std::uint64_t scaffold_key(const Molecule& m) {
  const int n = m.atom_count();
  if (n == 0) return 0;

  std::vector<std::uint64_t> label(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Atom& a = m.atom(i);
    label[static_cast<std::size_t>(i)] =
        hash_words({static_cast<std::uint64_t>(a.atomic_number), a.aromatic ? 1u : 0u,
                    static_cast<std::uint64_t>(static_cast<std::int64_t>(a.formal_charge)),
                    static_cast<std::uint64_t>(m.heavy_degree(i))});
  }

  auto class_count = [](std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
  };

  int classes = class_count(label);
  std::vector<std::uint64_t> next(label.size());
  std::vector<std::pair<int, std::uint64_t>> env;
  for (int round = 0; round < n; ++round) {
    for (int i = 0; i < n; ++i) {
      env.clear();
      for (const Neighbor& nb : m.neighbors(i)) {
        env.emplace_back(bond_code(m.bond(nb.bond).order), label[static_cast<std::size_t>(nb.atom)]);
      }
      std::sort(env.begin(), env.end());
      StableHasher h;
      h.add(label[static_cast<std::size_t>(i)]);
      for (const auto& [code, l] : env) h.add(static_cast<std::uint64_t>(code)).add(l);
      next[static_cast<std::size_t>(i)] = h.finish();
    }
    label.swap(next);
    const int refined = class_count(label);
    if (refined == classes) break;
    classes = refined;
  }

  std::sort(label.begin(), label.end());
  StableHasher h;
  h.add(static_cast<std::uint64_t>(n)).add(static_cast<std::uint64_t>(m.bond_count()));
  h.add(label);
  const std::uint64_t key = h.finish();
  return key == 0 ? 1 : key;
}

}  // namespace molbench::molgraph
