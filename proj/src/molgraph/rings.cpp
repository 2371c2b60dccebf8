#include <algorithm>
#include <array>

#include "molbench/molgraph.hpp"

namespace molbench::molgraph {

namespace {

// Iterative Tarjan bridge finding. Returns per-bond bridge flags.
std::vector<bool> find_bridges(const Molecule& m) {
  const int n = m.atom_count();
  std::vector<bool> bridge(static_cast<std::size_t>(m.bond_count()), false);
  std::vector<int> disc(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  int timer = 0;

  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  std::vector<Frame> stack;

  for (int root = 0; root < n; ++root) {
    if (disc[static_cast<std::size_t>(root)] >= 0) continue;
    disc[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = timer++;
    stack.push_back({root, -1, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto nbrs = m.neighbors(f.atom);
      if (f.next < nbrs.size()) {
        const Neighbor nb = nbrs[f.next++];
        if (nb.bond == f.parent_bond) continue;
        const auto v = static_cast<std::size_t>(nb.atom);
        if (disc[v] < 0) {
          disc[v] = low[v] = timer++;
          stack.push_back({nb.atom, nb.bond, 0});
        } else {
          low[static_cast<std::size_t>(f.atom)] = std::min(low[static_cast<std::size_t>(f.atom)], disc[v]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        const auto u = static_cast<std::size_t>(stack.back().atom);
        const auto v = static_cast<std::size_t>(done.atom);
        low[u] = std::min(low[u], low[v]);
        if (low[v] > disc[u]) bridge[static_cast<std::size_t>(done.parent_bond)] = true;
      }
    }
  }
  return bridge;
}

// Simple 6-cycles over ring bonds, each reported once as a bond list.
std::vector<std::array<int, 6>> six_cycles(const Molecule& m, const std::vector<bool>& ring_bond) {
  std::vector<std::array<int, 6>> cycles;
  std::array<int, 6> path_atoms{};
  std::array<int, 6> path_bonds{};

  auto extend = [&](auto&& self, int depth) -> void {
    const int start = path_atoms[0];
    const int tail = path_atoms[static_cast<std::size_t>(depth - 1)];
    for (const Neighbor& nb : m.neighbors(tail)) {
      if (!ring_bond[static_cast<std::size_t>(nb.bond)]) continue;
      if (depth == 6) {
        // Close the ring; visit each cycle once per direction, keep one.
        if (nb.atom == start && path_atoms[1] < path_atoms[5]) {
          path_bonds[5] = nb.bond;
          cycles.push_back(path_bonds);
        }
        continue;
      }
      if (nb.atom <= start) continue;
      if (std::find(path_atoms.begin(), path_atoms.begin() + depth, nb.atom) != path_atoms.begin() + depth) continue;
      path_atoms[static_cast<std::size_t>(depth)] = nb.atom;
      path_bonds[static_cast<std::size_t>(depth - 1)] = nb.bond;
      self(self, depth + 1);
    }
  };

  for (int s = 0; s < m.atom_count(); ++s) {
    path_atoms[0] = s;
    extend(extend, 1);
  }
  return cycles;
}

bool kekule_candidate_element(int z) { return z == 6 || z == 7 || z == 8 || z == 16; }

}  // namespace

Molecule perceive_rings(const Molecule& m) {
  const std::vector<bool> bridge = find_bridges(m);
  std::vector<Atom> atoms(m.atoms().begin(), m.atoms().end());
  std::vector<Bond> bonds(m.bonds().begin(), m.bonds().end());
  std::vector<bool> ring_bond(bonds.size());
  std::vector<bool> ring_atom(atoms.size(), false);
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    ring_bond[b] = !bridge[b];
    bonds[b].in_ring = ring_bond[b];
    if (ring_bond[b]) {
      ring_atom[static_cast<std::size_t>(bonds[b].begin)] = true;
      ring_atom[static_cast<std::size_t>(bonds[b].end)] = true;
    }
  }

  // Aromatic input flags survive only on ring atoms and ring bonds.
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (!ring_atom[a]) atoms[a].aromatic = false;
  }
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    if (bonds[b].order == BondOrder::aromatic && !ring_bond[b]) bonds[b].order = BondOrder::single;
  }

  // Kekule 6-rings of strictly alternating single/double bonds among C/N/O/S.
  // Candidates are judged against the input orders, then applied together.
  std::vector<std::array<int, 6>> aromatic_rings;
  for (const auto& cycle : six_cycles(m, ring_bond)) {
    bool ok = true;
    for (int i = 0; i < 6 && ok; ++i) {
      const Bond& b = m.bond(cycle[static_cast<std::size_t>(i)]);
      const Bond& next = m.bond(cycle[static_cast<std::size_t>((i + 1) % 6)]);
      const bool is_double = b.order == BondOrder::double_;
      const bool next_double = next.order == BondOrder::double_;
      if (!(is_double || b.order == BondOrder::single) || is_double == next_double) ok = false;
      if (!kekule_candidate_element(m.atom(b.begin).atomic_number) ||
          !kekule_candidate_element(m.atom(b.end).atomic_number)) {
        ok = false;
      }
    }
    if (ok) aromatic_rings.push_back(cycle);
  }
  for (const auto& cycle : aromatic_rings) {
    for (int b : cycle) {
      Bond& bond = bonds[static_cast<std::size_t>(b)];
      bond.order = BondOrder::aromatic;
      atoms[static_cast<std::size_t>(bond.begin)].aromatic = true;
      atoms[static_cast<std::size_t>(bond.end)].aromatic = true;
    }
  }

  Molecule out(std::move(atoms), std::move(bonds));
  out.rings_perceived_ = true;
  return out;
}

}  // namespace molbench::molgraph
