#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

#include "molbench/molgraph.hpp"

namespace molbench::molgraph {

Molecule::Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)), adjacency_(atoms_.size()) {
  const int n = atom_count();
  for (int i = 0; i < n; ++i) {
    Atom& a = atoms_[static_cast<std::size_t>(i)];
    if (a.atomic_number < 1 || a.atomic_number > 118) {
      throw std::invalid_argument("atomic number out of range: " + std::to_string(a.atomic_number));
    }
    a.index = i;
  }
  for (int b = 0; b < bond_count(); ++b) {
    const Bond& bond = bonds_[static_cast<std::size_t>(b)];
    if (bond.begin < 0 || bond.end < 0 || bond.begin >= n || bond.end >= n) {
      throw std::invalid_argument("bond endpoint out of range");
    }
    if (bond.begin == bond.end) throw std::invalid_argument("bond endpoints must be distinct");
    if (bond_between(bond.begin, bond.end)) throw std::invalid_argument("duplicate bond between atoms");
    adjacency_[static_cast<std::size_t>(bond.begin)].push_back({bond.end, b});
    adjacency_[static_cast<std::size_t>(bond.end)].push_back({bond.begin, b});
  }

  fragment_.assign(atoms_.size(), -1);
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (fragment_[static_cast<std::size_t>(start)] >= 0) continue;
    const int id = fragment_count_++;
    fragment_[static_cast<std::size_t>(start)] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : neighbors(a)) {
        if (fragment_[static_cast<std::size_t>(nb.atom)] < 0) {
          fragment_[static_cast<std::size_t>(nb.atom)] = id;
          stack.push_back(nb.atom);
        }
      }
    }
  }
}

std::optional<int> Molecule::bond_between(int a, int b) const {
  for (const Neighbor& nb : neighbors(a)) {
    if (nb.atom == b) return nb.bond;
  }
  return std::nullopt;
}

bool Molecule::atom_in_ring(int i) const {
  for (const Neighbor& nb : neighbors(i)) {
    if (bond(nb.bond).in_ring) return true;
  }
  return false;
}

int pi_electrons(const Molecule& m, int atom) {
  int pi = 0;
  for (const Neighbor& nb : m.neighbors(atom)) {
    switch (m.bond(nb.bond).order) {
      case BondOrder::double_: pi += 1; break;
      case BondOrder::triple: pi += 2; break;
      default: break;
    }
  }
  if (m.atom(atom).aromatic) pi += 1;
  return pi;
}

namespace {

void bfs_from(const Molecule& m, int source, DistanceMatrix& d, std::vector<int>& queue) {
  queue.clear();
  queue.push_back(source);
  d.at(source, source) = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int a = queue[head];
    const int next = d.at(source, a) + 1;
    for (const Neighbor& nb : m.neighbors(a)) {
      if (d.at(source, nb.atom) == DistanceMatrix::kUnreachable) {
        d.at(source, nb.atom) = next;
        queue.push_back(nb.atom);
      }
    }
  }
}

}  // namespace

DistanceMatrix shortest_path_distances_serial(const Molecule& m) {
  DistanceMatrix d(m.atom_count());
  std::vector<int> queue;
  for (int s = 0; s < m.atom_count(); ++s) bfs_from(m, s, d, queue);
  return d;
}

DistanceMatrix shortest_path_distances(const Molecule& m) {
  const int n = m.atom_count();
  DistanceMatrix d(n);
  // Each source writes only its own row.
#pragma omp parallel if (n >= 64)
  {
    std::vector<int> queue;
#pragma omp for schedule(static)
    for (int s = 0; s < n; ++s) bfs_from(m, s, d, queue);
  }
  return d;
}

Molecule induced_subgraph(const Molecule& m, std::span<const int> keep) {
  std::vector<int> remap(static_cast<std::size_t>(m.atom_count()), -1);
  std::vector<Atom> atoms;
  atoms.reserve(keep.size());
  for (int old : keep) {
    remap[static_cast<std::size_t>(old)] = static_cast<int>(atoms.size());
    atoms.push_back(m.atom(old));
  }
  std::vector<Bond> bonds;
  for (const Bond& b : m.bonds()) {
    const int a = remap[static_cast<std::size_t>(b.begin)];
    const int c = remap[static_cast<std::size_t>(b.end)];
    if (a >= 0 && c >= 0) {
      bonds.push_back(Bond{a, c, b.order, b.in_ring});
      continue;
    }
    // A removed neighbor becomes hydrogen on the retained side.
    const int lost = b.order == BondOrder::aromatic ? 1 : static_cast<int>(b.order);
    for (int side : {a, c}) {
      if (side < 0) continue;
      Atom& atom = atoms[static_cast<std::size_t>(side)];
      if (atom.bracket()) {
        atom.explicit_h = *atom.explicit_h + lost;
      } else {
        atom.implicit_h += lost;
      }
    }
  }
  return perceive_rings(Molecule(std::move(atoms), std::move(bonds)));
}

Molecule largest_fragment(const Molecule& m) {
  if (m.fragment_count() <= 1) return m;
  std::vector<int> sizes(static_cast<std::size_t>(m.fragment_count()), 0);
  for (int i = 0; i < m.atom_count(); ++i) ++sizes[static_cast<std::size_t>(m.fragment_of(i))];
  const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<int> keep;
  for (int i = 0; i < m.atom_count(); ++i) {
    if (m.fragment_of(i) == best) keep.push_back(i);
  }
  return induced_subgraph(m, keep);
}

}  // namespace molbench::molgraph
