#include "molbench/split.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "molbench/errors.hpp"

namespace molbench::harness {

std::vector<std::uint64_t> scaffold_keys(const Dataset& d) {
  std::vector<std::uint64_t> keys(static_cast<std::size_t>(d.size()));
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < d.size(); ++i) {
    keys[static_cast<std::size_t>(i)] = molgraph::murcko_scaffold(d.molecules[static_cast<std::size_t>(i)]).key;
  }
  return keys;
}

Split scaffold_split_by_keys(std::span<const std::uint64_t> keys, double frac_train) {
  if (!(frac_train > 0.0 && frac_train < 1.0)) {
    throw std::invalid_argument("frac_train must lie in (0, 1), got " + std::to_string(frac_train));
  }
  std::map<std::uint64_t, std::vector<int>> groups;
  for (std::size_t i = 0; i < keys.size(); ++i) groups[keys[i]].push_back(static_cast<int>(i));
  if (groups.size() < 2) {
    throw DataError("scaffold split impossible: " + std::to_string(groups.size()) + " scaffold group(s)");
  }

  std::vector<const std::vector<int>*> ordered;
  ordered.reserve(groups.size());
  for (const auto& [key, members] : groups) ordered.push_back(&members);
  // std::map iteration is already ascending by key; stable_sort keeps that for ties.
  std::stable_sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->size() > b->size(); });

  Split s;
  s.frac_train = frac_train;
  const double target = frac_train * static_cast<double>(keys.size());
  for (std::size_t g = 0; g < ordered.size(); ++g) {
    const bool last = g + 1 == ordered.size();
    auto& side = (!last && static_cast<double>(s.train_idx.size()) < target - 1e-9) ? s.train_idx : s.test_idx;
    side.insert(side.end(), ordered[g]->begin(), ordered[g]->end());
  }
  std::sort(s.train_idx.begin(), s.train_idx.end());
  std::sort(s.test_idx.begin(), s.test_idx.end());
  return s;
}

Split scaffold_split(const Dataset& d, double frac_train, std::uint64_t /*seed*/) {
  const auto keys = scaffold_keys(d);
  return scaffold_split_by_keys(keys, frac_train);
}

}  // namespace molbench::harness
