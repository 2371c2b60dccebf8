#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "molbench/dataset.hpp"

namespace molbench::harness {

struct Split {
  std::vector<int> train_idx;
  std::vector<int> test_idx;
  double frac_train = 0.8;
};

/// Scaffold split: molecules grouped by Bemis-Murcko scaffold key, groups
/// ordered by descending size (ties by ascending key) and assigned to train
/// until the train side reaches frac_train * N; the rest go to test. The last
/// group always goes to test so that neither side is empty.
///
/// The ordering is fully deterministic; `seed` is accepted for interface
/// stability and recorded in cache keys but does not alter the result.
/// Throws DataError when fewer than two scaffold groups exist and
/// std::invalid_argument unless 0 < frac_train < 1.
Split scaffold_split(const Dataset& d, double frac_train, std::uint64_t seed = 0);

/// Same rule on precomputed scaffold keys, one per molecule.
Split scaffold_split_by_keys(std::span<const std::uint64_t> keys, double frac_train);

std::vector<std::uint64_t> scaffold_keys(const Dataset& d);

}  // namespace molbench::harness
