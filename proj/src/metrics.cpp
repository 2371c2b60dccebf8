#include "molbench/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace molbench::harness {

std::optional<double> auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auroc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of (doubled) average ranks of positives keeps everything integral.
  long double rank_sum_x2 = 0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const auto doubled_avg_rank = static_cast<long double>(i + 1 + j);  // 2 * mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum_x2 += doubled_avg_rank;
        ++positives;
      } else if (labels[order[k]] != 0) {
        throw std::invalid_argument("auroc: labels must be 0 or 1");
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;
  const long double p = static_cast<long double>(positives);
  const long double u = rank_sum_x2 / 2 - p * (p + 1) / 2;
  return static_cast<double>(u / (p * static_cast<long double>(negatives)));
}

}  // namespace molbench::harness
