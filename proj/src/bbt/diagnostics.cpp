#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "molbench/bbt.hpp"

namespace molbench::bbt {

namespace {

/// Each chain split into two halves (middle draw dropped for odd lengths).
std::vector<std::vector<double>> split_chains(const std::vector<std::vector<double>>& chains) {
  if (chains.empty()) throw std::invalid_argument("diagnostics need at least one chain");
  const std::size_t n = chains.front().size();
  if (n < 4) throw std::invalid_argument("diagnostics need at least 4 draws per chain");
  std::vector<std::vector<double>> out;
  const std::size_t half = n / 2;
  for (const auto& c : chains) {
    if (c.size() != n) throw std::invalid_argument("chains must have equal length");
    out.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
    out.emplace_back(c.end() - static_cast<std::ptrdiff_t>(half), c.end());
  }
  return out;
}

struct ChainMoments {
  std::vector<double> means;
  double within = 0;    // W: mean within-chain variance
  double var_plus = 0;  // pooled posterior variance estimate
};

ChainMoments moments(const std::vector<std::vector<double>>& chains) {
  ChainMoments m;
  const double n = static_cast<double>(chains.front().size());
  double grand = 0;
  for (const auto& c : chains) {
    double mean = 0;
    for (double v : c) mean += v;
    mean /= n;
    double ss = 0;
    for (double v : c) ss += (v - mean) * (v - mean);
    m.means.push_back(mean);
    m.within += ss / (n - 1);
    grand += mean;
  }
  const double k = static_cast<double>(chains.size());
  m.within /= k;
  grand /= k;
  double between = 0;  // B / n
  for (double mean : m.means) between += (mean - grand) * (mean - grand);
  between = k > 1 ? between / (k - 1) : 0.0;
  m.var_plus = (n - 1) / n * m.within + between;
  return m;
}

}  // namespace

double split_rhat(const std::vector<std::vector<double>>& chains) {
  const auto halves = split_chains(chains);
  const auto m = moments(halves);
  if (m.within <= 0) return m.var_plus <= 0 ? 1.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(m.var_plus / m.within);
}

double effective_sample_size(const std::vector<std::vector<double>>& chains) {
  const auto halves = split_chains(chains);
  const auto m = moments(halves);
  const std::size_t n = halves.front().size();
  const double total = static_cast<double>(n * halves.size());
  if (m.var_plus <= 0 || m.within <= 0) return total;

  auto rho = [&](std::size_t lag) {
    double acov = 0;
    for (std::size_t c = 0; c < halves.size(); ++c) {
      const auto& x = halves[c];
      const double mean = m.means[c];
      double s = 0;
      for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - mean) * (x[i + lag] - mean);
      acov += s / static_cast<double>(n);
    }
    acov /= static_cast<double>(halves.size());
    // Within-chain autocovariances use 1/n; rescale W to match.
    const double w_biased = m.within * static_cast<double>(n - 1) / static_cast<double>(n);
    return 1.0 - (w_biased - acov) / m.var_plus;
  };

  double tau = -1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    double pair = (k == 0 ? 1.0 : rho(2 * k)) + rho(2 * k + 1);
    if (pair <= 0) break;
    pair = std::min(pair, prev);
    prev = pair;
    tau += 2 * pair;
  }
  tau = std::max(tau, 1.0 / std::log10(total));
  return total / tau;
}

}  // namespace molbench::bbt
