#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include <json.hpp>

#include "molbench/bbt.hpp"
#include "molbench/csv.hpp"
#include "molbench/random.hpp"

namespace molbench::bbt {

namespace {

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

Interval hdi(std::span<const double> draws, double mass) {
  if (draws.size() < 100) throw std::invalid_argument("hdi needs at least 100 draws");
  if (!(mass > 0 && mass < 1)) throw std::invalid_argument("hdi mass must be in (0, 1)");
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const auto k = static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n)));
  std::size_t best = 0;
  double width = sorted[k - 1] - sorted[0];
  for (std::size_t i = 1; i + k <= n; ++i) {
    const double w = sorted[i + k - 1] - sorted[i];
    if (w < width) {
      width = w;
      best = i;
    }
  }
  return {sorted[best], sorted[best + k - 1]};
}

std::vector<double> pair_draws(const AbilityPosterior& p, int i, int j) {
  std::vector<double> out(static_cast<std::size_t>(p.draws()));
  for (int s = 0; s < p.draws(); ++s) out[static_cast<std::size_t>(s)] = inv_logit(p.beta(s, i) - p.beta(s, j));
  return out;
}

PairSummary pair_summary(const AbilityPosterior& p, int i, int j, const BBTConfig& cfg) {
  if (i == j) throw std::invalid_argument("pair_summary needs two distinct models");
  const auto draws = pair_draws(p, i, j);
  PairSummary s;
  std::size_t in_rope = 0, above = 0;
  for (double v : draws) {
    s.mean += v;
    in_rope += v >= cfg.rope_low && v <= cfg.rope_high;
    above += v > 0.5;
  }
  const double n = static_cast<double>(draws.size());
  s.mean /= n;
  const auto interval = hdi(draws, cfg.hdi_mass);
  s.hdi_low = interval.low;
  s.hdi_high = interval.high;
  s.p_in_rope = static_cast<double>(in_rope) / n;
  s.p_above_half = static_cast<double>(above) / n;
  return s;
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::better: return "better";
    case Decision::worse: return "worse";
    case Decision::equivalent: return "equivalent";
    case Decision::inconclusive: return "inconclusive";
  }
  return "?";
}

Decision decide(const PairSummary& s, const BBTConfig& cfg) {
  if (s.p_in_rope >= cfg.equivalence_mass) return Decision::equivalent;
  if (s.mean > cfg.rope_high) return Decision::better;
  if (s.mean < cfg.rope_low) return Decision::worse;
  return Decision::inconclusive;
}

Ranking rank_models(const AbilityPosterior& p, const BBTConfig& cfg) {
  Ranking r;
  const int m = static_cast<int>(p.models.size());
  for (int i = 0; i < m; ++i) {
    const auto col = p.beta.col(i);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / std::max<double>(1.0, static_cast<double>(col.size()) - 1);
    r.entries.push_back({p.models[static_cast<std::size_t>(i)], mean, std::sqrt(var)});
  }
  std::stable_sort(r.entries.begin(), r.entries.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.mean_beta != b.mean_beta) return a.mean_beta > b.mean_beta;
    return a.model < b.model;
  });
  r.indistinguishable = true;
  for (int i = 0; i < m && r.indistinguishable; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const auto s = pair_summary(p, i, j, cfg);
      if (s.hdi_low > 0.5 || s.hdi_high < 0.5) {
        r.indistinguishable = false;
        break;
      }
    }
  }
  return r;
}

std::vector<PpcResult> posterior_predictive_check(const AbilityPosterior& p, const WinTable& w, std::uint64_t seed) {
  std::vector<PpcResult> out;
  const int m = w.size();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const long total = std::lround(w.total(i, j));
      if (total == 0) continue;
      PpcResult r;
      r.i = i;
      r.j = j;
      r.total = total;
      r.observed = std::lround(w.wins(i, j));
      Rng rng = make_stream(seed, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(j));
      long at_least = 0;
      for (int s = 0; s < p.draws(); ++s) {
        std::binomial_distribution<long> replicate(total, inv_logit(p.beta(s, i) - p.beta(s, j)));
        at_least += replicate(rng) >= r.observed;
      }
      r.p_value = static_cast<double>(at_least) / p.draws();
      r.flagged = r.p_value < 0.05 || r.p_value > 0.95;
      out.push_back(r);
    }
  }
  return out;
}

std::vector<PairRow> all_pairs(const AbilityPosterior& p, const BBTConfig& cfg) {
  std::vector<PairRow> rows;
  const int m = static_cast<int>(p.models.size());
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      PairRow row{i, j, pair_summary(p, i, j, cfg), Decision::inconclusive};
      if (row.summary.mean < 0.5) row = {j, i, pair_summary(p, j, i, cfg), Decision::inconclusive};
      row.decision = decide(row.summary, cfg);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_pairwise_csv(std::ostream& out, const std::vector<std::string>& models, const std::vector<PairRow>& rows) {
  csv::write_row(out, {"pair", "mean", "hdi_low", "hdi_high", "p_in_rope", "p_above_half", "decision"});
  for (const auto& r : rows) {
    const auto& s = r.summary;
    csv::write_row(out, {models[static_cast<std::size_t>(r.winner)] + ">" + models[static_cast<std::size_t>(r.loser)],
                         fixed6(s.mean), fixed6(s.hdi_low), fixed6(s.hdi_high), fixed6(s.p_in_rope),
                         fixed6(s.p_above_half), std::string(to_string(r.decision))});
  }
}

void write_ranking_json(std::ostream& out, const AbilityPosterior& p, const Ranking& r, const BBTConfig& cfg) {
  nlohmann::ordered_json j;
  j["ranking"] = nlohmann::ordered_json::array();
  int rank = 1;
  for (const auto& e : r.entries) {
    j["ranking"].push_back({{"rank", rank++}, {"model", e.model}, {"mean_beta", e.mean_beta}, {"sd_beta", e.sd_beta}});
  }
  j["indistinguishable"] = r.indistinguishable;
  const double sigma_mean = std::accumulate(p.sigma.begin(), p.sigma.end(), 0.0) / static_cast<double>(p.sigma.size());
  j["sigma_mean"] = sigma_mean;
  auto& d = j["diagnostics"];
  d["chains"] = p.chains;
  d["draws_per_chain"] = p.chains > 0 ? p.draws() / p.chains : 0;
  d["max_rhat"] = p.diagnostics.max_rhat;
  d["min_ess"] = p.diagnostics.min_ess;
  d["parameters"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < p.diagnostics.parameters.size(); ++k) {
    d["parameters"].push_back({{"name", p.diagnostics.parameters[k]},
                               {"rhat", p.diagnostics.rhat[k]},
                               {"ess", p.diagnostics.ess[k]}});
  }
  j["config"] = {{"epsilon_tie", cfg.epsilon_tie}, {"rope", {cfg.rope_low, cfg.rope_high}},
                 {"equivalence_mass", cfg.equivalence_mass}, {"hdi_mass", cfg.hdi_mass}, {"seed", cfg.seed}};
  out << j.dump(2) << '\n';
}

}  // namespace molbench::bbt
