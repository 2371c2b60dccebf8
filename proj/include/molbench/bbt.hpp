#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molbench/evaluate.hpp"

namespace molbench::bbt {

// ---------------------------------------------------------------------------
// Win table

struct WinTable {
  std::vector<std::string> models;
  /// wins(i, j) = datasets on which i beat j, ties credited 0.5 to both.
  Eigen::MatrixXd wins;

  int size() const { return static_cast<int>(models.size()); }
  double total(int i, int j) const { return wins(i, j) + wins(j, i); }
};

/// scores(m, d) is the AUROC of model m on dataset d; NaN marks a missing
/// cell and drops that dataset for every pair involving m. |delta| < epsilon
/// is a tie. Throws DataError for fewer than 2 models or a pair without a
/// shared dataset.
WinTable build_win_table(const std::vector<std::string>& models, const Eigen::MatrixXd& scores, double epsilon);

/// Same on the records of one head ("best" by default) of a ScoreTable;
/// models and datasets are taken in sorted name order.
WinTable build_win_table(const harness::ScoreTable& table, double epsilon, std::string_view head = "best");

// ---------------------------------------------------------------------------
// Model

struct PriorConfig {
  /// sigma ~ LogNormal(log_sigma_mean, log_sigma_sd^2).
  double log_sigma_mean = 0.0;
  double log_sigma_sd = 0.5;
};

struct BBTConfig {
  double epsilon_tie = 0.01;
  double rope_low = 0.25;
  double rope_high = 0.75;
  double equivalence_mass = 0.95;
  double hdi_mass = 0.89;
  int chains = 4;
  int draws_per_chain = 5000;
  int warmup = 5000;
  std::uint64_t seed = 0;
  PriorConfig prior;
  double max_rhat = 1.01;
  double min_ess = 400;
  /// Throw DiagnosticError when R-hat or ESS miss their gates.
  bool enforce_diagnostics = true;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Log joint density of (beta, sigma) given the table, up to the binomial
/// coefficients: sum over pairs of W_ij log pi_ij + W_ji log(1 - pi_ij),
/// plus sum_i log N(beta_i; 0, sigma^2), plus log LogNormal(sigma). `beta`
/// holds all M abilities and must sum to zero.
double log_posterior(const Eigen::VectorXd& beta, double sigma, const WinTable& w, const PriorConfig& prior = {});

/// Pairwise log-likelihood term alone.
double log_likelihood(const Eigen::VectorXd& beta, const WinTable& w);

inline double inv_logit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// ---------------------------------------------------------------------------
// Posterior sampling

struct Diagnostics {
  /// beta_0..beta_{M-1}, then sigma.
  std::vector<std::string> parameters;
  std::vector<double> rhat;
  std::vector<double> ess;
  std::vector<double> acceptance;  // per free coordinate after warmup, chain-averaged
  double max_rhat = 0;
  double min_ess = 0;
};

struct AbilityPosterior {
  std::vector<std::string> models;
  /// S x M pooled post-warmup draws in chain order; each row sums to zero.
  Eigen::MatrixXd beta;
  std::vector<double> sigma;
  int chains = 0;
  Diagnostics diagnostics;

  int draws() const { return static_cast<int>(beta.rows()); }
};

/// Adaptive Metropolis-within-Gibbs over the M-1 free abilities and
/// log sigma: each coordinate gets a Gaussian random-walk step whose scale is
/// tuned during warmup towards 0.44 acceptance, then frozen. Chains run in
/// parallel from dispersed starts on disjoint seed streams and are pooled in
/// chain order. Throws DataError for an all-zero table and DiagnosticError
/// when split R-hat or ESS miss the configured gates.
AbilityPosterior sample_posterior(const WinTable& w, const BBTConfig& cfg);

/// Split R-hat over chains of equal length (each chain halved).
double split_rhat(const std::vector<std::vector<double>>& chains);
/// Multi-chain effective sample size with Geyer's initial monotone sequence
/// on split chains.
double effective_sample_size(const std::vector<std::vector<double>>& chains);

// ---------------------------------------------------------------------------
// Summaries and decisions

struct Interval {
  double low = 0;
  double high = 0;
};

/// Narrowest window of ceil(mass * S) sorted draws; the first such window on
/// ties. Requires at least 100 draws and 0 < mass < 1.
Interval hdi(std::span<const double> draws, double mass);

struct PairSummary {
  double mean = 0;
  double hdi_low = 0;
  double hdi_high = 0;
  double p_in_rope = 0;
  double p_above_half = 0;
};

/// Per-draw pi_ij = inv_logit(beta_i - beta_j).
std::vector<double> pair_draws(const AbilityPosterior& p, int i, int j);
PairSummary pair_summary(const AbilityPosterior& p, int i, int j, const BBTConfig& cfg);

enum class Decision { better, worse, equivalent, inconclusive };
std::string_view to_string(Decision d);

/// Equivalent if p_in_rope >= equivalence_mass, else Better above rope_high,
/// Worse below rope_low, else Inconclusive.
Decision decide(const PairSummary& s, const BBTConfig& cfg);

struct RankEntry {
  std::string model;
  double mean_beta = 0;
  double sd_beta = 0;
};

struct Ranking {
  std::vector<RankEntry> entries;
  /// Every pairwise HDI contains 0.5.
  bool indistinguishable = false;
};

/// Descending posterior mean ability, exact ties by model name.
Ranking rank_models(const AbilityPosterior& p, const BBTConfig& cfg);

struct PpcResult {
  int i = 0;
  int j = 0;
  long observed = 0;
  long total = 0;
  double p_value = 0;
  bool flagged = false;
};

/// For each pair i < j with comparisons: per draw, W~ ~ Binomial(round(N_ij),
/// pi_ij); p = fraction of replicates >= round(W_ij); flagged outside
/// [0.05, 0.95].
std::vector<PpcResult> posterior_predictive_check(const AbilityPosterior& p, const WinTable& w,
                                                  std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Outputs

struct PairRow {
  int winner = 0;
  int loser = 0;
  PairSummary summary;
  Decision decision = Decision::inconclusive;
};

/// One row per unordered pair, oriented so that mean >= 0.5 (winner first),
/// in (i, j) order.
std::vector<PairRow> all_pairs(const AbilityPosterior& p, const BBTConfig& cfg);

/// CSV: pair,mean,hdi_low,hdi_high,p_in_rope,p_above_half,decision.
void write_pairwise_csv(std::ostream& out, const std::vector<std::string>& models, const std::vector<PairRow>& rows);
/// Ranking with posterior mean/sd of beta, sigma summary and diagnostics.
void write_ranking_json(std::ostream& out, const AbilityPosterior& p, const Ranking& r, const BBTConfig& cfg);

}  // namespace molbench::bbt
