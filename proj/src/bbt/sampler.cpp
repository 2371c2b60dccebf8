#include <algorithm>
#include <cmath>
#include <random>

#include "molbench/bbt.hpp"
#include "molbench/errors.hpp"
#include "molbench/random.hpp"

namespace molbench::bbt {

namespace {

constexpr double kTargetAcceptance = 0.44;

double log_inv_logit(double x) { return x > 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

/// One chain over (beta_0 .. beta_{M-2}, u = log sigma); beta_{M-1} is
/// minus the sum of the free abilities.
class Chain {
public:
  Chain(const WinTable& w, const PriorConfig& prior, Rng rng) : w_(w), prior_(prior), rng_(std::move(rng)) {
    m_ = w.size();
    beta_ = Eigen::VectorXd::Zero(m_);
    std::normal_distribution<double> start(0.0, 1.0);
    for (int k = 0; k + 1 < m_; ++k) beta_(k) = start(rng_);
    beta_(m_ - 1) = -free_sum(beta_);
    u_ = prior.log_sigma_mean + prior.log_sigma_sd * start(rng_);
    sum_sq_ = beta_.squaredNorm();
    log_scale_.assign(static_cast<std::size_t>(m_), std::log(0.5));
    accepted_.assign(static_cast<std::size_t>(m_), 0);
  }

  /// One sweep over all coordinates; `adapt_step` > 0 tunes proposal scales.
  void sweep(double adapt_step) {
    std::normal_distribution<double> step(0.0, 1.0);
    for (int k = 0; k < m_; ++k) {
      const double delta = std::exp(log_scale_[static_cast<std::size_t>(k)]) * step(rng_);
      const double log_ratio = k + 1 < m_ ? beta_ratio(k, delta) : sigma_ratio(delta);
      const bool accept = log_ratio >= 0 || uniform01(rng_) < std::exp(log_ratio);
      if (accept) {
        if (k + 1 < m_) {
          move_beta(k, delta);
        } else {
          u_ += delta;
        }
        ++accepted_[static_cast<std::size_t>(k)];
      }
      if (adapt_step > 0) {
        log_scale_[static_cast<std::size_t>(k)] += adapt_step * ((accept ? 1.0 : 0.0) - kTargetAcceptance);
      }
    }
  }

  void reset_counts() { std::fill(accepted_.begin(), accepted_.end(), 0); }
  const std::vector<long>& accepted() const { return accepted_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  double sigma() const { return std::exp(u_); }

private:
  /// Left-to-right sum of the free abilities, so that adding the dependent
  /// one back in the same order gives exactly zero.
  double free_sum(const Eigen::VectorXd& beta) const {
    double s = 0;
    for (int k = 0; k + 1 < m_; ++k) s += beta(k);
    return s;
  }

  /// Log-likelihood terms of every ordered pair touching a or b.
  double local_likelihood(const Eigen::VectorXd& beta, int a, int b) const {
    double ll = 0;
    for (int j = 0; j < m_; ++j) {
      for (int x : {a, b}) {
        if (j == x || ((j == a || j == b) && j < x)) continue;  // count (a,b) once
        const double d = beta(x) - beta(j);
        if (w_.wins(x, j) != 0) ll += w_.wins(x, j) * log_inv_logit(d);
        if (w_.wins(j, x) != 0) ll += w_.wins(j, x) * log_inv_logit(-d);
      }
    }
    return ll;
  }

  double beta_ratio(int k, double delta) {
    const int last = m_ - 1;
    const double before = local_likelihood(beta_, k, last);
    const double old_k = beta_(k), old_last = beta_(last);
    beta_(k) += delta;
    beta_(last) = -free_sum(beta_);
    const double after = local_likelihood(beta_, k, last);
    const double new_k = beta_(k), new_last = beta_(last);
    beta_(k) = old_k;
    beta_(last) = old_last;
    const double d_sq = new_k * new_k + new_last * new_last - old_k * old_k - old_last * old_last;
    return after - before - d_sq * std::exp(-2 * u_) / 2;
  }

  void move_beta(int k, double delta) {
    beta_(k) += delta;
    beta_(m_ - 1) = -free_sum(beta_);
    sum_sq_ = beta_.squaredNorm();
  }

  /// Target on u: normal prior on beta given sigma, LogNormal prior on sigma
  /// and the exp(u) Jacobian, which cancels the LogNormal 1/sigma factor.
  double log_target_u(double u) const {
    const double z = (u - prior_.log_sigma_mean) / prior_.log_sigma_sd;
    return -sum_sq_ * std::exp(-2 * u) / 2 - m_ * u - z * z / 2;
  }

  double sigma_ratio(double delta) const { return log_target_u(u_ + delta) - log_target_u(u_); }

  const WinTable& w_;
  PriorConfig prior_;
  Rng rng_;
  int m_ = 0;
  Eigen::VectorXd beta_;
  double u_ = 0;
  double sum_sq_ = 0;
  std::vector<double> log_scale_;
  std::vector<long> accepted_;
};

}  // namespace

AbilityPosterior sample_posterior(const WinTable& w, const BBTConfig& cfg) {
  cfg.validate();
  const int m = w.size();
  if (m < 2) throw DataError("posterior needs at least 2 models");
  if (w.wins.rows() != m || w.wins.cols() != m) throw std::invalid_argument("win matrix shape does not match models");
  if (w.wins.sum() <= 0) throw DataError("win table is all zeros");

  const int chains = cfg.chains;
  const int draws = cfg.draws_per_chain;
  std::vector<Eigen::MatrixXd> chain_beta(static_cast<std::size_t>(chains));
  std::vector<std::vector<double>> chain_sigma(static_cast<std::size_t>(chains));
  std::vector<std::vector<double>> acceptance(static_cast<std::size_t>(chains));

#pragma omp parallel for schedule(static)
  for (int c = 0; c < chains; ++c) {
    Chain chain(w, cfg.prior, make_stream(cfg.seed, static_cast<std::uint64_t>(c) + 1));
    for (int t = 0; t < cfg.warmup; ++t) chain.sweep(std::pow(t + 1.0, -0.6));
    chain.reset_counts();
    auto& beta = chain_beta[static_cast<std::size_t>(c)];
    auto& sigma = chain_sigma[static_cast<std::size_t>(c)];
    beta.resize(draws, m);
    sigma.resize(static_cast<std::size_t>(draws));
    for (int s = 0; s < draws; ++s) {
      chain.sweep(0);
      beta.row(s) = chain.beta().transpose();
      sigma[static_cast<std::size_t>(s)] = chain.sigma();
    }
    for (long a : chain.accepted()) acceptance[static_cast<std::size_t>(c)].push_back(static_cast<double>(a) / draws);
  }

  AbilityPosterior p;
  p.models = w.models;
  p.chains = chains;
  p.beta.resize(static_cast<Eigen::Index>(chains) * draws, m);
  for (int c = 0; c < chains; ++c) {
    p.beta.middleRows(static_cast<Eigen::Index>(c) * draws, draws) = chain_beta[static_cast<std::size_t>(c)];
    p.sigma.insert(p.sigma.end(), chain_sigma[static_cast<std::size_t>(c)].begin(), chain_sigma[static_cast<std::size_t>(c)].end());
  }

  auto& d = p.diagnostics;
  d.max_rhat = 0;
  d.min_ess = std::numeric_limits<double>::infinity();
  auto diagnose = [&](const std::string& name, const std::vector<std::vector<double>>& series) {
    d.parameters.push_back(name);
    d.rhat.push_back(split_rhat(series));
    d.ess.push_back(effective_sample_size(series));
    d.max_rhat = std::max(d.max_rhat, d.rhat.back());
    d.min_ess = std::min(d.min_ess, d.ess.back());
  };
  std::vector<std::vector<double>> series(static_cast<std::size_t>(chains));
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < chains; ++c) {
      const auto col = chain_beta[static_cast<std::size_t>(c)].col(i);
      series[static_cast<std::size_t>(c)].assign(col.data(), col.data() + col.size());
    }
    diagnose("beta[" + w.models[static_cast<std::size_t>(i)] + "]", series);
  }
  diagnose("sigma", chain_sigma);
  d.acceptance.assign(static_cast<std::size_t>(m), 0.0);
  for (const auto& a : acceptance) {
    for (std::size_t k = 0; k < a.size(); ++k) d.acceptance[k] += a[k] / chains;
  }

  if (cfg.enforce_diagnostics && (d.max_rhat > cfg.max_rhat || d.min_ess < cfg.min_ess)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "MCMC diagnostics failed: max split R-hat %.4f (limit %.4f), min ESS %.1f (limit %.0f)",
                  d.max_rhat, cfg.max_rhat, d.min_ess, cfg.min_ess);
    throw DiagnosticError(buf);
  }
  return p;
}

}  // namespace molbench::bbt
