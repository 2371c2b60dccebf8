#include <cmath>
#include <numbers>

#include "molbench/bbt.hpp"
#include "molbench/errors.hpp"

namespace molbench::bbt {

namespace {

double log_inv_logit(double x) { return x > 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

double log_normal_density(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2 * std::numbers::pi);
}

}  // namespace

void BBTConfig::validate() const {
  if (!(epsilon_tie >= 0)) throw ConfigError("epsilon_tie must be non-negative");
  if (!(rope_low >= 0 && rope_low < 0.5 && rope_high > 0.5 && rope_high <= 1)) {
    throw ConfigError("rope must satisfy 0 <= low < 0.5 < high <= 1");
  }
  if (!(equivalence_mass > 0 && equivalence_mass <= 1)) throw ConfigError("equivalence_mass must be in (0, 1]");
  if (!(hdi_mass > 0 && hdi_mass < 1)) throw ConfigError("hdi_mass must be in (0, 1)");
  if (chains < 2) throw ConfigError("at least 2 chains are required");
  if (draws_per_chain < 4) throw ConfigError("draws_per_chain must be at least 4");
  if (warmup < 0) throw ConfigError("warmup must be non-negative");
  if (!(prior.log_sigma_sd > 0)) throw ConfigError("prior log_sigma_sd must be positive");
}

double log_likelihood(const Eigen::VectorXd& beta, const WinTable& w) {
  double ll = 0;
  const int m = w.size();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double d = beta(i) - beta(j);
      if (w.wins(i, j) != 0) ll += w.wins(i, j) * log_inv_logit(d);
      if (w.wins(j, i) != 0) ll += w.wins(j, i) * log_inv_logit(-d);
    }
  }
  return ll;
}

double log_posterior(const Eigen::VectorXd& beta, double sigma, const WinTable& w, const PriorConfig& prior) {
  if (beta.size() != w.size()) throw std::invalid_argument("log_posterior: beta size must equal model count");
  if (!(sigma > 0)) throw std::invalid_argument("log_posterior: sigma must be positive");
  double lp = log_likelihood(beta, w);
  for (Eigen::Index i = 0; i < beta.size(); ++i) lp += log_normal_density(beta(i), 0.0, sigma);
  // LogNormal density: normal on log sigma with the 1/sigma Jacobian.
  lp += log_normal_density(std::log(sigma), prior.log_sigma_mean, prior.log_sigma_sd) - std::log(sigma);
  return lp;
}

}  // namespace molbench::bbt
