#include <cmath>
#include <deque>
#include <stdexcept>

#include "molbench/classifiers.hpp"
#include "molbench/errors.hpp"

namespace molbench::harness {

namespace {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_finite(const FeatureMatrix& x, const char* what) {
  if (!x.allFinite()) throw DataError(std::string("logistic regression: non-finite value in ") + what + " features");
}

}  // namespace

LogisticObjective::LogisticObjective(const FeatureMatrix& x, std::span<const int> y, double lambda) : x_(x) {
  if (!(lambda > 0)) throw std::invalid_argument("logistic regression: lambda must be positive");
  if (x.rows() == 0) throw std::invalid_argument("logistic regression: empty training set");
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw std::invalid_argument("logistic regression: feature and label counts differ");
  }
  y_.resize(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) y_(i) = y[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0;
  penalty_ = 1.0 / (2.0 * lambda * static_cast<double>(x.rows()));
}

double LogisticObjective::value(const Eigen::VectorXd& params) const {
  const auto d = x_.cols();
  const Eigen::VectorXd z = (x_ * params.head(d)).array() + params(d);
  double loss = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) loss += softplus(z(i)) - y_(i) * z(i);
  return loss / static_cast<double>(x_.rows()) + penalty_ * params.head(d).squaredNorm();
}

double LogisticObjective::value_and_gradient(const Eigen::VectorXd& params, Eigen::VectorXd& gradient) const {
  const auto d = x_.cols();
  const double n = static_cast<double>(x_.rows());
  const Eigen::VectorXd z = (x_ * params.head(d)).array() + params(d);
  Eigen::VectorXd residual(z.size());
  double loss = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    loss += softplus(z(i)) - y_(i) * z(i);
    residual(i) = sigmoid(z(i)) - y_(i);
  }
  gradient.resize(d + 1);
  gradient.head(d) = (x_.transpose() * residual) / n + 2.0 * penalty_ * params.head(d);
  gradient(d) = residual.sum() / n;
  return loss / n + penalty_ * params.head(d).squaredNorm();
}

std::vector<double> LogisticModel::predict(const FeatureMatrix& x) const {
  if (x.cols() != weights.size()) throw std::invalid_argument("logistic regression: dimension mismatch");
  check_finite(x, "test");
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const double z = ((x.row(r) - mean).cwiseQuotient(scale)).dot(weights) + bias;
    out[static_cast<std::size_t>(r)] = sigmoid(z);
  }
  return out;
}

LogisticModel fit_logreg(const FeatureMatrix& train_x, std::span<const int> train_y, double lambda,
                         const LogRegOptions& options) {
  check_finite(train_x, "training");
  LogisticModel model;
  const auto n = train_x.rows();
  const auto d = train_x.cols();
  model.mean = n > 0 ? Eigen::RowVectorXd(train_x.colwise().mean()) : Eigen::RowVectorXd::Zero(d);
  model.scale.resize(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const double var = n > 0 ? (train_x.col(c).array() - model.mean(c)).square().mean() : 0.0;
    model.scale(c) = var > 0 ? std::sqrt(var) : 1.0;
  }
  FeatureMatrix z(n, d);
  for (Eigen::Index r = 0; r < n; ++r) z.row(r) = (train_x.row(r) - model.mean).cwiseQuotient(model.scale);

  const LogisticObjective objective(z, train_y, lambda);
  const int dim = objective.dim();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd g;
  double f = objective.value_and_gradient(x, g);
  model.loss_history.push_back(f);

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  Eigen::VectorXd g_new;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (g.norm() <= options.gradient_tolerance) {
      model.converged = true;
      break;
    }
    // Two-loop recursion.
    Eigen::VectorXd q = g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    Eigen::VectorXd p = -q;
    double slope = g.dot(p);
    if (!(slope < 0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      p = -g;
      slope = -g.squaredNorm();
    }

    double t = s_hist.empty() ? std::min(1.0, 1.0 / g.norm()) : 1.0;
    double f_new = 0;
    Eigen::VectorXd x_new;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + t * p;
      f_new = objective.value_and_gradient(x_new, g_new);
      if (f_new <= f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted || f_new > f) break;  // no representable descent left

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    g = g_new;
    f = f_new;
    model.loss_history.push_back(f);
  }
  if (!model.converged && g.norm() <= options.gradient_tolerance) model.converged = true;
  model.iterations = iter;
  model.weights = x.head(d);
  model.bias = x(d);
  return model;
}

std::vector<double> train_predict_logreg(const FeatureMatrix& train_x, std::span<const int> train_y,
                                         const FeatureMatrix& test_x, double lambda, const LogRegOptions& options) {
  return fit_logreg(train_x, train_y, lambda, options).predict(test_x);
}

}  // namespace molbench::harness
