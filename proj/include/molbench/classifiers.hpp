#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "molbench/dataset.hpp"

namespace molbench::harness {

// ---------------------------------------------------------------------------
// k-nearest neighbors

/// Score of each test row = fraction of its k Euclidean-nearest training rows
/// labelled 1. Distance ties are broken by lower training index. k larger
/// than the training set is clamped to its size.
std::vector<double> train_predict_knn(const FeatureMatrix& train_x, std::span<const int> train_y,
                                      const FeatureMatrix& test_x, int k);
std::vector<double> train_predict_knn_serial(const FeatureMatrix& train_x, std::span<const int> train_y,
                                             const FeatureMatrix& test_x, int k);

// ---------------------------------------------------------------------------
// L2-regularized logistic regression

struct LogRegOptions {
  double gradient_tolerance = 1e-6;
  int max_iterations = 10000;
  int memory = 10;
};

/// Mean log-loss + ||w||^2 / (2 * lambda * n) over standardized features with
/// an unpenalized bias. Parameters are packed as [w_0 .. w_{d-1}, bias].
class LogisticObjective {
public:
  LogisticObjective(const FeatureMatrix& x, std::span<const int> y, double lambda);

  int dim() const { return static_cast<int>(x_.cols()) + 1; }
  double value(const Eigen::VectorXd& params) const;
  double value_and_gradient(const Eigen::VectorXd& params, Eigen::VectorXd& gradient) const;

private:
  const FeatureMatrix& x_;
  Eigen::VectorXd y_;
  double penalty_;
};

struct LogisticModel {
  Eigen::VectorXd weights;
  double bias = 0;
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;
  int iterations = 0;
  bool converged = false;
  /// Objective value after every accepted step, starting at the initial point.
  std::vector<double> loss_history;

  std::vector<double> predict(const FeatureMatrix& x) const;
};

/// Standardizes features with training statistics (zero-variance columns are
/// centered only), then minimizes the objective with L-BFGS and an Armijo
/// backtracking line search until the gradient Euclidean norm drops below the
/// tolerance. Throws std::invalid_argument for lambda <= 0 and DataError for
/// non-finite features.
LogisticModel fit_logreg(const FeatureMatrix& train_x, std::span<const int> train_y, double lambda,
                         const LogRegOptions& options = {});

std::vector<double> train_predict_logreg(const FeatureMatrix& train_x, std::span<const int> train_y,
                                         const FeatureMatrix& test_x, double lambda,
                                         const LogRegOptions& options = {});

// ---------------------------------------------------------------------------
// Random forest

struct ForestParams {
  int n_trees = 500;
  int min_samples_split = 2;
  std::uint64_t seed = 0;
};

/// Bootstrap forest of entropy-split trees with floor(sqrt(d)) candidate
/// features per node drawn from a per-tree random stream. Score = mean leaf
/// positive fraction across trees. Trees are grown independently, so the
/// parallel and serial versions return bit-identical scores for a seed.
std::vector<double> train_predict_rf(const FeatureMatrix& train_x, std::span<const int> train_y,
                                     const FeatureMatrix& test_x, const ForestParams& params);
std::vector<double> train_predict_rf_serial(const FeatureMatrix& train_x, std::span<const int> train_y,
                                            const FeatureMatrix& test_x, const ForestParams& params);

}  // namespace molbench::harness
