#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "molbench/classifiers.hpp"

namespace molbench::harness {

namespace {

void check_inputs(const FeatureMatrix& train_x, std::span<const int> train_y, const FeatureMatrix& test_x, int k) {
  if (train_x.rows() == 0) throw std::invalid_argument("kNN: empty training set");
  if (static_cast<std::size_t>(train_x.rows()) != train_y.size()) {
    throw std::invalid_argument("kNN: feature and label counts differ");
  }
  if (test_x.rows() > 0 && test_x.cols() != train_x.cols()) throw std::invalid_argument("kNN: dimension mismatch");
  if (k < 1) throw std::invalid_argument("kNN: k must be positive");
}

double score_row(const FeatureMatrix& train_x, std::span<const int> train_y, const FeatureMatrix& test_x,
                 Eigen::Index row, int k, std::vector<std::pair<double, int>>& scratch) {
  const auto n = train_x.rows();
  scratch.resize(static_cast<std::size_t>(n));
  const auto q = test_x.row(row);
  for (Eigen::Index i = 0; i < n; ++i) {
    scratch[static_cast<std::size_t>(i)] = {(train_x.row(i) - q).squaredNorm(), static_cast<int>(i)};
  }
  const auto kk = static_cast<std::ptrdiff_t>(std::min<Eigen::Index>(k, n));
  std::partial_sort(scratch.begin(), scratch.begin() + kk, scratch.end());
  int positives = 0;
  for (std::ptrdiff_t j = 0; j < kk; ++j) positives += train_y[static_cast<std::size_t>(scratch[static_cast<std::size_t>(j)].second)] == 1;
  return static_cast<double>(positives) / static_cast<double>(kk);
}

}  // namespace

std::vector<double> train_predict_knn_serial(const FeatureMatrix& train_x, std::span<const int> train_y,
                                             const FeatureMatrix& test_x, int k) {
  check_inputs(train_x, train_y, test_x, k);
  std::vector<double> scores(static_cast<std::size_t>(test_x.rows()));
  std::vector<std::pair<double, int>> scratch;
  for (Eigen::Index r = 0; r < test_x.rows(); ++r) {
    scores[static_cast<std::size_t>(r)] = score_row(train_x, train_y, test_x, r, k, scratch);
  }
  return scores;
}

std::vector<double> train_predict_knn(const FeatureMatrix& train_x, std::span<const int> train_y,
                                      const FeatureMatrix& test_x, int k) {
  check_inputs(train_x, train_y, test_x, k);
  const auto rows = static_cast<std::ptrdiff_t>(test_x.rows());
  std::vector<double> scores(static_cast<std::size_t>(rows));
#pragma omp parallel
  {
    std::vector<std::pair<double, int>> scratch;
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
      scores[static_cast<std::size_t>(r)] = score_row(train_x, train_y, test_x, r, k, scratch);
    }
  }
  return scores;
}

}  // namespace molbench::harness
