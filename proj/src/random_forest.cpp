#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "molbench/classifiers.hpp"
#include "molbench/random.hpp"

namespace molbench::harness {

namespace {

struct Node {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;
  int left = -1;
  int right = -1;
  double value = 0;
};

using Tree = std::vector<Node>;

double entropy(double pos, double n) {
  if (pos <= 0 || pos >= n) return 0;
  const double p = pos / n;
  return -p * std::log(p) - (1 - p) * std::log(1 - p);
}

/// Column-major copy of the training features plus the columns that vary at
/// all; columns constant over the whole training set can never split.
struct TrainingColumns {
  Eigen::MatrixXd x;
  std::vector<int> varying;
  int max_features = 1;

  explicit TrainingColumns(const FeatureMatrix& train) : x(train) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (x.col(c).minCoeff() != x.col(c).maxCoeff()) varying.push_back(static_cast<int>(c));
    }
    max_features = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(x.cols())))));
  }
};

class TreeBuilder {
public:
  TreeBuilder(const TrainingColumns& cols, std::span<const int> y, int min_split, Rng rng)
      : x_(cols.x), y_(y), min_split_(min_split), max_features_(cols.max_features), rng_(std::move(rng)),
        features_(cols.varying) {}

  Tree build() {
    const auto n = static_cast<std::uint64_t>(x_.rows());
    std::vector<int> sample(n);
    for (auto& s : sample) s = static_cast<int>(uniform_below(rng_, n));
    grow(sample, 0, sample.size());
    return std::move(nodes_);
  }

private:
  int grow(std::vector<int>& sample, std::size_t begin, std::size_t end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const std::size_t n = end - begin;
    std::size_t pos = 0;
    for (std::size_t i = begin; i < end; ++i) pos += y_[static_cast<std::size_t>(sample[i])] == 1;
    nodes_[static_cast<std::size_t>(id)].value = static_cast<double>(pos) / static_cast<double>(n);
    if (n < static_cast<std::size_t>(min_split_) || pos == 0 || pos == n) return id;

    int best_feature = -1;
    double best_threshold = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    const std::size_t d = features_.size();
    int informative = 0;
    // Draw features without replacement until enough non-constant ones were seen.
    for (std::size_t k = 0; k < d && informative < max_features_; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(uniform_below(rng_, d - k));
      std::swap(features_[k], features_[j]);
      const int f = features_[k];
      const double first = x_(sample[begin], f);
      bool constant = true;
      for (std::size_t i = begin + 1; i < end && constant; ++i) constant = x_(sample[i], f) == first;
      if (constant) continue;
      ++informative;
      buf_.clear();
      for (std::size_t i = begin; i < end; ++i) {
        buf_.emplace_back(x_(sample[i], f), y_[static_cast<std::size_t>(sample[i])] == 1);
      }
      std::sort(buf_.begin(), buf_.end());
      std::size_t left_pos = 0;
      for (std::size_t i = 1; i < n; ++i) {
        left_pos += buf_[i - 1].second;
        if (buf_[i].first == buf_[i - 1].first) continue;
        const double nl = static_cast<double>(i);
        const double nr = static_cast<double>(n - i);
        const double cost = nl * entropy(static_cast<double>(left_pos), nl) +
                            nr * entropy(static_cast<double>(pos - left_pos), nr);
        if (cost < best_cost) {
          best_cost = cost;
          best_feature = f;
          best_threshold = buf_[i - 1].first;
        }
      }
    }
    if (best_feature < 0) return id;

    const auto mid = std::stable_partition(sample.begin() + static_cast<std::ptrdiff_t>(begin),
                                           sample.begin() + static_cast<std::ptrdiff_t>(end),
                                           [&](int s) { return x_(s, best_feature) <= best_threshold; });
    const auto split = static_cast<std::size_t>(mid - sample.begin());
    const int left = grow(sample, begin, split);
    const int right = grow(sample, split, end);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  const Eigen::MatrixXd& x_;
  std::span<const int> y_;
  int min_split_;
  int max_features_;
  Rng rng_;
  std::vector<int> features_;
  std::vector<std::pair<double, bool>> buf_;
  Tree nodes_;
};

double predict_tree(const Tree& tree, const FeatureMatrix& x, Eigen::Index row) {
  int at = 0;
  while (tree[static_cast<std::size_t>(at)].feature >= 0) {
    const auto& node = tree[static_cast<std::size_t>(at)];
    at = x(row, node.feature) <= node.threshold ? node.left : node.right;
  }
  return tree[static_cast<std::size_t>(at)].value;
}

void check_inputs(const FeatureMatrix& train_x, std::span<const int> train_y, const FeatureMatrix& test_x,
                  const ForestParams& params) {
  if (train_x.rows() == 0) throw std::invalid_argument("random forest: empty training set");
  if (static_cast<std::size_t>(train_x.rows()) != train_y.size()) {
    throw std::invalid_argument("random forest: feature and label counts differ");
  }
  if (train_x.cols() == 0) throw std::invalid_argument("random forest: zero-dimensional features");
  if (test_x.rows() > 0 && test_x.cols() != train_x.cols()) throw std::invalid_argument("random forest: dimension mismatch");
  if (params.n_trees < 1) throw std::invalid_argument("random forest: n_trees must be positive");
  if (params.min_samples_split < 2) throw std::invalid_argument("random forest: min_samples_split must be >= 2");
}

Tree build_tree(const TrainingColumns& cols, std::span<const int> train_y, const ForestParams& params, int t) {
  return TreeBuilder(cols, train_y, params.min_samples_split,
                     make_stream(params.seed, static_cast<std::uint64_t>(t)))
      .build();
}

double forest_score(const std::vector<Tree>& trees, const FeatureMatrix& x, Eigen::Index row) {
  double sum = 0;
  for (const auto& tree : trees) sum += predict_tree(tree, x, row);
  return sum / static_cast<double>(trees.size());
}

}  // namespace

std::vector<double> train_predict_rf_serial(const FeatureMatrix& train_x, std::span<const int> train_y,
                                            const FeatureMatrix& test_x, const ForestParams& params) {
  check_inputs(train_x, train_y, test_x, params);
  std::vector<Tree> trees;
  trees.reserve(static_cast<std::size_t>(params.n_trees));
  const TrainingColumns cols(train_x);
  for (int t = 0; t < params.n_trees; ++t) trees.push_back(build_tree(cols, train_y, params, t));
  std::vector<double> scores(static_cast<std::size_t>(test_x.rows()));
  for (Eigen::Index r = 0; r < test_x.rows(); ++r) scores[static_cast<std::size_t>(r)] = forest_score(trees, test_x, r);
  return scores;
}

std::vector<double> train_predict_rf(const FeatureMatrix& train_x, std::span<const int> train_y,
                                     const FeatureMatrix& test_x, const ForestParams& params) {
  check_inputs(train_x, train_y, test_x, params);
  std::vector<Tree> trees(static_cast<std::size_t>(params.n_trees));
  const TrainingColumns cols(train_x);
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < params.n_trees; ++t) trees[static_cast<std::size_t>(t)] = build_tree(cols, train_y, params, t);
  const auto rows = static_cast<std::ptrdiff_t>(test_x.rows());
  std::vector<double> scores(static_cast<std::size_t>(rows));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) scores[static_cast<std::size_t>(r)] = forest_score(trees, test_x, r);
  return scores;
}

}  // namespace molbench::harness
