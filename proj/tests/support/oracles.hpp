#pragma once

// Independent reference computations used by unit and acceptance tests.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace molbench::testdata {

/// P(pos > neg) + 0.5 P(tie) by enumerating every positive/negative pair.
inline double brute_auroc(std::span<const double> scores, std::span<const int> labels) {
  long double num = 0;
  long double pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1;
      if (scores[i] > scores[j]) num += 1;
      else if (scores[i] == scores[j]) num += 0.5L;
    }
  }
  return static_cast<double>(num / pairs);
}

struct AurocInstance {
  std::vector<double> scores;
  std::vector<int> labels;
};

/// Random instance with both classes and scores drawn from a coarse grid so
/// ties occur often.
inline AurocInstance random_auroc_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(2, 50);
  std::uniform_int_distribution<int> level(0, 9);
  std::uniform_real_distribution<double> fine(0.0, 1.0);
  AurocInstance inst;
  const int n = size(rng);
  for (int i = 0; i < n; ++i) {
    inst.labels.push_back(static_cast<int>(rng() & 1));
    inst.scores.push_back(i % 3 == 0 ? fine(rng) : level(rng) / 10.0);
  }
  inst.labels[0] = 0;
  inst.labels[1] = 1;
  std::shuffle(inst.labels.begin(), inst.labels.end(), rng);
  return inst;
}

/// Central finite differences with step h.
inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double up = f(probe);
    probe(i) = x(i) - h;
    const double down = f(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2 * h);
  }
  return g;
}

inline double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() / scale;
}

}  // namespace molbench::testdata
