#include <cmath>
#include <map>
#include <set>

#include "molbench/bbt.hpp"
#include "molbench/errors.hpp"

namespace molbench::bbt {

WinTable build_win_table(const std::vector<std::string>& models, const Eigen::MatrixXd& scores, double epsilon) {
  const int m = static_cast<int>(models.size());
  if (m < 2) throw DataError("win table needs at least 2 models");
  if (scores.rows() != m) throw std::invalid_argument("win table: score rows must match models");
  if (!(epsilon >= 0)) throw ConfigError("epsilon_tie must be non-negative");
  WinTable w;
  w.models = models;
  w.wins = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      int shared = 0;
      for (Eigen::Index d = 0; d < scores.cols(); ++d) {
        const double a = scores(i, d);
        const double b = scores(j, d);
        if (std::isnan(a) || std::isnan(b)) continue;
        ++shared;
        if (std::abs(a - b) < epsilon) {
          w.wins(i, j) += 0.5;
          w.wins(j, i) += 0.5;
        } else if (a > b) {
          w.wins(i, j) += 1;
        } else {
          w.wins(j, i) += 1;
        }
      }
      if (shared == 0) throw DataError("models '" + models[static_cast<std::size_t>(i)] + "' and '" + models[static_cast<std::size_t>(j)] + "' share no dataset");
    }
  }
  return w;
}

WinTable build_win_table(const harness::ScoreTable& table, double epsilon, std::string_view head) {
  std::set<std::string> model_set, dataset_set;
  std::map<std::pair<std::string, std::string>, double> cell;
  for (const auto& r : table.records) {
    if (r.head != head) continue;
    model_set.insert(r.model);
    dataset_set.insert(r.dataset);
    if (!cell.emplace(std::make_pair(r.model, r.dataset), r.auroc).second) {
      throw DataError("duplicate score for model '" + r.model + "' on dataset '" + r.dataset + "'");
    }
  }
  const std::vector<std::string> models(model_set.begin(), model_set.end());
  const std::vector<std::string> datasets(dataset_set.begin(), dataset_set.end());
  Eigen::MatrixXd scores = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(models.size()),
                                                     static_cast<Eigen::Index>(datasets.size()), std::nan(""));
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t d = 0; d < datasets.size(); ++d) {
      if (auto it = cell.find({models[m], datasets[d]}); it != cell.end()) {
        scores(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d)) = it->second;
      }
    }
  }
  return build_win_table(models, scores, epsilon);
}

}  // namespace molbench::bbt
