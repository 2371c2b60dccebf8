#include "molbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

#include "molbench/csv.hpp"
#include "molbench/errors.hpp"

namespace molbench::report {

namespace {

using harness::ScoreTable;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

/// model -> dataset -> auroc for one head, in sorted name order.
struct Grid {
  std::vector<std::string> models;
  std::vector<std::string> datasets;
  std::map<std::string, std::map<std::string, double>> cells;

  const double* at(const std::string& model, const std::string& dataset) const {
    const auto m = cells.find(model);
    if (m == cells.end()) return nullptr;
    const auto d = m->second.find(dataset);
    return d == m->second.end() ? nullptr : &d->second;
  }
};

Grid collect(const ScoreTable& scores, std::string_view head) {
  Grid g;
  std::set<std::string> models, datasets;
  for (const auto& r : scores.records) {
    if (r.head != head) continue;
    if (!g.cells[r.model].emplace(r.dataset, r.auroc).second) {
      throw DataError("duplicate score for model '" + r.model + "' on dataset '" + r.dataset + "'");
    }
    models.insert(r.model);
    datasets.insert(r.dataset);
  }
  g.models.assign(models.begin(), models.end());
  g.datasets.assign(datasets.begin(), datasets.end());
  return g;
}

}  // namespace

std::vector<ModelAverage> aggregate_report(const ScoreTable& scores, std::string_view head) {
  const auto g = collect(scores, head);
  if (g.models.empty()) throw DataError("score table has no '" + std::string(head) + "' records");
  std::string missing;
  for (const auto& m : g.models) {
    for (const auto& d : g.datasets) {
      if (!g.at(m, d)) missing += (missing.empty() ? "" : ", ") + m + "/" + d;
    }
  }
  if (!missing.empty()) throw DataError("incomplete score table, missing: " + missing);

  const auto n = g.models.size();
  std::vector<double> rank_sum(n, 0.0), auroc_sum(n, 0.0);
  std::vector<std::size_t> order(n);
  for (const auto& d : g.datasets) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = *g.at(g.models[i], d);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    for (std::size_t lo = 0; lo < n;) {
      std::size_t hi = lo + 1;
      while (hi < n && v[order[hi]] == v[order[lo]]) ++hi;
      const double rank = (static_cast<double>(lo + 1) + static_cast<double>(hi)) / 2.0;
      for (std::size_t k = lo; k < hi; ++k) rank_sum[order[k]] += rank;
      lo = hi;
    }
    for (std::size_t i = 0; i < n; ++i) auroc_sum[i] += v[i];
  }
  const double nd = static_cast<double>(g.datasets.size());
  std::vector<ModelAverage> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = {g.models[i], rank_sum[i] / nd, auroc_sum[i] / nd, static_cast<int>(g.datasets.size())};
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ModelAverage& a, const ModelAverage& b) { return a.mean_rank < b.mean_rank; });
  return out;
}

double WinMatrix::win_fraction(int i, int j) const {
  return shared(i, j) > 0 ? static_cast<double>(wins(i, j)) / shared(i, j) : 0.0;
}

double WinMatrix::tie_fraction(int i, int j) const {
  return shared(i, j) > 0 ? static_cast<double>(ties(i, j)) / shared(i, j) : 0.0;
}

WinMatrix win_matrix(const ScoreTable& scores, double epsilon, std::string_view head) {
  const auto g = collect(scores, head);
  WinMatrix m;
  m.models = g.models;
  const auto n = static_cast<Eigen::Index>(g.models.size());
  m.shared = Eigen::MatrixXi::Zero(n, n);
  m.wins = Eigen::MatrixXi::Zero(n, n);
  m.ties = Eigen::MatrixXi::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      for (const auto& d : g.datasets) {
        const double* a = g.at(g.models[static_cast<std::size_t>(i)], d);
        const double* b = g.at(g.models[static_cast<std::size_t>(j)], d);
        if (!a || !b) continue;
        ++m.shared(i, j);
        const double delta = *a - *b;
        if (delta > epsilon) {
          ++m.wins(i, j);
        } else if (delta >= -epsilon) {
          ++m.ties(i, j);
        }
      }
    }
  }
  return m;
}

BaselineComparison baseline_comparison(const ScoreTable& scores, const std::string& baseline,
                                       double near_win_epsilon, std::string_view head) {
  const auto g = collect(scores, head);
  if (!g.cells.contains(baseline)) throw ConfigError("baseline model '" + baseline + "' has no scores");
  BaselineComparison c;
  c.baseline = baseline;
  std::map<std::string, ModelWins> wins;
  for (const auto& m : g.models) wins[m].model = m;

  for (const auto& d : g.datasets) {
    double best = -INFINITY;
    for (const auto& m : g.models) {
      if (const double* v = g.at(m, d)) best = std::max(best, *v);
    }
    for (const auto& m : g.models) {
      const double* v = g.at(m, d);
      if (!v) continue;
      auto& w = wins[m];
      ++w.datasets;
      if (*v == best) ++w.wins;
      if (*v == best || best - *v < near_win_epsilon) ++w.near_wins;
    }

    const double* base = g.at(baseline, d);
    if (!base) continue;
    DatasetVsBaseline row;
    row.dataset = d;
    row.baseline_auroc = *base;
    for (const auto& m : g.models) {
      const double* v = g.at(m, d);
      if (m == baseline || !v) continue;
      ++row.models;
      row.strictly_above += *v > *base;
      row.above_epsilon += *v > *base + near_win_epsilon;
    }
    if (row.models > 0) {
      row.pct_strictly_above = 100.0 * row.strictly_above / row.models;
      row.pct_above_epsilon = 100.0 * row.above_epsilon / row.models;
    }
    c.datasets.push_back(row);
  }
  for (auto& [name, w] : wins) c.models.push_back(w);
  std::stable_sort(c.models.begin(), c.models.end(),
                   [](const ModelWins& a, const ModelWins& b) { return a.near_wins > b.near_wins; });
  return c;
}

std::vector<BaselineDecision> decisions_vs_baseline(const bbt::AbilityPosterior& p, const std::string& baseline,
                                                    const bbt::BBTConfig& cfg) {
  const auto it = std::find(p.models.begin(), p.models.end(), baseline);
  if (it == p.models.end()) throw ConfigError("baseline model '" + baseline + "' is not in the comparison");
  const int b = static_cast<int>(it - p.models.begin());
  std::vector<BaselineDecision> out;
  for (int i = 0; i < static_cast<int>(p.models.size()); ++i) {
    if (i == b) continue;
    BaselineDecision row;
    row.model = p.models[static_cast<std::size_t>(i)];
    row.summary = bbt::pair_summary(p, i, b, cfg);
    row.decision = bbt::decide(row.summary, cfg);
    out.push_back(std::move(row));
  }
  return out;
}

void write_aggregate_csv(std::ostream& out, const std::vector<ModelAverage>& rows) {
  csv::write_row(out, {"model", "mean_rank", "mean_auroc", "datasets"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.model, fixed6(r.mean_rank), fixed6(r.mean_auroc), std::to_string(r.datasets)});
  }
}

void write_win_matrix_csv(std::ostream& out, const WinMatrix& m) {
  csv::write_row(out, {"model", "opponent", "wins", "losses", "ties", "datasets", "win_fraction", "tie_fraction"});
  const auto n = static_cast<int>(m.models.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      csv::write_row(out, {m.models[static_cast<std::size_t>(i)], m.models[static_cast<std::size_t>(j)],
                           std::to_string(m.wins(i, j)), std::to_string(m.wins(j, i)), std::to_string(m.ties(i, j)),
                           std::to_string(m.shared(i, j)), fixed6(m.win_fraction(i, j)), fixed6(m.tie_fraction(i, j))});
    }
  }
}

void write_baseline_datasets_csv(std::ostream& out, const BaselineComparison& c) {
  csv::write_row(out, {"dataset", "baseline", "baseline_auroc", "models", "strictly_above", "above_epsilon",
                       "pct_strictly_above", "pct_above_epsilon"});
  for (const auto& r : c.datasets) {
    csv::write_row(out, {r.dataset, c.baseline, fixed6(r.baseline_auroc), std::to_string(r.models),
                         std::to_string(r.strictly_above), std::to_string(r.above_epsilon),
                         fixed6(r.pct_strictly_above), fixed6(r.pct_above_epsilon)});
  }
}

void write_baseline_models_csv(std::ostream& out, const BaselineComparison& c) {
  csv::write_row(out, {"model", "wins", "wins_or_near_wins", "datasets"});
  for (const auto& r : c.models) {
    csv::write_row(out, {r.model, std::to_string(r.wins), std::to_string(r.near_wins), std::to_string(r.datasets)});
  }
}

void write_decisions_csv(std::ostream& out, const std::string& baseline, const std::vector<BaselineDecision>& rows) {
  csv::write_row(out, {"model", "baseline", "mean", "hdi_low", "hdi_high", "p_in_rope", "p_above_half", "decision"});
  for (const auto& r : rows) {
    const auto& s = r.summary;
    csv::write_row(out, {r.model, baseline, fixed6(s.mean), fixed6(s.hdi_low), fixed6(s.hdi_high),
                         fixed6(s.p_in_rope), fixed6(s.p_above_half), std::string(bbt::to_string(r.decision))});
  }
}

void write_ppc_csv(std::ostream& out, const std::vector<std::string>& models, const std::vector<bbt::PpcResult>& rows) {
  csv::write_row(out, {"model", "opponent", "observed_wins", "comparisons", "p_value", "flagged"});
  for (const auto& r : rows) {
    csv::write_row(out, {models[static_cast<std::size_t>(r.i)], models[static_cast<std::size_t>(r.j)],
                         std::to_string(r.observed), std::to_string(r.total), fixed6(r.p_value),
                         r.flagged ? "true" : "false"});
  }
}

void write_win_table_csv(std::ostream& out, const bbt::WinTable& w) {
  csv::write_row(out, {"model", "opponent", "wins"});
  for (int i = 0; i < w.size(); ++i) {
    for (int j = 0; j < w.size(); ++j) {
      if (i == j) continue;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", w.wins(i, j));
      csv::write_row(out, {w.models[static_cast<std::size_t>(i)], w.models[static_cast<std::size_t>(j)], buf});
    }
  }
}

}  // namespace molbench::report
