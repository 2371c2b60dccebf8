#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "molbench/errors.hpp"
#include "molbench/report.hpp"

using namespace molbench;
using namespace molbench::report;
using harness::ScoreTable;

namespace {

ScoreTable table(std::initializer_list<std::tuple<const char*, const char*, double>> cells) {
  ScoreTable t;
  for (const auto& [m, d, a] : cells) t.records.push_back({m, d, "best", a});
  return t;
}

/// Random complete table with scores on a coarse grid so ties occur.
ScoreTable random_table(std::mt19937_64& rng, int models, int datasets) {
  std::uniform_int_distribution<int> level(50, 60);
  ScoreTable t;
  for (int m = 0; m < models; ++m) {
    for (int d = 0; d < datasets; ++d) {
      t.records.push_back({"m" + std::to_string(m), "d" + std::to_string(d), "best", level(rng) / 100.0});
    }
  }
  return t;
}

const ModelAverage& row(const std::vector<ModelAverage>& rows, const std::string& model) {
  return *std::find_if(rows.begin(), rows.end(), [&](const ModelAverage& r) { return r.model == model; });
}

}  // namespace

// ---------------------------------------------------------------------------
// Average results

TEST(Aggregate, DominantModelRanksFirst) {
  const auto rows = aggregate_report(table({{"A", "d1", 0.9}, {"A", "d2", 0.8}, {"B", "d1", 0.7}, {"B", "d2", 0.6}}));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].model, "A");
  EXPECT_DOUBLE_EQ(rows[0].mean_rank, 1.0);
  EXPECT_DOUBLE_EQ(rows[1].mean_rank, 2.0);
  EXPECT_DOUBLE_EQ(rows[0].mean_auroc, 0.85);
  EXPECT_EQ(rows[0].datasets, 2);
}

TEST(Aggregate, ExactTieSharesAverageRank) {
  const auto rows = aggregate_report(table({{"A", "d1", 0.7}, {"B", "d1", 0.7}, {"C", "d1", 0.6}}));
  EXPECT_DOUBLE_EQ(row(rows, "A").mean_rank, 1.5);
  EXPECT_DOUBLE_EQ(row(rows, "B").mean_rank, 1.5);
  EXPECT_DOUBLE_EQ(row(rows, "C").mean_rank, 3.0);
}

TEST(Aggregate, MatchesCountingOracle) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto scores = random_table(rng, 6, 9);
    const auto rows = aggregate_report(scores);
    for (const auto& r : rows) {
      double expected = 0;
      for (int d = 0; d < 9; ++d) {
        const std::string ds = "d" + std::to_string(d);
        const double mine = *scores.find(r.model, ds, "best");
        int greater = 0, equal = 0;
        for (int m = 0; m < 6; ++m) {
          const double other = *scores.find("m" + std::to_string(m), ds, "best");
          greater += other > mine;
          equal += other == mine;
        }
        expected += 1 + greater + (equal - 1) / 2.0;
      }
      EXPECT_NEAR(r.mean_rank, expected / 9, 1e-12);
    }
  }
}

TEST(Aggregate, RelabelAndReorderInvariance) {
  std::mt19937_64 rng(22);
  const auto base = random_table(rng, 5, 7);
  const auto ref = aggregate_report(base);
  ScoreTable shuffled = base;
  std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);
  for (auto& r : shuffled.records) r.model = "x" + r.model;
  for (auto& r : shuffled.records) r.dataset = "z" + std::to_string(6 - (r.dataset[1] - '0'));
  const auto got = aggregate_report(shuffled);
  for (const auto& r : ref) {
    EXPECT_DOUBLE_EQ(row(got, "x" + r.model).mean_rank, r.mean_rank);
    EXPECT_NEAR(row(got, "x" + r.model).mean_auroc, r.mean_auroc, 1e-12);
  }
}

TEST(Aggregate, MissingCellsListed) {
  try {
    aggregate_report(table({{"A", "d1", 0.9}, {"A", "d2", 0.8}, {"B", "d1", 0.7}}));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("B/d2"), std::string::npos);
  }
  EXPECT_THROW(aggregate_report(ScoreTable{}), DataError);
}

TEST(Aggregate, OtherHeadsIgnored) {
  auto t = table({{"A", "d1", 0.6}, {"B", "d1", 0.7}});
  t.records.push_back({"A", "d1", "knn", 0.99});
  EXPECT_EQ(aggregate_report(t)[0].model, "B");
  EXPECT_EQ(aggregate_report(t, "knn")[0].model, "A");
}

// ---------------------------------------------------------------------------
// Win matrix

TEST(WinMatrix, IdenticalRowsAreAllTies) {
  const auto m = win_matrix(table({{"A", "d1", 0.7}, {"A", "d2", 0.8}, {"B", "d1", 0.7}, {"B", "d2", 0.8}}), 0.01);
  EXPECT_DOUBLE_EQ(m.win_fraction(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(m.win_fraction(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(m.tie_fraction(0, 1), 1.0);
}

TEST(WinMatrix, DominanceGivesOneAndZero) {
  const auto m = win_matrix(table({{"A", "d1", 0.9}, {"A", "d2", 0.9}, {"B", "d1", 0.5}, {"B", "d2", 0.6}}), 0.01);
  EXPECT_DOUBLE_EQ(m.win_fraction(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(m.win_fraction(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(m.win_fraction(0, 0), 0.0);
}

TEST(WinMatrix, Decomposition) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    const auto m = win_matrix(random_table(rng, 5, 12), 0.02);
    for (int i = 0; i < 5; ++i) {
      EXPECT_EQ(m.wins(i, i), 0);
      for (int j = 0; j < 5; ++j) {
        if (i == j) continue;
        EXPECT_EQ(m.wins(i, j) + m.wins(j, i) + m.ties(i, j), 12);
        EXPECT_EQ(m.ties(i, j), m.ties(j, i));
        EXPECT_NEAR(1 - m.win_fraction(i, j) - m.win_fraction(j, i), m.tie_fraction(i, j), 1e-12);
      }
    }
  }
}

TEST(WinMatrix, EpsilonBoundary) {
  const auto m = win_matrix(table({{"A", "d1", 0.75}, {"B", "d1", 0.5}, {"C", "d1", 0.74}}), 0.02);
  EXPECT_EQ(m.wins(0, 1), 1);
  EXPECT_EQ(m.ties(0, 2), 1);
  EXPECT_EQ(m.wins(0, 2), 0);
}

// ---------------------------------------------------------------------------
// Baseline comparison

TEST(Baseline, BestEverywhereGivesZero) {
  const auto c = baseline_comparison(
      table({{"ECFP", "d1", 0.9}, {"ECFP", "d2", 0.8}, {"X", "d1", 0.7}, {"X", "d2", 0.6}, {"Y", "d1", 0.5}, {"Y", "d2", 0.8}}),
      "ECFP", 0.01);
  ASSERT_EQ(c.datasets.size(), 2u);
  for (const auto& d : c.datasets) {
    EXPECT_DOUBLE_EQ(d.pct_strictly_above, 0.0);
    EXPECT_DOUBLE_EQ(d.pct_above_epsilon, 0.0);
    EXPECT_EQ(d.models, 2);
  }
}

TEST(Baseline, StrictAndThresholdedCounts) {
  const auto c = baseline_comparison(table({{"B", "d1", 0.70}, {"X", "d1", 0.705}, {"Y", "d1", 0.75}, {"Z", "d1", 0.6}}),
                                     "B", 0.01);
  EXPECT_EQ(c.datasets[0].strictly_above, 2);
  EXPECT_EQ(c.datasets[0].above_epsilon, 1);
  EXPECT_NEAR(c.datasets[0].pct_strictly_above, 200.0 / 3, 1e-12);
  EXPECT_NEAR(c.datasets[0].pct_above_epsilon, 100.0 / 3, 1e-12);
}

TEST(Baseline, NearWinWithinEpsilon) {
  const auto c = baseline_comparison(table({{"B", "d1", 0.600}, {"X", "d1", 0.800}, {"Y", "d1", 0.795}, {"Z", "d1", 0.780}}),
                                     "B", 0.01);
  std::map<std::string, ModelWins> by;
  for (const auto& m : c.models) by[m.model] = m;
  EXPECT_EQ(by["X"].wins, 1);
  EXPECT_EQ(by["X"].near_wins, 1);
  EXPECT_EQ(by["Y"].wins, 0);
  EXPECT_EQ(by["Y"].near_wins, 1);
  EXPECT_EQ(by["Z"].near_wins, 0);
  EXPECT_EQ(by["B"].near_wins, 0);
}

TEST(Baseline, MissingBaseline) {
  EXPECT_THROW(baseline_comparison(table({{"A", "d1", 0.5}}), "ECFP-count", 0.01), ConfigError);
}

// ---------------------------------------------------------------------------
// Decisions and writers

TEST(Decisions, AgainstBaseline) {
  bbt::AbilityPosterior p;
  p.models = {"Base", "Strong", "Same"};
  p.chains = 1;
  p.beta.resize(200, 3);
  for (int s = 0; s < 200; ++s) p.beta.row(s) << -1.5, 3.0, -1.5;
  p.sigma.assign(200, 1.0);
  const auto rows = decisions_vs_baseline(p, "Base", bbt::BBTConfig{});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].model, "Strong");
  EXPECT_EQ(rows[0].decision, bbt::Decision::better);
  EXPECT_EQ(rows[1].decision, bbt::Decision::equivalent);
  EXPECT_THROW(decisions_vs_baseline(p, "Nope", bbt::BBTConfig{}), ConfigError);
}

TEST(Writers, AggregateCsv) {
  std::ostringstream out;
  write_aggregate_csv(out, aggregate_report(table({{"A", "d1", 0.9}, {"B", "d1", 0.7}})));
  EXPECT_EQ(out.str(), "model,mean_rank,mean_auroc,datasets\nA,1.000000,0.900000,1\nB,2.000000,0.700000,1\n");
}

TEST(Writers, WinMatrixLongFormat) {
  std::ostringstream out;
  write_win_matrix_csv(out, win_matrix(table({{"A", "d1", 0.9}, {"B", "d1", 0.7}}), 0.01));
  EXPECT_EQ(out.str(),
            "model,opponent,wins,losses,ties,datasets,win_fraction,tie_fraction\n"
            "A,B,1,0,0,1,1.000000,0.000000\n"
            "B,A,0,1,0,1,0.000000,0.000000\n");
}
