#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "molbench/classifiers.hpp"
#include "molbench/dataset.hpp"
#include "molbench/errors.hpp"
#include "molbench/metrics.hpp"
#include "molbench/split.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace molbench;
using namespace molbench::harness;

namespace {

namespace fs = std::filesystem;

using testdata::TempDir;

FeatureMatrix matrix(std::initializer_list<std::initializer_list<double>> rows) {
  FeatureMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// AUROC

TEST(Auroc, PairCountingExample) {
  const std::vector<double> s{0.1, 0.4, 0.35, 0.8};
  const std::vector<int> y{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(*auroc(s, y), 0.75);
}

TEST(Auroc, AllTiedIsHalf) {
  const std::vector<double> s(6, 0.3);
  const std::vector<int> y{0, 1, 0, 1, 1, 0};
  EXPECT_DOUBLE_EQ(*auroc(s, y), 0.5);
}

TEST(Auroc, SeparatedIsOne) {
  const std::vector<double> s{0.1, 0.2, 0.9, 0.95};
  const std::vector<int> y{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(*auroc(s, y), 1.0);
}

TEST(Auroc, SingleClassUndefined) {
  const std::vector<double> s{0.1, 0.2};
  const std::vector<int> y{1, 1};
  EXPECT_FALSE(auroc(s, y).has_value());
}

TEST(Auroc, RejectsBadLabels) {
  const std::vector<double> s{0.1, 0.2};
  const std::vector<int> y{0, 2};
  EXPECT_THROW(auroc(s, y), std::invalid_argument);
  const std::vector<int> short_y{0};
  EXPECT_THROW(auroc(s, short_y), std::invalid_argument);
}

TEST(Auroc, MatchesPairEnumeration) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const auto inst = testdata::random_auroc_instance(rng);
    EXPECT_NEAR(*auroc(inst.scores, inst.labels), testdata::brute_auroc(inst.scores, inst.labels), 1e-12);
  }
}

TEST(Auroc, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    auto inst = testdata::random_auroc_instance(rng);
    const double before = *auroc(inst.scores, inst.labels);
    for (auto& s : inst.scores) s = std::exp(3 * s) - 7;
    EXPECT_DOUBLE_EQ(*auroc(inst.scores, inst.labels), before);
  }
}

// ---------------------------------------------------------------------------
// Dataset and embeddings

TEST(Dataset, ThreeRows) {
  const auto d = parse_dataset("smiles,active\nCCO,0\nc1ccccc1,1\nCCN,1\n", "toy", "smiles");
  EXPECT_EQ(d.size(), 3);
  EXPECT_EQ(d.tasks(), 1);
  EXPECT_EQ(d.label(0, 0), 0);
  EXPECT_EQ(d.label(2, 0), 1);
}

TEST(Dataset, DropsUnparseableRows) {
  std::string text = "smiles,y\n";
  const char* smi[] = {"C", "CC", "CCC", "CCO", "C1CC1", "c1ccccc1", "CC(", "CN", "CCN", "O=CO"};
  for (int i = 0; i < 10; ++i) text += std::string(smi[i]) + "," + std::to_string(i % 2) + "\n";
  const auto d = parse_dataset(text, "toy", "smiles");
  EXPECT_EQ(d.size(), 9);
  EXPECT_EQ(d.dropped_rows, 1u);
}

TEST(Dataset, EmptyCellIsMissing) {
  const auto d = parse_dataset("smiles,a,b\nCC,1,\nCO,,0\n", "toy", "smiles");
  EXPECT_EQ(d.tasks(), 2);
  EXPECT_EQ(d.label(0, 1), kMissingLabel);
  EXPECT_EQ(d.labelled_rows(0), std::vector<int>{0});
}

TEST(Dataset, Errors) {
  EXPECT_THROW(parse_dataset("smiles,y\nCC,2\n", "toy", "smiles"), DataError);
  EXPECT_THROW(parse_dataset("smi,y\nCC,1\n", "toy", "smiles"), DataError);
  EXPECT_THROW(parse_dataset("smiles,y\nCC,1\n", "toy", "smiles", {"z"}), DataError);
  EXPECT_THROW(parse_dataset("smiles,y\nC(,1\n", "toy", "smiles"), DataError);
  EXPECT_THROW(parse_dataset("smiles,y\nCC,\n", "toy", "smiles"), DataError);
}

TEST(Dataset, LargestFragmentOption) {
  LoadOptions opts;
  opts.largest_fragment_only = true;
  const auto d = parse_dataset("smiles,y\nCCO.[Na+],1\n", "toy", "smiles", {}, opts);
  EXPECT_EQ(d.molecules[0].atom_count(), 3);
  EXPECT_EQ(parse_dataset("smiles,y\nCCO.[Na+],1\n", "toy", "smiles").molecules[0].atom_count(), 4);
}

TEST(Embeddings, CsvAndBinaryAgree) {
  TempDir tmp;
  const auto csv_path = tmp.file("model.csv", "e0,e1\n0.5,1.25\n-2,3\n4.75,0\n");
  const auto csv = load_embeddings(csv_path, 3);
  EXPECT_EQ(csv.dim(), 2);
  EXPECT_EQ(csv.model_name, "model");
  const auto bin_path = tmp.file("model.emb");
  write_embeddings_binary(bin_path, csv.vectors);
  const auto bin = load_embeddings(bin_path, 3);
  EXPECT_EQ(bin.vectors, csv.vectors);
  const auto round = tmp.file("round.csv");
  write_embeddings_csv(round, bin.vectors);
  EXPECT_EQ(load_embeddings(round).vectors, csv.vectors);
}

TEST(Embeddings, Rejections) {
  TempDir tmp;
  EXPECT_THROW(load_embeddings(tmp.file("nan.csv", "1,2\nNaN,3\n")), DataError);
  EXPECT_THROW(load_embeddings(tmp.file("inf.csv", "1,2\ninf,3\n")), DataError);
  EXPECT_THROW(load_embeddings(tmp.file("ragged.csv", "1,2\n3\n")), DataError);
  EXPECT_THROW(load_embeddings(tmp.file("ok.csv", "1,2\n3,4\n"), 3), DataError);
  EXPECT_THROW(load_embeddings(tmp.file("missing.csv")), DataError);
  EXPECT_THROW(load_embeddings(tmp.file("short.emb", std::string("EMB1\x01\x00\x00\x00", 8))), DataError);
}

// ---------------------------------------------------------------------------
// Scaffold split

TEST(Split, BenzeneGroupInseparable) {
  std::string text = "smiles,y\n";
  const char* benz[] = {"c1ccccc1C", "c1ccccc1CC", "c1ccccc1O", "c1ccccc1N", "c1ccccc1CO",
                        "c1ccccc1Cl", "c1ccccc1F", "c1ccccc1CCC", "c1ccccc1OC", "c1ccccc1C(C)C"};
  for (int i = 0; i < 10; ++i) text += std::string(benz[i]) + "," + std::to_string(i % 2) + "\n";
  text += "CCO,1\nCCCN,0\n";
  const auto d = parse_dataset(text, "toy", "smiles");
  const auto keys = scaffold_keys(d);
  EXPECT_EQ(std::set<std::uint64_t>(keys.begin(), keys.end()).size(), 2u);
  const auto s = scaffold_split(d, 0.5);
  EXPECT_EQ(s.train_idx.size(), 10u);
  EXPECT_EQ(s.test_idx, (std::vector<int>{10, 11}));
}

TEST(Split, UniqueScaffoldsHitTarget) {
  std::vector<std::uint64_t> keys;
  for (std::uint64_t k = 1; k <= 23; ++k) keys.push_back(k * 977);
  const auto s = scaffold_split_by_keys(keys, 0.8);
  EXPECT_EQ(s.train_idx.size(), static_cast<std::size_t>(std::ceil(0.8 * 23)));
  EXPECT_EQ(s.train_idx.size() + s.test_idx.size(), 23u);
}

TEST(Split, OrderIsDescendingSizeThenKey) {
  const std::vector<std::uint64_t> keys{5, 9, 9, 3, 3, 1};
  // Groups: 3 (rows 3,4), 9 (rows 1,2), then 1, 5.
  EXPECT_EQ(scaffold_split_by_keys(keys, 0.3).train_idx, (std::vector<int>{3, 4}));
  EXPECT_EQ(scaffold_split_by_keys(keys, 0.5).train_idx, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(scaffold_split_by_keys(keys, 0.7).test_idx, (std::vector<int>{0}));
}

TEST(Split, NoLeakageOnCorpus) {
  std::string text = "smiles,y\n";
  int i = 0;
  for (const auto smi : testdata::kCorpus) text += std::string(smi) + "," + std::to_string(i++ % 2) + "\n";
  const auto d = parse_dataset(text, "corpus", "smiles");
  const auto keys = scaffold_keys(d);
  for (double frac : {0.5, 0.7, 0.8, 0.9}) {
    const auto s = scaffold_split(d, frac, 3);
    std::set<std::uint64_t> train_keys;
    for (int r : s.train_idx) train_keys.insert(keys[static_cast<std::size_t>(r)]);
    for (int r : s.test_idx) EXPECT_FALSE(train_keys.contains(keys[static_cast<std::size_t>(r)]));
    EXPECT_EQ(s.train_idx.size() + s.test_idx.size(), static_cast<std::size_t>(d.size()));
    EXPECT_FALSE(s.test_idx.empty());
    const auto again = scaffold_split(d, frac, 3);
    EXPECT_EQ(again.train_idx, s.train_idx);
  }
}

TEST(Split, Errors) {
  const std::vector<std::uint64_t> one{4, 4, 4};
  EXPECT_THROW(scaffold_split_by_keys(one, 0.8), DataError);
  const std::vector<std::uint64_t> two{1, 2};
  EXPECT_THROW(scaffold_split_by_keys(two, 0.0), std::invalid_argument);
  EXPECT_THROW(scaffold_split_by_keys(two, 1.0), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// kNN

TEST(Knn, Examples) {
  const auto train = matrix({{0}, {1}});
  const std::vector<int> y{0, 1};
  EXPECT_EQ(train_predict_knn(train, y, matrix({{0.9}}), 1), std::vector<double>{1.0});
  EXPECT_EQ(train_predict_knn(train, y, matrix({{0.5}}), 2), std::vector<double>{0.5});
  const auto three = matrix({{0}, {4}, {9}});
  const std::vector<int> y3{0, 0, 1};
  for (double s : train_predict_knn(three, y3, matrix({{-3}, {2}, {100}}), 3)) EXPECT_DOUBLE_EQ(s, 1.0 / 3);
}

TEST(Knn, TieGoesToLowerIndex) {
  const auto train = matrix({{-1}, {1}});
  EXPECT_EQ(train_predict_knn(train, std::vector<int>{1, 0}, matrix({{0}}), 1), std::vector<double>{1.0});
  EXPECT_EQ(train_predict_knn(train, std::vector<int>{0, 1}, matrix({{0}}), 1), std::vector<double>{0.0});
}

TEST(Knn, ClampsAndRejects) {
  const auto train = matrix({{0}, {1}});
  const std::vector<int> y{0, 1};
  EXPECT_EQ(train_predict_knn(train, y, matrix({{7}}), 9), std::vector<double>{0.5});
  EXPECT_THROW(train_predict_knn(FeatureMatrix(0, 1), std::vector<int>{}, matrix({{0}}), 1), std::invalid_argument);
}

TEST(Knn, ParallelMatchesSerial) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  FeatureMatrix train(120, 8), test(60, 8);
  for (Eigen::Index i = 0; i < train.size(); ++i) train.data()[i] = std::round(g(rng) * 2);
  for (Eigen::Index i = 0; i < test.size(); ++i) test.data()[i] = std::round(g(rng) * 2);
  std::vector<int> y(120);
  for (auto& v : y) v = static_cast<int>(rng() & 1);
  for (int k : {1, 3, 5, 7, 9}) EXPECT_EQ(train_predict_knn(train, y, test, k), train_predict_knn_serial(train, y, test, k));
}

// ---------------------------------------------------------------------------
// Logistic regression

TEST(LogReg, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  FeatureMatrix x(40, 6);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  std::vector<int> y(40);
  for (auto& v : y) v = static_cast<int>(rng() & 1);
  for (double lambda : {0.01, 1.0, 1000.0}) {
    const LogisticObjective obj(x, y, lambda);
    for (int p = 0; p < 5; ++p) {
      Eigen::VectorXd w(obj.dim());
      for (auto& v : w) v = p == 0 ? 0.0 : g(rng);
      Eigen::VectorXd grad;
      const double f = obj.value_and_gradient(w, grad);
      EXPECT_DOUBLE_EQ(f, obj.value(w));
      const auto fd = testdata::central_difference([&](const Eigen::VectorXd& v) { return obj.value(v); }, w);
      EXPECT_LE(testdata::relative_error(grad, fd), 1e-6);
    }
  }
}

TEST(LogReg, ObjectiveAtZero) {
  const auto x = matrix({{1}, {2}, {3}});
  const LogisticObjective obj(x, std::vector<int>{0, 1, 1}, 1.0);
  EXPECT_NEAR(obj.value(Eigen::VectorXd::Zero(2)), std::log(2.0), 1e-15);
}

TEST(LogReg, SeparableDataRanksPerfectly) {
  const auto x = matrix({{-3}, {-2}, {-1}, {1}, {2}, {3}});
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const auto s = train_predict_logreg(x, y, x, 1000.0);
  EXPECT_DOUBLE_EQ(*auroc(s, y), 1.0);
}

TEST(LogReg, TinyLambdaGivesPrior) {
  const auto x = matrix({{-3}, {-2}, {-1}, {1}, {2}, {3}, {4}, {5}});
  const std::vector<int> y{0, 0, 0, 1, 1, 1, 1, 1};
  const auto model = fit_logreg(x, y, 1e-9);
  EXPECT_LT(model.weights.norm(), 1e-6);
  for (double s : model.predict(x)) EXPECT_NEAR(s, 5.0 / 8, 1e-6);
}

TEST(LogReg, LossDecreasesMonotonically) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  FeatureMatrix x(80, 10);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  std::vector<int> y(80);
  for (Eigen::Index r = 0; r < x.rows(); ++r) y[static_cast<std::size_t>(r)] = x(r, 0) + 0.5 * g(rng) > 0;
  for (double lambda : {0.01, 1.0, 100.0}) {
    const auto model = fit_logreg(x, y, lambda);
    EXPECT_TRUE(model.converged);
    ASSERT_GE(model.loss_history.size(), 2u);
    for (std::size_t i = 1; i < model.loss_history.size(); ++i) {
      EXPECT_LE(model.loss_history[i], model.loss_history[i - 1]);
    }
  }
}

TEST(LogReg, ConstantColumnIsHarmless) {
  const auto x = matrix({{1, -1}, {1, 0}, {1, 2}, {1, 3}});
  const auto s = train_predict_logreg(x, std::vector<int>{0, 0, 1, 1}, x, 10.0);
  for (double v : s) EXPECT_TRUE(std::isfinite(v));
  EXPECT_LT(s[0], s[3]);
}

TEST(LogReg, Rejections) {
  const auto x = matrix({{1}, {2}});
  const std::vector<int> y{0, 1};
  EXPECT_THROW(train_predict_logreg(x, y, x, 0.0), std::invalid_argument);
  auto bad = x;
  bad(0, 0) = std::nan("");
  EXPECT_THROW(train_predict_logreg(bad, y, x, 1.0), DataError);
  EXPECT_THROW(train_predict_logreg(x, y, bad, 1.0), DataError);
}

// ---------------------------------------------------------------------------
// Random forest

TEST(RandomForest, XorIsLearned) {
  FeatureMatrix x(100, 2);
  std::vector<int> y(100);
  for (int i = 0; i < 100; ++i) {
    const int a = (i / 25) & 1;
    const int b = (i / 50) & 1;
    x(i, 0) = a;
    x(i, 1) = b;
    y[static_cast<std::size_t>(i)] = a ^ b;
  }
  for (int mss : {2, 4, 6, 8, 10}) {
    ForestParams p;
    p.min_samples_split = mss;
    p.seed = 42;
    const auto s = train_predict_rf(x, y, x, p);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(s[static_cast<std::size_t>(i)] > 0.5, y[static_cast<std::size_t>(i)] == 1);
  }
}

TEST(RandomForest, ConstantFeatureGivesPositiveRate) {
  FeatureMatrix x = FeatureMatrix::Constant(40, 3, 2.0);
  std::vector<int> y(40, 0);
  for (int i = 0; i < 10; ++i) y[static_cast<std::size_t>(i)] = 1;
  const auto s = train_predict_rf(x, y, matrix({{2, 2, 2}, {0, 5, -1}}), {});
  // Each tree is a single bootstrap leaf; the forest mean tracks the train rate.
  EXPECT_DOUBLE_EQ(s[0], s[1]);
  EXPECT_NEAR(s[0], 0.25, 0.01);
}

TEST(RandomForest, DeterministicAndThreadIndependent) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  FeatureMatrix x(90, 16), test(30, 16);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = std::round(g(rng));
  for (Eigen::Index i = 0; i < test.size(); ++i) test.data()[i] = std::round(g(rng));
  std::vector<int> y(90);
  for (Eigen::Index r = 0; r < x.rows(); ++r) y[static_cast<std::size_t>(r)] = x(r, 0) + x(r, 1) > 0;
  ForestParams p;
  p.seed = 99;
  p.n_trees = 100;
  const auto a = train_predict_rf(x, y, test, p);
  EXPECT_EQ(a, train_predict_rf(x, y, test, p));
  EXPECT_EQ(a, train_predict_rf_serial(x, y, test, p));
  p.seed = 100;
  EXPECT_NE(a, train_predict_rf(x, y, test, p));
}

TEST(RandomForest, Rejections) {
  EXPECT_THROW(train_predict_rf(FeatureMatrix(0, 2), std::vector<int>{}, matrix({{0, 0}}), {}), std::invalid_argument);
  ForestParams p;
  p.min_samples_split = 1;
  EXPECT_THROW(train_predict_rf(matrix({{0}}), std::vector<int>{1}, matrix({{0}}), p), std::invalid_argument);
}
