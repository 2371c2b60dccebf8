#include <benchmark/benchmark.h>

#include <random>

#include "molbench/classifiers.hpp"
#include "molbench/dataset.hpp"
#include "molbench/fingerprints.hpp"

using namespace molbench;

namespace {

const harness::Dataset& toy() {
  static const auto d =
      harness::load_dataset(std::string(MOLBENCH_SOURCE_DIR) + "/data/toy/toy_activity.csv", "smiles", {"active"});
  return d;
}

struct Problem {
  harness::FeatureMatrix train;
  harness::FeatureMatrix test;
  std::vector<int> y;
};

const Problem& problem() {
  static const Problem p = [] {
    const auto& d = toy();
    fp::FingerprintConfig cfg;
    cfg.length = 1024;
    const auto x = harness::to_features(fp::fingerprint_matrix(d.molecules, cfg));
    Problem out;
    std::vector<int> tr, te;
    for (int i = 0; i < d.size(); ++i) {
      (i % 5 == 0 ? te : tr).push_back(i);
      if (i % 5 != 0) out.y.push_back(d.label(i, 0));
    }
    out.train = harness::select_rows(x, tr);
    out.test = harness::select_rows(x, te);
    return out;
  }();
  return p;
}

template <bool Parallel>
void BM_FingerprintMatrix(benchmark::State& state) {
  const auto& d = toy();
  fp::FingerprintConfig cfg;
  cfg.kind = static_cast<fp::Kind>(state.range(0));
  for (auto _ : state) {
    auto m = Parallel ? fp::fingerprint_matrix(d.molecules, cfg) : fp::fingerprint_matrix_serial(d.molecules, cfg);
    benchmark::DoNotOptimize(m.values.data());
  }
  state.SetItemsProcessed(state.iterations() * d.size());
}

template <bool Parallel>
void BM_Distances(benchmark::State& state) {
  const auto& d = toy();
  for (auto _ : state) {
    for (const auto& m : d.molecules) {
      auto dm = Parallel ? molgraph::shortest_path_distances(m) : molgraph::shortest_path_distances_serial(m);
      benchmark::DoNotOptimize(dm);
    }
  }
  state.SetItemsProcessed(state.iterations() * d.size());
}

template <bool Parallel>
void BM_Knn(benchmark::State& state) {
  const auto& p = problem();
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = Parallel ? harness::train_predict_knn(p.train, p.y, p.test, k)
                      : harness::train_predict_knn_serial(p.train, p.y, p.test, k);
    benchmark::DoNotOptimize(s.data());
  }
}

template <bool Parallel>
void BM_RandomForest(benchmark::State& state) {
  const auto& p = problem();
  harness::ForestParams params;
  params.n_trees = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = Parallel ? harness::train_predict_rf(p.train, p.y, p.test, params)
                      : harness::train_predict_rf_serial(p.train, p.y, p.test, params);
    benchmark::DoNotOptimize(s.data());
  }
}

}  // namespace

BENCHMARK(BM_FingerprintMatrix<false>)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FingerprintMatrix<true>)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Distances<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Distances<true>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Knn<false>)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Knn<true>)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomForest<false>)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RandomForest<true>)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
