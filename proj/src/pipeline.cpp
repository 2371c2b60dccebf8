#include "molbench/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <exception>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "molbench/csv.hpp"
#include "molbench/dataset.hpp"
#include "molbench/errors.hpp"
#include "molbench/hash.hpp"
#include "molbench/report.hpp"
#include "molbench/split.hpp"

namespace molbench::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::json;
using harness::Head;

namespace {

// ---------------------------------------------------------------------------
// Config parsing

/// Object view that rejects keys nobody asked about.
class Section {
public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  template <typename T>
  T get(const char* key, const T& fallback) {
    if (!has(key)) return fallback;
    return convert<T>(j_.at(key), key);
  }

  template <typename T>
  T require(const char* key) {
    if (!has(key)) throw ConfigError(where_ + ": missing '" + key + "'");
    return convert<T>(j_.at(key), key);
  }

  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string path(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.contains(k)) throw ConfigError(where_ + ": unknown key '" + k + "'");
    }
  }

private:
  template <typename T>
  T convert(const json& v, const char* key) const {
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) throw ConfigError("");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) throw ConfigError("");
        }
      }
      return v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError(where_ + ": '" + key + "' has the wrong type or value");
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

fp::FingerprintConfig parse_fingerprint(const json& j, const std::string& where) {
  Section s(j, where);
  fp::FingerprintConfig c;
  try {
    c.kind = fp::kind_from_string(s.require<std::string>("kind"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  c.radius = s.get<int>("radius", c.radius);
  c.length = s.get<int>("length", c.length);
  c.counted = s.get<bool>("counted", c.counted);
  s.finish();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return c;
}

void parse_bbt(const json& j, bbt::BBTConfig& c) {
  Section s(j, "bbt");
  c.epsilon_tie = s.get<double>("epsilon_tie", c.epsilon_tie);
  if (s.has("rope")) {
    const auto r = s.require<std::vector<double>>("rope");
    if (r.size() != 2) throw ConfigError("bbt.rope: expected [low, high]");
    c.rope_low = r[0];
    c.rope_high = r[1];
  }
  c.equivalence_mass = s.get<double>("equivalence_mass", c.equivalence_mass);
  c.hdi_mass = s.get<double>("hdi_mass", c.hdi_mass);
  c.chains = s.get<int>("chains", c.chains);
  c.draws_per_chain = s.get<int>("draws", c.draws_per_chain);
  c.warmup = s.get<int>("warmup", c.warmup);
  c.seed = s.get<std::uint64_t>("seed", c.seed);
  if (s.has("prior")) {
    Section p(s.raw("prior"), "bbt.prior");
    c.prior.log_sigma_mean = p.get<double>("log_sigma_mean", c.prior.log_sigma_mean);
    c.prior.log_sigma_sd = p.get<double>("log_sigma_sd", c.prior.log_sigma_sd);
    p.finish();
  }
  c.max_rhat = s.get<double>("max_rhat", c.max_rhat);
  c.min_ess = s.get<double>("min_ess", c.min_ess);
  c.enforce_diagnostics = s.get<bool>("enforce_diagnostics", c.enforce_diagnostics);
  s.finish();
}

// ---------------------------------------------------------------------------
// Cells

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_bytes(const fs::path& p) { return csv::read_file(p.string()); }

void write_atomically(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ostringstream out;
  fn(out);
  write_atomically(path, out.str());
}

struct CellOutcome {
  std::vector<harness::ScoreRecord> records;
  bool skipped = false;
  std::string reason;
};

std::optional<CellOutcome> read_cache(const fs::path& file, const std::string& key) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    const json j = json::parse(in);
    if (j.at("key").get<std::string>() != key) return std::nullopt;
    CellOutcome c;
    c.skipped = j.at("status").get<std::string>() == "skipped";
    c.reason = j.value("reason", "");
    for (const auto& r : j.at("records")) {
      c.records.push_back({r.at("model").get<std::string>(), r.at("dataset").get<std::string>(),
                           r.at("head").get<std::string>(), r.at("auroc").get<double>()});
    }
    return c;
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable entries are recomputed
  }
}

void write_cache(const fs::path& file, const std::string& key, const CellOutcome& c) {
  json j;
  j["key"] = key;
  j["status"] = c.skipped ? "skipped" : "ok";
  if (c.skipped) j["reason"] = c.reason;
  j["records"] = json::array();
  for (const auto& r : c.records) {
    j["records"].push_back({{"model", r.model}, {"dataset", r.dataset}, {"head", r.head}, {"auroc", r.auroc}});
  }
  write_atomically(file, j.dump(1) + "\n");
}

[[noreturn]] void rethrow_with_context(const std::exception_ptr& e, const std::string& prefix) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError& x) {
    throw ConfigError(prefix + x.what());
  } catch (const DiagnosticError& x) {
    throw DiagnosticError(prefix + x.what());
  } catch (const DataError& x) {
    throw DataError(prefix + x.what());
  } catch (const std::exception& x) {
    throw DataError(prefix + x.what());
  }
}

struct LoadedDataset {
  harness::Dataset data;
  harness::Split split;
  std::string bytes;
};

harness::FeatureMatrix features_for(const BenchmarkConfig& cfg, const RepresentationEntry& rep,
                                    const DatasetEntry& entry, const harness::Dataset& d) {
  if (rep.fingerprint) return harness::to_features(fp::fingerprint_matrix(d.molecules, *rep.fingerprint));
  const auto path = cfg.embedding_path(rep, entry);
  const auto source_rows = d.size() + static_cast<int>(d.dropped_rows);
  const auto table = harness::load_embeddings(path.string(), source_rows);
  return harness::select_rows(table.vectors, d.source_rows);
}

}  // namespace

// ---------------------------------------------------------------------------
// BenchmarkConfig

std::vector<harness::ClassifierSpec> BenchmarkConfig::classifier_specs() const {
  std::vector<harness::ClassifierSpec> out;
  for (Head h : heads) {
    auto spec = harness::ClassifierSpec::defaults(h, classifier_seed);
    if (const auto it = grids.find(h); it != grids.end()) spec.grid = it->second;
    out.push_back(std::move(spec));
  }
  return out;
}

fs::path BenchmarkConfig::embedding_path(const RepresentationEntry& rep, const DatasetEntry& dataset) const {
  if (const auto it = rep.embedding_files.find(dataset.name); it != rep.embedding_files.end()) return it->second;
  if (rep.embedding_pattern.empty()) {
    throw ConfigError("representation '" + rep.name + "' has no embedding file for dataset '" + dataset.name + "'");
  }
  std::string p = rep.embedding_pattern;
  for (auto pos = p.find("{dataset}"); pos != std::string::npos; pos = p.find("{dataset}", pos)) {
    p.replace(pos, 9, dataset.name);
    pos += dataset.name.size();
  }
  return p;
}

fs::path BenchmarkConfig::effective_cache_dir() const { return cache_dir.empty() ? output_dir / "cache" : cache_dir; }

void BenchmarkConfig::set_seed(std::uint64_t seed) {
  split_seed = seed;
  classifier_seed = seed;
  bbt.seed = seed;
}

void BenchmarkConfig::validate() const {
  if (version != kConfigVersion) throw ConfigError("unsupported config version " + std::to_string(version));
  if (datasets.empty()) throw ConfigError("config lists no datasets");
  if (representations.empty()) throw ConfigError("config lists no representations");
  std::set<std::string> names;
  for (const auto& d : datasets) {
    if (d.name.empty()) throw ConfigError("dataset without a name");
    if (!names.insert(d.name).second) throw ConfigError("duplicate dataset '" + d.name + "'");
  }
  names.clear();
  for (const auto& r : representations) {
    if (r.name.empty()) throw ConfigError("representation without a name");
    if (!names.insert(r.name).second) throw ConfigError("duplicate representation '" + r.name + "'");
    if (!r.fingerprint) {
      for (const auto& d : datasets) embedding_path(r, d);
    }
  }
  if (!names.contains(baseline)) throw ConfigError("baseline '" + baseline + "' is not a configured representation");
  if (!(frac_train > 0 && frac_train < 1)) throw ConfigError("split.frac_train must be in (0, 1)");
  if (heads.empty()) throw ConfigError("no classifier heads configured");
  for (const auto& [h, g] : grids) {
    if (g.empty()) throw ConfigError("empty grid for head " + std::string(harness::to_string(h)));
  }
  if (eval.folds < 2) throw ConfigError("classifiers.folds must be at least 2");
  if (eval.rf_trees < 1) throw ConfigError("classifiers.rf_trees must be positive");
  if (!(near_win_epsilon >= 0)) throw ConfigError("near_win_epsilon must be non-negative");
  bbt.validate();
}

BenchmarkConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Section top(doc, "config");
  BenchmarkConfig cfg;
  cfg.version = top.require<int>("version");
  if (cfg.version != kConfigVersion) throw ConfigError("unsupported config version " + std::to_string(cfg.version));
  cfg.output_dir = resolve(base_dir, top.get<std::string>("output_dir", cfg.output_dir.string()));
  if (top.has("cache_dir")) cfg.cache_dir = resolve(base_dir, top.require<std::string>("cache_dir"));

  if (!top.has("datasets") || !top.raw("datasets").is_array()) throw ConfigError("config: 'datasets' must be a list");
  int idx = 0;
  for (const auto& jd : top.raw("datasets")) {
    Section s(jd, "datasets[" + std::to_string(idx++) + "]");
    DatasetEntry d;
    d.name = s.require<std::string>("name");
    d.path = resolve(base_dir, s.require<std::string>("path"));
    d.smiles_column = s.get<std::string>("smiles_column", d.smiles_column);
    d.tasks = s.get<std::vector<std::string>>("tasks", {});
    d.largest_fragment_only = s.get<bool>("largest_fragment_only", false);
    s.finish();
    cfg.datasets.push_back(std::move(d));
  }

  if (!top.has("representations") || !top.raw("representations").is_array()) {
    throw ConfigError("config: 'representations' must be a list");
  }
  idx = 0;
  for (const auto& jr : top.raw("representations")) {
    const std::string where = "representations[" + std::to_string(idx++) + "]";
    Section s(jr, where);
    RepresentationEntry r;
    const bool has_fp = s.has("fingerprint"), has_emb = s.has("embeddings");
    if (has_fp == has_emb) throw ConfigError(where + ": give exactly one of 'fingerprint' or 'embeddings'");
    if (has_fp) {
      r.fingerprint = parse_fingerprint(s.raw("fingerprint"), s.path("fingerprint"));
      r.name = s.get<std::string>("name", r.fingerprint->label());
    } else {
      r.name = s.require<std::string>("name");
      const json& e = s.raw("embeddings");
      if (e.is_string()) {
        r.embedding_pattern = resolve(base_dir, e.get<std::string>()).string();
      } else if (e.is_object()) {
        for (const auto& [k, v] : e.items()) {
          if (!v.is_string()) throw ConfigError(where + ".embeddings: paths must be strings");
          r.embedding_files[k] = resolve(base_dir, v.get<std::string>());
        }
      } else {
        throw ConfigError(where + ".embeddings: expected a path pattern or a dataset -> path object");
      }
    }
    s.finish();
    cfg.representations.push_back(std::move(r));
  }

  if (top.has("split")) {
    Section s(top.raw("split"), "split");
    cfg.frac_train = s.get<double>("frac_train", cfg.frac_train);
    cfg.split_seed = s.get<std::uint64_t>("seed", cfg.split_seed);
    s.finish();
  }
  if (top.has("classifiers")) {
    Section s(top.raw("classifiers"), "classifiers");
    if (s.has("heads")) {
      cfg.heads.clear();
      for (const auto& h : s.require<std::vector<std::string>>("heads")) cfg.heads.push_back(harness::head_from_string(h));
    }
    cfg.classifier_seed = s.get<std::uint64_t>("seed", cfg.classifier_seed);
    cfg.eval.folds = s.get<int>("folds", cfg.eval.folds);
    cfg.eval.rf_trees = s.get<int>("rf_trees", cfg.eval.rf_trees);
    cfg.eval.standardize_knn = s.get<bool>("standardize_knn", cfg.eval.standardize_knn);
    if (s.has("grids")) {
      Section g(s.raw("grids"), "classifiers.grids");
      for (const auto& [k, v] : s.raw("grids").items()) {
        cfg.grids[harness::head_from_string(k)] = g.require<std::vector<double>>(k.c_str());
      }
      g.finish();
    }
    s.finish();
  }
  if (top.has("bbt")) parse_bbt(top.raw("bbt"), cfg.bbt);
  cfg.baseline = top.get<std::string>("baseline", cfg.baseline);
  cfg.near_win_epsilon = top.get<double>("near_win_epsilon", cfg.near_win_epsilon);
  top.finish();
  cfg.validate();
  return cfg;
}

BenchmarkConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = csv::read_file(path.string());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.parent_path());
}

// ---------------------------------------------------------------------------
// Evaluation

std::string cell_key(const BenchmarkConfig& cfg, const DatasetEntry& dataset, const RepresentationEntry& rep) {
  StableHasher h;
  h.add(static_cast<std::uint64_t>(kConfigVersion));
  h.add_bytes(dataset.name).add_bytes(read_bytes(dataset.path)).add_bytes(dataset.smiles_column);
  for (const auto& t : dataset.tasks) h.add_bytes(t);
  h.add(dataset.largest_fragment_only);
  h.add_bytes(rep.name);
  if (rep.fingerprint) {
    const auto& f = *rep.fingerprint;
    h.add(static_cast<std::uint64_t>(f.kind)).add_signed(f.radius).add_signed(f.length).add(f.counted);
  } else {
    h.add_bytes(read_bytes(cfg.embedding_path(rep, dataset)));
  }
  h.add(std::bit_cast<std::uint64_t>(cfg.frac_train)).add(cfg.split_seed);
  for (const auto& spec : cfg.classifier_specs()) {
    h.add(static_cast<std::uint64_t>(spec.head)).add(spec.seed);
    for (double g : spec.grid) h.add(std::bit_cast<std::uint64_t>(g));
  }
  h.add_signed(cfg.eval.folds).add_signed(cfg.eval.rf_trees).add(cfg.eval.standardize_knn);
  return hex16(h.finish());
}

EvaluationRun run_evaluation(const BenchmarkConfig& cfg, const RunOptions& options) {
  cfg.validate();
  std::vector<LoadedDataset> loaded;
  for (const auto& d : cfg.datasets) {
    try {
      LoadedDataset l;
      l.bytes = read_bytes(d.path);
      harness::LoadOptions lo;
      lo.largest_fragment_only = d.largest_fragment_only;
      l.data = harness::parse_dataset(l.bytes, d.name, d.smiles_column, d.tasks, lo);
      l.split = harness::scaffold_split(l.data, cfg.frac_train, cfg.split_seed);
      loaded.push_back(std::move(l));
    } catch (...) {
      rethrow_with_context(std::current_exception(), "dataset '" + d.name + "': ");
    }
  }

  struct Cell {
    int dataset;
    int rep;
  };
  std::vector<Cell> cells;
  for (int d = 0; d < static_cast<int>(cfg.datasets.size()); ++d) {
    for (int r = 0; r < static_cast<int>(cfg.representations.size()); ++r) cells.push_back({d, r});
  }
  const auto n = static_cast<std::ptrdiff_t>(cells.size());
  std::vector<CellOutcome> outcomes(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::vector<char> from_cache(cells.size(), 0);
  const auto specs = cfg.classifier_specs();
  const fs::path cache_dir = cfg.effective_cache_dir();

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& cell = cells[static_cast<std::size_t>(i)];
    const auto& entry = cfg.datasets[static_cast<std::size_t>(cell.dataset)];
    const auto& rep = cfg.representations[static_cast<std::size_t>(cell.rep)];
    const auto& ld = loaded[static_cast<std::size_t>(cell.dataset)];
    auto& out = outcomes[static_cast<std::size_t>(i)];
    try {
      const std::string key = cell_key(cfg, entry, rep);
      const fs::path file = cache_dir / (key + ".json");
      if (options.resume) {
        if (auto hit = read_cache(file, key)) {
          out = std::move(*hit);
          from_cache[static_cast<std::size_t>(i)] = 1;
          continue;
        }
      }
      const auto x = features_for(cfg, rep, entry, ld.data);
      try {
        const auto ev = harness::tune_and_evaluate(ld.data, x, specs, ld.split, cfg.eval);
        out.records = ev.records(rep.name, entry.name);
      } catch (const harness::EvaluationSkipped& e) {
        out.skipped = true;
        out.reason = e.what();
      }
      write_cache(file, key, out);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }

  EvaluationRun run;
  run.cells = static_cast<int>(n);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& model = cfg.representations[static_cast<std::size_t>(cells[i].rep)].name;
    const auto& dataset = cfg.datasets[static_cast<std::size_t>(cells[i].dataset)].name;
    if (errors[i]) rethrow_with_context(errors[i], "model '" + model + "', dataset '" + dataset + "': ");
    (from_cache[i] ? run.cached : run.computed) += 1;
    if (outcomes[i].skipped) {
      run.skipped.push_back(model + "/" + dataset + ": " + outcomes[i].reason);
    }
    for (auto& r : outcomes[i].records) run.scores.records.push_back(std::move(r));
    if (options.log) {
      *options.log << (from_cache[i] ? "cached   " : "computed ") << model << " / " << dataset
                   << (outcomes[i].skipped ? " (skipped)" : "") << "\n";
    }
  }
  run.scores.sort();
  fs::create_directories(cfg.output_dir);
  write_file(cfg.output_dir / "scores.csv", [&](std::ostream& o) { harness::write_score_table(o, run.scores); });
  return run;
}

// ---------------------------------------------------------------------------
// Comparison and reports

Comparison run_comparison(const harness::ScoreTable& scores, const bbt::BBTConfig& cfg, const std::string& baseline,
                          const fs::path& out_dir) {
  cfg.validate();
  Comparison c;
  c.wins = bbt::build_win_table(scores, cfg.epsilon_tie);
  fs::create_directories(out_dir);
  write_file(out_dir / "win_table.csv", [&](std::ostream& o) { report::write_win_table_csv(o, c.wins); });
  c.posterior = bbt::sample_posterior(c.wins, cfg);
  c.ranking = bbt::rank_models(c.posterior, cfg);
  c.pairs = bbt::all_pairs(c.posterior, cfg);
  c.ppc = bbt::posterior_predictive_check(c.posterior, c.wins, cfg.seed);
  write_file(out_dir / "pairwise.csv", [&](std::ostream& o) { bbt::write_pairwise_csv(o, c.posterior.models, c.pairs); });
  write_file(out_dir / "ranking.json", [&](std::ostream& o) { bbt::write_ranking_json(o, c.posterior, c.ranking, cfg); });
  write_file(out_dir / "ppc.csv", [&](std::ostream& o) { report::write_ppc_csv(o, c.posterior.models, c.ppc); });
  const auto& m = c.posterior.models;
  if (std::find(m.begin(), m.end(), baseline) != m.end()) {
    const auto rows = report::decisions_vs_baseline(c.posterior, baseline, cfg);
    write_file(out_dir / "decisions_vs_baseline.csv",
               [&](std::ostream& o) { report::write_decisions_csv(o, baseline, rows); });
  }
  return c;
}

void write_reports(const harness::ScoreTable& scores, const std::string& baseline, double near_win_epsilon,
                   double tie_epsilon, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const auto avg = report::aggregate_report(scores);
  write_file(out_dir / "average_results.csv", [&](std::ostream& o) { report::write_aggregate_csv(o, avg); });
  const auto wm = report::win_matrix(scores, tie_epsilon);
  write_file(out_dir / "win_matrix.csv", [&](std::ostream& o) { report::write_win_matrix_csv(o, wm); });
  const auto bc = report::baseline_comparison(scores, baseline, near_win_epsilon);
  write_file(out_dir / "baseline_by_dataset.csv", [&](std::ostream& o) { report::write_baseline_datasets_csv(o, bc); });
  write_file(out_dir / "wins_by_model.csv", [&](std::ostream& o) { report::write_baseline_models_csv(o, bc); });
}

PipelineResult run_pipeline(const BenchmarkConfig& cfg, const RunOptions& options) {
  PipelineResult result;
  result.evaluation = run_evaluation(cfg, options);
  const auto& scores = result.evaluation.scores;
  if (scores.with_head("best").empty()) throw DataError("no dataset could be scored");
  write_reports(scores, cfg.baseline, cfg.near_win_epsilon, cfg.bbt.epsilon_tie, cfg.output_dir / "reports");
  if (cfg.representations.size() >= 2) {
    result.comparison = run_comparison(scores, cfg.bbt, cfg.baseline, cfg.output_dir / "bbt");
  }
  return result;
}

}  // namespace molbench::pipeline
