#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <omp.h>
#include <optional>

#include "molbench/csv.hpp"
#include "molbench/dataset.hpp"
#include "molbench/errors.hpp"
#include "molbench/pipeline.hpp"
#include "molbench/split.hpp"

namespace fs = std::filesystem;
using namespace molbench;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kConfig = 2, kData = 3, kDiagnostic = 4 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  bool resume = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_resume) {
  cmd->add_option("--config", c.config, "Benchmark config (JSON)");
  cmd->add_option("--seed", c.seed, "Seed for split, classifiers and sampler");
  cmd->add_option("--jobs", c.jobs, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  if (with_resume) cmd->add_flag("--resume", c.resume, "Reuse cached (model, dataset) cells");
}

void apply_jobs(const Common& c) {
  if (c.jobs > 0) omp_set_num_threads(c.jobs);
}

pipeline::BenchmarkConfig config_from(const Common& c) {
  if (c.config.empty()) throw ConfigError("--config is required");
  auto cfg = pipeline::load_config(c.config);
  if (c.seed) cfg.set_seed(*c.seed);
  return cfg;
}

/// Molecules of one CSV column, unparseable rows dropped with a warning.
harness::Dataset read_molecules(const std::string& path, const std::string& column) {
  const auto table = csv::read_table(path);
  const auto col = table.column(column);
  if (!col) throw DataError("'" + path + "' has no column '" + column + "'");
  harness::Dataset d;
  d.name = fs::path(path).stem().string();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string smi = *col < row.size() ? row[*col] : "";
    try {
      d.molecules.push_back(molgraph::parse_smiles(smi));
      d.smiles.push_back(smi);
      d.source_rows.push_back(static_cast<int>(r));
    } catch (const molgraph::SmilesError& e) {
      std::cerr << "warning: line " << r + 2 << ": " << e.what() << "\n";
      ++d.dropped_rows;
    }
  }
  if (d.molecules.empty()) throw DataError("'" + path + "': no parseable SMILES");
  return d;
}

harness::ScoreTable scores_from(const std::string& scores_path, const Common& c) {
  if (!scores_path.empty()) return harness::read_score_table(scores_path);
  if (c.config.empty()) throw ConfigError("give --scores or --config");
  return harness::read_score_table((config_from(c).output_dir / "scores.csv").string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"molbench: molecular representation benchmarking"};
  app.require_subcommand(1);

  // fingerprint
  std::string fp_input, fp_output, fp_column = "smiles", fp_kind = "ecfp";
  int fp_radius = 2, fp_length = 2048;
  bool fp_binary = false;
  auto* fp_cmd = app.add_subcommand("fingerprint", "SMILES file -> fingerprint matrix");
  fp_cmd->add_option("--input", fp_input, "CSV with a SMILES column")->required();
  fp_cmd->add_option("--output", fp_output, "Output .csv, or .emb for the binary container")->required();
  fp_cmd->add_option("--smiles-column", fp_column);
  fp_cmd->add_option("--kind", fp_kind, "ecfp | atom_pair | topological_torsion");
  fp_cmd->add_option("--radius", fp_radius);
  fp_cmd->add_option("--length", fp_length);
  fp_cmd->add_flag("--binary", fp_binary, "Presence bits instead of counts");
  Common fp_common;
  fp_cmd->add_option("--jobs", fp_common.jobs)->check(CLI::NonNegativeNumber);

  // split
  std::string sp_input, sp_output, sp_column = "smiles";
  double sp_frac = 0.8;
  Common sp_common;
  auto* sp_cmd = app.add_subcommand("split", "Dataset -> scaffold split index lists");
  sp_cmd->add_option("--input", sp_input, "CSV with a SMILES column")->required();
  sp_cmd->add_option("--output", sp_output, "JSON file (stdout when omitted)");
  sp_cmd->add_option("--smiles-column", sp_column);
  sp_cmd->add_option("--frac-train", sp_frac);
  sp_cmd->add_option("--seed", sp_common.seed);
  sp_cmd->add_option("--jobs", sp_common.jobs)->check(CLI::NonNegativeNumber);

  // evaluate / run
  Common ev_common;
  auto* ev_cmd = app.add_subcommand("evaluate", "Config -> score table");
  add_common(ev_cmd, ev_common, true);
  Common run_common;
  auto* run_cmd = app.add_subcommand("run", "Config -> score table, reports and posterior comparison");
  add_common(run_cmd, run_common, true);

  // compare
  Common cmp_common;
  std::string cmp_scores, cmp_output, cmp_baseline;
  auto* cmp_cmd = app.add_subcommand("compare", "Score table -> Bayesian Bradley-Terry comparison");
  add_common(cmp_cmd, cmp_common, false);
  cmp_cmd->add_option("--scores", cmp_scores, "Score table CSV (default: <output_dir>/scores.csv)");
  cmp_cmd->add_option("--output", cmp_output, "Output directory (default: <output_dir>/bbt)");
  cmp_cmd->add_option("--baseline", cmp_baseline);

  // report
  Common rep_common;
  std::string rep_scores, rep_output, rep_baseline;
  std::optional<double> rep_near, rep_eps;
  auto* rep_cmd = app.add_subcommand("report", "Score table -> aggregate tables");
  add_common(rep_cmd, rep_common, false);
  rep_cmd->add_option("--scores", rep_scores, "Score table CSV (default: <output_dir>/scores.csv)");
  rep_cmd->add_option("--output", rep_output, "Output directory (default: <output_dir>/reports)");
  rep_cmd->add_option("--baseline", rep_baseline);
  rep_cmd->add_option("--near-win-epsilon", rep_near);
  rep_cmd->add_option("--tie-epsilon", rep_eps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*fp_cmd) {
      apply_jobs(fp_common);
      fp::FingerprintConfig cfg;
      try {
        cfg.kind = fp::kind_from_string(fp_kind);
        cfg.radius = fp_radius;
        cfg.length = fp_length;
        cfg.counted = !fp_binary;
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      const auto d = read_molecules(fp_input, fp_column);
      const auto m = fp::fingerprint_matrix(d.molecules, cfg);
      if (fs::path(fp_output).extension() == ".emb") {
        harness::write_fingerprints_binary(fp_output, m);
      } else {
        harness::write_fingerprints_csv(fp_output, m);
      }
      std::cerr << m.rows << " x " << m.cols << " " << cfg.label() << " -> " << fp_output << "\n";
    } else if (*sp_cmd) {
      apply_jobs(sp_common);
      const auto d = read_molecules(sp_input, sp_column);
      harness::Split s;
      try {
        s = harness::scaffold_split(d, sp_frac, sp_common.seed.value_or(0));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      auto rows = [&](const std::vector<int>& idx) {
        std::vector<int> out;
        for (int i : idx) out.push_back(d.source_rows[static_cast<std::size_t>(i)]);
        return out;
      };
      nlohmann::ordered_json j;
      j["frac_train"] = sp_frac;
      j["train"] = rows(s.train_idx);
      j["test"] = rows(s.test_idx);
      if (sp_output.empty()) {
        std::cout << j.dump() << "\n";
      } else {
        std::ofstream out(sp_output);
        if (!out) throw DataError("cannot write '" + sp_output + "'");
        out << j.dump() << "\n";
      }
    } else if (*ev_cmd || *run_cmd) {
      const Common& c = *ev_cmd ? ev_common : run_common;
      apply_jobs(c);
      const auto cfg = config_from(c);
      pipeline::RunOptions opts;
      opts.resume = c.resume;
      opts.log = &std::cerr;
      pipeline::EvaluationRun ev;
      if (*run_cmd) {
        const auto r = pipeline::run_pipeline(cfg, opts);
        ev = r.evaluation;
        if (r.comparison) {
          std::cerr << "posterior: max R-hat " << r.comparison->posterior.diagnostics.max_rhat << ", min ESS "
                    << r.comparison->posterior.diagnostics.min_ess << "\n";
        }
      } else {
        ev = pipeline::run_evaluation(cfg, opts);
      }
      for (const auto& s : ev.skipped) std::cerr << "skipped " << s << "\n";
      std::cout << "cells: " << ev.cells << " total, " << ev.computed << " computed, " << ev.cached << " cached, "
                << ev.skipped.size() << " skipped\n";
      std::cout << "scores: " << (cfg.output_dir / "scores.csv").string() << "\n";
    } else if (*cmp_cmd) {
      apply_jobs(cmp_common);
      bbt::BBTConfig bcfg;
      std::string baseline = "ECFP-count";
      fs::path out_dir = cmp_output;
      if (!cmp_common.config.empty()) {
        const auto cfg = config_from(cmp_common);
        bcfg = cfg.bbt;
        baseline = cfg.baseline;
        if (out_dir.empty()) out_dir = cfg.output_dir / "bbt";
      } else if (cmp_common.seed) {
        bcfg.seed = *cmp_common.seed;
      }
      if (!cmp_baseline.empty()) baseline = cmp_baseline;
      if (out_dir.empty()) throw ConfigError("give --output or --config");
      const auto scores = scores_from(cmp_scores, cmp_common);
      const auto c = pipeline::run_comparison(scores, bcfg, baseline, out_dir);
      for (std::size_t k = 0; k < c.ranking.entries.size(); ++k) {
        std::cout << k + 1 << ". " << c.ranking.entries[k].model << "  beta=" << c.ranking.entries[k].mean_beta << "\n";
      }
      if (c.ranking.indistinguishable) std::cout << "all models indistinguishable\n";
      std::cout << "outputs: " << out_dir.string() << "\n";
    } else if (*rep_cmd) {
      std::string baseline = "ECFP-count";
      double near = 0.01, eps = 0.01;
      fs::path out_dir = rep_output;
      if (!rep_common.config.empty()) {
        const auto cfg = config_from(rep_common);
        baseline = cfg.baseline;
        near = cfg.near_win_epsilon;
        eps = cfg.bbt.epsilon_tie;
        if (out_dir.empty()) out_dir = cfg.output_dir / "reports";
      }
      if (!rep_baseline.empty()) baseline = rep_baseline;
      if (rep_near) near = *rep_near;
      if (rep_eps) eps = *rep_eps;
      if (out_dir.empty()) throw ConfigError("give --output or --config");
      pipeline::write_reports(scores_from(rep_scores, rep_common), baseline, near, eps, out_dir);
      std::cout << "reports: " << out_dir.string() << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DiagnosticError& e) {
    std::cerr << "diagnostic failure: " << e.what() << "\n";
    return kDiagnostic;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
