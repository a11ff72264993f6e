// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

namespace snnf {

namespace fs = std::filesystem;

void SweepSpec::validate() const {
  if (axis != "ts" && axis != "beta" && axis != "encoder" && axis != "backbone")
    throw config_error("sweep: axis must be ts|beta|encoder|backbone, got '" +
                       axis + "'");
  if (values.empty()) throw config_error("sweep: values must be non-empty");
  if (seeds.empty()) throw config_error("sweep: seeds must be non-empty");
  base.validate();
}

namespace {

std::string axis_key(const std::string& axis) {
  if (axis == "ts") return "model.ts";
  if (axis == "beta") return "model.beta";
  if (axis == "encoder") return "model.encoder";
  if (axis == "backbone") return "model.backbone";
  throw config_error("sweep: bad axis '" + axis + "'");
}

// Trains one configuration and evaluates the test split; exceptions are
// captured into the cell.
CellResult run_cell(RunConfig cfg, const std::string& value, uint32_t seed,
                    const std::string& cell_dir, bool verbose) {
  CellResult cell;
  cell.value = value;
  cell.seed = seed;
  try {
    cfg.set("seed", std::to_string(seed));
    cfg.out_dir = cell_dir;
    cfg.validate();
    TrainOutcome tr = run_train(cfg, verbose);
    cell.valid_r2 = tr.valid_metrics.r2;
    cell.converged = tr.valid_metrics.r2 >= kConvergenceR2;
    MetricReport m = run_eval((fs::path(cell_dir) / "checkpoint.bin").string(),
                              cfg, Split::kTest, verbose);
    cell.rse = m.rse;
    cell.r2 = m.r2;
  } catch (const std::exception& e) {
    cell.failed = true;
    cell.what = e.what();
  }
  return cell;
}

struct Agg {
  double sum_r2 = 0, sum_r2_sq = 0, sum_rse = 0;
  int n = 0, nonconverged = 0, failures = 0;

  void add(const CellResult& c) {
    if (c.failed) {
      ++failures;
      return;
    }
    sum_r2 += c.r2;
    sum_r2_sq += c.r2 * c.r2;
    sum_rse += c.rse;
    ++n;
    if (!c.converged) ++nonconverged;
  }
  double mean_r2() const { return n ? sum_r2 / n : 0.0; }
  double std_r2() const {
    if (n < 2) return 0.0;
    const double m = mean_r2();
    return std::sqrt(std::max(0.0, sum_r2_sq / n - m * m));
  }
  double mean_rse() const { return n ? sum_rse / n : 0.0; }
};

}  // namespace

std::string cell_results_csv(const std::vector<CellResult>& cells) {
  std::ostringstream os;
  os << "value,seed,rse,r2,valid_r2,converged,failed,error\n";
  for (const CellResult& c : cells) {
    std::string what = c.what;
    for (char& ch : what)
      if (ch == ',' || ch == '\n') ch = ';';
    os << c.value << "," << c.seed << "," << c.rse << "," << c.r2 << ","
       << c.valid_r2 << "," << (c.converged ? 1 : 0) << ","
       << (c.failed ? 1 : 0) << "," << what << "\n";
  }
  return os.str();
}

std::vector<CellResult> run_sweep(const SweepSpec& spec,
                                  const std::string& root_dir, bool verbose) {
  spec.validate();
  ensure_dir(root_dir);
  const std::string key = axis_key(spec.axis);

  std::vector<CellResult> cells;
  std::map<std::string, Agg> aggs;
  for (const std::string& value : spec.values) {
    for (uint32_t seed : spec.seeds) {
      RunConfig cfg = spec.base;
      CellResult cell;
      try {
        cfg.set(key, value);
      } catch (const std::exception& e) {
        cell.value = value;
        cell.seed = seed;
        cell.failed = true;
        cell.what = e.what();
        cells.push_back(cell);
        aggs[value].add(cells.back());
        continue;
      }
      const std::string cell_dir =
          (fs::path(root_dir) / (spec.axis + "_" + value + "_seed" +
                                 std::to_string(seed)))
              .string();
      if (verbose)
        std::fprintf(stderr, "sweep %s=%s seed=%u\n", spec.axis.c_str(),
                     value.c_str(), seed);
      cells.push_back(run_cell(cfg, value, seed, cell_dir, verbose));
      aggs[value].add(cells.back());
    }
  }

  write_text_file((fs::path(root_dir) / "results.csv").string(),
                  cell_results_csv(cells));
  std::ostringstream sum;
  sum << "value,mean_r2,std_r2,mean_rse,runs,nonconverged,failures\n";
  for (const std::string& value : spec.values) {
    const Agg& a = aggs[value];
    sum << value << "," << a.mean_r2() << "," << a.std_r2() << ","
        << a.mean_rse() << "," << a.n << "," << a.nonconverged << ","
        << a.failures << "\n";
  }
  write_text_file((fs::path(root_dir) / "summary.csv").string(), sum.str());

  std::ostringstream man;
  man << "experiment = sweep\n";
  man << "axis = " << spec.axis << "\n";
  man << "values =";
  for (const std::string& v : spec.values) man << " " << v;
  man << "\nseeds =";
  for (uint32_t s : spec.seeds) man << " " << s;
  man << "\nbase_config_hash = " << spec.base.hash() << "\n";
  man << "# base config\n" << spec.base.serialize();
  write_text_file((fs::path(root_dir) / "manifest.txt").string(), man.str());
  return cells;
}

std::vector<CellResult> run_encoder_comparison(const RunConfig& base,
                                               const std::string& root_dir,
                                               bool verbose) {
  base.validate();
  ensure_dir(root_dir);
  const std::vector<std::string> encoders = {"conv", "delta", "repeat"};
  const std::vector<std::string> backbones = {"tcn", "rnn", "ispikformer"};
  const std::vector<uint32_t> seeds = {0, 1, 2};

  std::vector<CellResult> cells;
  std::map<std::string, Agg> aggs;
  for (const std::string& enc : encoders) {
    for (const std::string& bb : backbones) {
      const std::string label = enc + "/" + bb;
      for (uint32_t seed : seeds) {
        RunConfig cfg = base;
        cfg.set("model.encoder", enc);
        cfg.set("model.backbone", bb);
        const std::string cell_dir =
            (fs::path(root_dir) /
             (enc + "_" + bb + "_seed" + std::to_string(seed)))
                .string();
        if (verbose)
          std::fprintf(stderr, "encoder grid %s seed=%u\n", label.c_str(), seed);
        cells.push_back(run_cell(cfg, label, seed, cell_dir, verbose));
        aggs[label].add(cells.back());
      }
    }
  }

  write_text_file((fs::path(root_dir) / "results.csv").string(),
                  cell_results_csv(cells));
  std::ostringstream table;
  table << "encoder,backbone,mean_r2,std_r2,mean_rse,runs,nonconverged,failures\n";
  for (const std::string& enc : encoders)
    for (const std::string& bb : backbones) {
      const Agg& a = aggs[enc + "/" + bb];
      table << enc << "," << bb << "," << a.mean_r2() << "," << a.std_r2()
            << "," << a.mean_rse() << "," << a.n << "," << a.nonconverged
            << "," << a.failures << "\n";
    }
  write_text_file((fs::path(root_dir) / "table.csv").string(), table.str());

  std::ostringstream man;
  man << "experiment = encoder_comparison\n";
  man << "convergence_r2_threshold = " << kConvergenceR2 << "\n";
  man << "base_config_hash = " << base.hash() << "\n";
  man << "# base config\n" << base.serialize();
  write_text_file((fs::path(root_dir) / "manifest.txt").string(), man.str());
  return cells;
}

void run_temporal_analysis(const RunConfig& base, const std::string& root_dir,
                           bool verbose) {
  ensure_dir(root_dir);
  const std::vector<std::string> backbones = {"tcn", "rnn", "ispikformer"};
  const std::vector<std::string> presets = {"low", "high"};
  for (const std::string& preset : presets) {
    for (const std::string& bb : backbones) {
      RunConfig cfg = base;
      cfg.set("dataset.source", "synth");
      cfg.set("dataset.preset", preset);
      cfg.set("model.backbone", bb);
      cfg.set("window.lookback", "20");
      cfg.set("window.horizon", "80");
      cfg.out_dir = (fs::path(root_dir) / (preset + "_" + bb)).string();
      cfg.validate();
      if (verbose)
        std::fprintf(stderr, "temporal %s/%s\n", preset.c_str(), bb.c_str());
      run_train(cfg, verbose);
      const std::string ckpt =
          (fs::path(cfg.out_dir) / "checkpoint.bin").string();
      run_eval(ckpt, cfg, Split::kTest, verbose);
      run_inspect(ckpt, cfg, 0, verbose);
    }
  }
  std::ostringstream man;
  man << "experiment = temporal_analysis\n";
  man << "base_config_hash = " << base.hash() << "\n";
  man << "# base config\n" << base.serialize();
  write_text_file((fs::path(root_dir) / "manifest.txt").string(), man.str());
}

}  // namespace snnf
