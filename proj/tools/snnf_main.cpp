// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "snnf/run.hpp"

namespace {

// Loads the config, applies --set overrides, and resolves the output root
// from $SNNF_OUT_ROOT when out_dir is relative.
snnf::RunConfig make_config(const std::string& config_path,
                            const std::vector<std::string>& overrides) {
  snnf::RunConfig cfg = config_path.empty()
                            ? snnf::RunConfig{}
                            : snnf::RunConfig::from_file(config_path);
  cfg.apply_overrides(overrides);
  if (const char* root = std::getenv("SNNF_OUT_ROOT");
      root && *root && std::filesystem::path(cfg.out_dir).is_relative())
    cfg.out_dir = (std::filesystem::path(root) / cfg.out_dir).string();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spiking-network time-series forecasting"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::vector<std::string> overrides;
  bool verbose = false;
  app.add_option("-c,--config", config_path, "config file (key = value lines)");
  app.add_option("--set", overrides, "override a config key, e.g. model.ts=8");
  app.add_flag("-v,--verbose", verbose, "progress output on stderr");

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  auto* train = app.add_subcommand("train", "train a model");
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  auto* forecast =
      app.add_subcommand("forecast", "forecast past the end of the series");
  auto* energy = app.add_subcommand("energy", "per-layer energy report");
  auto* inspect =
      app.add_subcommand("inspect", "dump spikes and a prediction slice");

  std::string checkpoint;
  for (CLI::App* sub : {eval, forecast, energy, inspect})
    sub->add_option("--checkpoint", checkpoint, "trained checkpoint path")
        ->required();
  std::string eval_split = "test";
  eval->add_option("--split", eval_split, "train|valid|test (default test)");
  int64_t window_index = 0;
  inspect->add_option("--window", window_index, "test-split window index");

  CLI11_PARSE(app, argc, argv);

  try {
    snnf::RunConfig cfg = make_config(config_path, overrides);
    if (synth->parsed()) {
      snnf::run_synth(cfg, verbose);
    } else if (train->parsed()) {
      snnf::TrainOutcome out = snnf::run_train(cfg, verbose);
      std::printf("best_epoch=%d valid_loss=%.6f valid_rse=%.6f valid_r2=%.6f\n",
                  out.best_epoch, out.best_valid_loss, out.valid_metrics.rse,
                  out.valid_metrics.r2);
    } else if (eval->parsed()) {
      snnf::Split split;
      if (eval_split == "train") split = snnf::Split::kTrain;
      else if (eval_split == "valid") split = snnf::Split::kValid;
      else if (eval_split == "test") split = snnf::Split::kTest;
      else throw snnf::config_error("--split must be train|valid|test");
      snnf::MetricReport r = snnf::run_eval(checkpoint, cfg, split, verbose);
      std::printf("rse=%.6f r2=%.6f samples=%d\n", r.rse, r.r2, r.samples);
    } else if (forecast->parsed()) {
      snnf::run_forecast(checkpoint, cfg, verbose);
    } else if (energy->parsed()) {
      snnf::EnergyReport r = snnf::run_energy(checkpoint, cfg, verbose);
      std::printf("snn_pj=%.1f ann_pj=%.1f reduction_pct=%.2f\n",
                  r.snn_energy_pj, r.ann_energy_pj, r.reduction_pct);
    } else if (inspect->parsed()) {
      snnf::run_inspect(checkpoint, cfg, window_index, verbose);
    }
  } catch (const snnf::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
