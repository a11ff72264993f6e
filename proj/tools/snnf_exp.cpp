// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "snnf/experiments.hpp"

namespace {

snnf::RunConfig make_config(const std::string& config_path,
                            const std::vector<std::string>& overrides) {
  snnf::RunConfig cfg = config_path.empty()
                            ? snnf::RunConfig{}
                            : snnf::RunConfig::from_file(config_path);
  cfg.apply_overrides(overrides);
  return cfg;
}

std::vector<uint32_t> parse_seeds(const std::vector<std::string>& raw) {
  if (raw.empty()) return {0, 1, 2};
  std::vector<uint32_t> out;
  for (const std::string& s : raw)
    out.push_back(static_cast<uint32_t>(std::stoul(s)));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scripted experiment suites"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "experiments";
  bool verbose = false;
  app.add_option("-c,--config", config_path, "base config file");
  app.add_option("--set", overrides, "override a base-config key");
  app.add_option("-o,--out", out_dir, "experiment output root");
  app.add_flag("-v,--verbose", verbose, "progress output on stderr");

  auto* sweep = app.add_subcommand("sweep", "train+eval along one axis");
  std::string axis;
  std::vector<std::string> values;
  std::vector<std::string> seed_args;
  sweep->add_option("--axis", axis, "ts|beta|encoder|backbone")->required();
  sweep->add_option("--values", values, "axis values")->required();
  sweep->add_option("--seeds", seed_args, "seeds (default 0 1 2)");

  auto* encoders =
      app.add_subcommand("encoders", "encoder x backbone comparison grid");
  auto* temporal = app.add_subcommand(
      "temporal", "prediction slices for all backbones on both presets");

  CLI11_PARSE(app, argc, argv);

  try {
    snnf::RunConfig base = make_config(config_path, overrides);
    if (sweep->parsed()) {
      snnf::SweepSpec spec;
      spec.axis = axis;
      spec.values = values;
      spec.base = base;
      spec.seeds = parse_seeds(seed_args);
      snnf::run_sweep(spec, out_dir, verbose);
    } else if (encoders->parsed()) {
      snnf::run_encoder_comparison(base, out_dir, verbose);
    } else if (temporal->parsed()) {
      snnf::run_temporal_analysis(base, out_dir, verbose);
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
