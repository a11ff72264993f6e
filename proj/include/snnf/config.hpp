// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_CONFIG_HPP_
#define SNNF_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "snnf/data.hpp"
#include "snnf/nets.hpp"
#include "snnf/train.hpp"

namespace snnf {

// Thrown for malformed or invalid configs; the CLI maps it to exit code 2.
struct config_error : error {
  using error::error;
};

// Full run description parsed from a key = value config file. Unknown keys
// are rejected; every key can also be overridden from the command line.
struct RunConfig {
  // dataset
  std::string source = "synth";  // synth | csv
  std::string preset = "low";    // synth presets
  int64_t length = 5000;         // synth length
  std::string csv_path;
  bool has_header = true;
  double train_ratio = 0.6, valid_ratio = 0.2, test_ratio = 0.2;
  bool normalize = true;

  WindowSpec window{20, 80, 1};
  ModelConfig model;
  TrainConfig train;

  uint32_t seed = 0;
  std::string out_dir = "runs/out";

  // Parses a config file; line numbers are reported in errors.
  static RunConfig from_file(const std::string& path);
  static RunConfig from_string(const std::string& text,
                               const std::string& origin = "<string>");

  // Applies one dotted-key override, e.g. "model.ts=8".
  void set(const std::string& key, const std::string& value);
  void apply_overrides(const std::vector<std::string>& kvs);

  void validate() const;

  // Canonical serialization: every key once, fixed order. Reparsing it
  // yields an equal config.
  std::string serialize() const;
  // FNV-1a hash of the canonical serialization.
  std::string hash() const;

  // Builds the dataset this config describes (generated or loaded, then
  // split and optionally normalized).
  SeriesDataset build_dataset() const;
  // Model config with lookback/horizon/channels filled in.
  ModelConfig model_for(int channels) const;
};

// Manifest written beside every command's outputs.
std::string manifest_text(const RunConfig& cfg, const std::string& command);

}  // namespace snnf

#endif  // SNNF_CONFIG_HPP_
