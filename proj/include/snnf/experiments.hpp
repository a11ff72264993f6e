// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_EXPERIMENTS_HPP_
#define SNNF_EXPERIMENTS_HPP_

#include <string>
#include <vector>

#include "snnf/config.hpp"
#include "snnf/run.hpp"

namespace snnf {

// Validation R2 below this after training flags a run as non-converged.
inline constexpr double kConvergenceR2 = 0.05;

struct SweepSpec {
  std::string axis;  // ts | beta | encoder | backbone
  std::vector<std::string> values;
  RunConfig base;
  std::vector<uint32_t> seeds = {0, 1, 2};

  void validate() const;
};

// One train+eval cell of a sweep or grid.
struct CellResult {
  std::string value;
  uint32_t seed = 0;
  double rse = 0.0, r2 = 0.0;
  double valid_r2 = 0.0;
  bool converged = false;
  bool failed = false;
  std::string what;
};

// Runs a train+eval per (value, seed) under root_dir; failures are recorded
// and the sweep continues. Writes results.csv (per cell) and summary.csv
// (mean/std per value over seeds).
std::vector<CellResult> run_sweep(const SweepSpec& spec,
                                  const std::string& root_dir,
                                  bool verbose = false);

// encoder x backbone grid (conv/delta/repeat x tcn/rnn/ispikformer) over
// 3 seeds; writes table.csv with mean R2/RSE and non-convergence counts.
std::vector<CellResult> run_encoder_comparison(const RunConfig& base,
                                               const std::string& root_dir,
                                               bool verbose = false);

// Trains all three backbones on the low and high presets and dumps a
// prediction slice (T=20, L=80) per combination.
void run_temporal_analysis(const RunConfig& base, const std::string& root_dir,
                           bool verbose = false);

std::string cell_results_csv(const std::vector<CellResult>& cells);

}  // namespace snnf

#endif  // SNNF_EXPERIMENTS_HPP_
