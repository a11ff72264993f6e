// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_RUN_HPP_
#define SNNF_RUN_HPP_

#include <string>

#include "snnf/checkpoint.hpp"
#include "snnf/config.hpp"
#include "snnf/metrics.hpp"

namespace snnf {

// Command bodies shared by the CLI and the experiment drivers. Every
// command writes its outputs plus a manifest under cfg.out_dir and is
// deterministic under a fixed seed.

// Generates the configured synthetic dataset: data.csv plus a sidecar
// stats file with the seed and drawn parameters.
void run_synth(const RunConfig& cfg, bool verbose = false);

struct TrainOutcome {
  MetricReport valid_metrics;
  double best_valid_loss = 0.0;
  int best_epoch = -1;
  int epochs_run = 0;
};

// Trains per config; writes checkpoint.bin and history.csv, prints final
// validation metrics when verbose.
TrainOutcome run_train(const RunConfig& cfg, bool verbose = false);

// RSE/R2 on the requested split at denormalized scale; writes metrics.csv.
// Evaluating on the train split prints a warning.
MetricReport run_eval(const std::string& checkpoint_path, const RunConfig& cfg,
                      Split split = Split::kTest, bool verbose = false);

// Forecasts L steps past the end of the series from its last T rows;
// writes forecast.csv (step,channel,value) at denormalized scale.
void run_forecast(const std::string& checkpoint_path, const RunConfig& cfg,
                  bool verbose = false);

// Measures per-layer firing rates on the test split and writes the energy
// report (energy.csv) plus a printed table.
EnergyReport run_energy(const std::string& checkpoint_path,
                        const RunConfig& cfg, bool verbose = false);

// Dumps encoder spikes (spikes.csv: t,sub_step,channel,spike) and forecast
// vs truth (prediction.csv) for one test-split window.
void run_inspect(const std::string& checkpoint_path, const RunConfig& cfg,
                 int64_t window_index, bool verbose = false);

// Helpers shared with experiments.
MetricReport eval_model(ForecastModel& model, const SeriesDataset& ds,
                        const WindowSpec& w, Split split, int batch_size);
void write_text_file(const std::string& path, const std::string& text);
void ensure_dir(const std::string& path);

}  // namespace snnf

#endif  // SNNF_RUN_HPP_
