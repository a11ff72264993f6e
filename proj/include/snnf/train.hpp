// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_TRAIN_HPP_
#define SNNF_TRAIN_HPP_

#include <map>
#include <string>
#include <vector>

#include "snnf/data.hpp"
#include "snnf/nets.hpp"
#include "snnf/tensor.hpp"

namespace snnf {

struct TrainConfig {
  int batch_size = 128;
  float lr = 1e-4f;
  int patience = 30;
  int max_epochs = 50;
  uint32_t seed = 0;
  float beta1 = 0.9f;
  float beta2 = 0.999f;
  float adam_eps = 1e-8f;
  // Global-norm clip; <= 0 disables (default off).
  float clip_norm = 0.0f;

  void validate() const;
};

// Per-parameter Adam moments; order follows the parameter list.
class Adam {
 public:
  Adam(std::vector<NamedParam> params, float lr, float beta1 = 0.9f,
       float beta2 = 0.999f, float eps = 1e-8f);

  // Applies one bias-corrected update from the accumulated grads, then
  // leaves grads untouched (caller zeroes them).
  void step();
  void zero_grad();
  // Global-norm gradient clipping; no-op when max_norm <= 0.
  void clip_global_norm(float max_norm);
  int64_t t() const { return t_; }

 private:
  std::vector<NamedParam> params_;
  std::vector<std::vector<float>> m_, v_;
  float lr_, beta1_, beta2_, eps_;
  int64_t t_ = 0;
};

Tensor mse_loss(const Tensor& pred, const Tensor& target);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double wall_seconds = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> history;
  int best_epoch = -1;
  double best_valid_loss = 0.0;
  bool stopped_early = false;
};

// BPTT training with shuffled batches, per-epoch validation, and early
// stopping on the validation loss; the best-on-validation parameters are
// restored into the model before returning.
TrainResult train(ForecastModel& model, const SeriesDataset& ds,
                  const WindowSpec& w, const TrainConfig& cfg,
                  bool verbose = false);

std::string history_csv(const std::vector<EpochStats>& history);

}  // namespace snnf

#endif  // SNNF_TRAIN_HPP_
