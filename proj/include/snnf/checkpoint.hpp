// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_CHECKPOINT_HPP_
#define SNNF_CHECKPOINT_HPP_

#include <string>

#include "snnf/config.hpp"
#include "snnf/nets.hpp"

namespace snnf {

// Binary container: magic "SNNF", format version, the embedded run config,
// and every named parameter/buffer with its shape. Loading validates that
// the model built from the config matches the stored shapes.
void save_checkpoint(const std::string& path, const RunConfig& cfg,
                     ForecastModel& model, int channels);

struct Checkpoint {
  RunConfig config;
  int channels = 0;
  std::map<std::string, std::vector<float>> state;
};

Checkpoint load_checkpoint(const std::string& path);

// Builds the model the checkpoint describes and loads its state into it.
ForecastModel restore_model(const Checkpoint& ckpt);

}  // namespace snnf

#endif  // SNNF_CHECKPOINT_HPP_
