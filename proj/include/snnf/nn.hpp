// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_NN_HPP_
#define SNNF_NN_HPP_

#include <random>
#include <string>
#include <vector>

#include "snnf/tensor.hpp"

namespace snnf {

struct NamedParam {
  std::string name;
  Tensor tensor;
};

// Observation hook used by the energy accounting (layer input firing
// rates), the binarity test suite, and spike-train inspection.
struct Probe {
  virtual ~Probe() = default;
  // Spike (or binary) activations entering a weighted layer.
  virtual void on_layer_input(const std::string& layer, const Tensor& x) {
    (void)layer;
    (void)x;
  }
  // Output of a spiking layer.
  virtual void on_spikes(const std::string& layer, const Tensor& s) {
    (void)layer;
    (void)s;
  }
};

// Fully connected layer, Kaiming-style uniform fan-in init.
struct Dense {
  Tensor w;  // (d_in, d_out)
  Tensor b;  // (d_out)

  void init(int d_in, int d_out, std::mt19937& rng);
  Tensor forward(const Tensor& x) const { return affine(x, w, b); }
  int d_in() const { return w.dim(0); }
  int d_out() const { return w.dim(1); }
  void collect(const std::string& prefix, std::vector<NamedParam>& out);
};

// Batch normalization over 2D inputs (R, F), one statistic per feature.
class BatchNorm {
 public:
  void init(int features);
  // Train mode needs R >= 2; eval mode is a per-feature affine map using
  // the running statistics.
  Tensor forward(const Tensor& x, bool training);
  void collect(const std::string& prefix, std::vector<NamedParam>& out);
  void collect_buffers(const std::string& prefix,
                       std::vector<std::pair<std::string, std::vector<float>*>>& out);

  Tensor gamma, beta;
  std::vector<float> run_mean, run_var;
  float momentum = 0.1f;
  float eps = 1e-5f;
  int features() const { return static_cast<int>(run_mean.size()); }
};

// Batch normalization with separate statistics and affine parameters per
// SNN sub-step. A spiking layer sees a systematically different input
// distribution at each of its Ts sub-steps (the membrane drifts), so one
// running statistic shared across sub-steps mis-normalizes every sub-step
// at inference time.
class BatchNormTT {
 public:
  void init(int features, int steps);
  Tensor forward(const Tensor& x, int step, bool training) {
    return at(step).forward(x, training);
  }
  BatchNorm& at(int step) { return per_step_.at(static_cast<size_t>(step)); }
  int steps() const { return static_cast<int>(per_step_.size()); }
  void collect(const std::string& prefix, std::vector<NamedParam>& out);
  void collect_buffers(const std::string& prefix,
                       std::vector<std::pair<std::string, std::vector<float>*>>& out);

 private:
  std::vector<BatchNorm> per_step_;
};

}  // namespace snnf

#endif  // SNNF_NN_HPP_
