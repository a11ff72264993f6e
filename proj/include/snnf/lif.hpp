// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_LIF_HPP_
#define SNNF_LIF_HPP_

#include <string>

#include "snnf/tensor.hpp"

namespace snnf {

// Leaky integrate-and-fire parameters. Defaults: threshold 1.0, decay
// 0.99, reset 0, surrogate frequency 2.
struct LifConfig {
  float u_thr = 1.0f;
  float beta = 0.99f;
  float v_reset = 0.0f;
  float alpha = 2.0f;
  // Evaluate the surrogate at (U - u_thr) so its steep region sits at the
  // threshold; off evaluates it at raw U.
  bool center_at_threshold = true;

  void validate() const;
};

// Membrane carry-over between steps. h is the temporal output H and stays
// on the tape so BPTT reaches earlier steps.
struct LifState {
  Tensor h;
  int step_count = 0;

  bool initialized() const { return h.defined(); }
};

// Alignment between series steps and SNN sub-steps: each of the T series
// steps gets ts sub-steps.
struct AlignmentConfig {
  int ts = 4;
  int series_len = 0;
  int channels = 0;

  void validate() const;
};

LifState make_lif_state(const Shape& shape, const LifConfig& cfg);

// One LIF update: U = h_prev + i_t, S = 1[U >= u_thr] (surrogate backward),
// H' = v_reset*S + (1-S)*beta*U. Returns the spikes; state is advanced.
Tensor lif_step(const Tensor& i_t, LifState& state, const LifConfig& cfg);

// Runs lif_step over the leading axis of currents (T', N...) and stacks
// the spike outputs into (T', N...).
Tensor sn_layer(const Tensor& currents, const LifConfig& cfg, LifState& state);

// h back to v_reset everywhere, step counter zeroed. Detaches the state
// from any previous tape.
void reset_state(LifState& state, const LifConfig& cfg);

// A named spiking layer owning its state; shape is fixed at reset.
class SpikingLayer {
 public:
  SpikingLayer() = default;
  explicit SpikingLayer(LifConfig cfg, std::string name = "sn")
      : cfg_(cfg), name_(std::move(name)) {}

  void reset(const Shape& shape) { state_ = make_lif_state(shape, cfg_); }
  Tensor step(const Tensor& current) { return lif_step(current, state_, cfg_); }

  const LifConfig& config() const { return cfg_; }
  LifState& state() { return state_; }
  const std::string& name() const { return name_; }

 private:
  LifConfig cfg_;
  LifState state_;
  std::string name_;
};

}  // namespace snnf

#endif  // SNNF_LIF_HPP_
