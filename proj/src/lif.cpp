// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/lif.hpp"

#include <cmath>

namespace snnf {

void LifConfig::validate() const {
  if (!(u_thr > v_reset)) throw error("LifConfig: u_thr must exceed v_reset");
  if (!(beta > 0.0f && beta <= 1.0f)) throw error("LifConfig: beta must be in (0,1]");
  if (!(alpha > 0.0f)) throw error("LifConfig: alpha must be positive");
}

void AlignmentConfig::validate() const {
  if (ts < 1) throw error("AlignmentConfig: ts must be >= 1");
}

LifState make_lif_state(const Shape& shape, const LifConfig& cfg) {
  LifState s;
  s.h = Tensor::full(shape, cfg.v_reset);
  s.step_count = 0;
  return s;
}

Tensor lif_step(const Tensor& i_t, LifState& state, const LifConfig& cfg) {
  if (!state.initialized()) throw error("lif_step: state not initialized");
  if (i_t.shape() != state.h.shape())
    throw error("lif_step: current shape " + shape_str(i_t.shape()) +
                " != state shape " + shape_str(state.h.shape()));
  Tensor u = add(state.h, i_t);
  Tensor s = spike(u, cfg.u_thr, cfg.alpha, cfg.center_at_threshold);
  // H' = v_reset*S + (1-S)*beta*U; the v_reset branch is constant.
  Tensor keep = add_scalar(mul_scalar(s, -1.0f), 1.0f);  // 1 - S
  Tensor h = mul(keep, mul_scalar(u, cfg.beta));
  if (cfg.v_reset != 0.0f) h = add(h, mul_scalar(s, cfg.v_reset));
  state.h = h;
  state.step_count += 1;
  return s;
}

Tensor sn_layer(const Tensor& currents, const LifConfig& cfg, LifState& state) {
  if (currents.rank() < 2) throw error("sn_layer: currents must be (T',N...)");
  const int t_steps = currents.dim(0);
  std::vector<Tensor> spikes;
  spikes.reserve(static_cast<size_t>(t_steps));
  for (int t = 0; t < t_steps; ++t) {
    Tensor i_t = slice(currents, 0, t, 1);
    Shape step_shape(currents.shape().begin() + 1, currents.shape().end());
    i_t = reshape(i_t, step_shape);
    Tensor s = lif_step(i_t, state, cfg);
    Shape expanded = currents.shape();
    expanded[0] = 1;
    spikes.push_back(reshape(s, expanded));
  }
  return concat(spikes, 0);
}

void reset_state(LifState& state, const LifConfig& cfg) {
  if (!state.initialized()) throw error("reset_state: state not initialized");
  state.h = Tensor::full(state.h.shape(), cfg.v_reset);
  state.step_count = 0;
}

}  // namespace snnf
