// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_ENCODERS_HPP_
#define SNNF_ENCODERS_HPP_

#include <random>
#include <string>
#include <vector>

#include "snnf/lif.hpp"
#include "snnf/nn.hpp"
#include "snnf/tensor.hpp"

namespace snnf {

enum class EncoderKind { kDelta, kConv, kRepeat };

std::string encoder_kind_name(EncoderKind k);
EncoderKind encoder_kind_from(const std::string& s);

struct EncoderConfig {
  EncoderKind kind = EncoderKind::kConv;
  int ts = 4;
  int conv_kernel = 3;  // causal, left padded
  LifConfig lif;
};

// Converts float windows (B,T,C) into binary spike trains (B,Ts,T,C).
// Delta: per-(t,c) differences through a 1->Ts linear map, BN, spiking
// layer over Ts sub-steps. Conv: per-channel causal temporal conv with Ts
// kernels, BN, spiking layer. Repeat: the raw value is presented as the
// input current at each of the Ts sub-steps (no weights, no BN).
class SpikeEncoder {
 public:
  SpikeEncoder() = default;
  void init(const EncoderConfig& cfg, std::mt19937& rng);

  Tensor encode(const Tensor& x, bool training, Probe* probe = nullptr);

  const EncoderConfig& config() const { return cfg_; }
  void collect(const std::string& prefix, std::vector<NamedParam>& out);
  void collect_buffers(const std::string& prefix,
                       std::vector<std::pair<std::string, std::vector<float>*>>& out);
  // MAC count of the (float-input) first layer for one sample.
  int64_t flops_per_sample(int T, int C) const;

 private:
  Tensor run_lif(const Tensor& currents_rts, int B, int T, int C,
                 bool channel_major, Probe* probe);

  EncoderConfig cfg_;
  Dense linear_;    // delta: 1 -> Ts
  Tensor conv_w_;   // conv: (Ts, 1, k)
  Tensor conv_b_;   // (Ts)
  BatchNorm bn_;    // over the Ts features
};

}  // namespace snnf

#endif  // SNNF_ENCODERS_HPP_
