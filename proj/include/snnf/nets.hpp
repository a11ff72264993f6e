// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_NETS_HPP_
#define SNNF_NETS_HPP_

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "snnf/encoders.hpp"
#include "snnf/energy.hpp"
#include "snnf/lif.hpp"
#include "snnf/nn.hpp"
#include "snnf/tensor.hpp"

namespace snnf {

enum class BackboneKind { kTcn, kRnn, kGru, kISpikformer };
enum class SewMode { kAdd, kAnd, kIand };

std::string backbone_kind_name(BackboneKind k);
BackboneKind backbone_kind_from(const std::string& s);
std::string sew_mode_name(SewMode m);
SewMode sew_mode_from(const std::string& s);

// Spike-element-wise residual combine of two equal-shape binary arrays.
// ADD yields {0,1,2}; AND and IAND stay binary.
Tensor sew_combine(const Tensor& a, const Tensor& b, SewMode mode);

struct ModelConfig {
  BackboneKind backbone = BackboneKind::kRnn;
  EncoderKind encoder = EncoderKind::kConv;
  int ts = 4;
  int lookback = 0;  // T
  int horizon = 0;   // L
  int channels = 0;  // C
  LifConfig lif;
  int encoder_kernel = 3;
  // Spike-TCN
  int tcn_channels = 16;
  int tcn_kernel = 3;
  int tcn_blocks = 3;
  std::vector<int> tcn_dilations = {1, 2, 4};
  SewMode sew = SewMode::kAdd;
  // Spike-RNN / Spike-GRU
  int hidden = 128;
  // iSpikformer
  int dim = 512;
  int ffn_dim = 1024;
  int blocks = 2;
  float ssa_threshold = 0.25f;
  float ssa_scale = 0.125f;
  // Decoder readout: mean firing rate over Ts (default) or flattened Ts.
  bool decoder_flatten_ts = false;

  void validate() const;
};

// A spiking backbone maps encoder spikes (B,Ts,T,C) to hidden spikes with
// the Ts axis leading the per-sample features.
class Backbone {
 public:
  virtual ~Backbone() = default;
  virtual Tensor forward(const Tensor& spikes, bool training, Probe* probe) = 0;
  virtual void collect(std::vector<NamedParam>& out) = 0;
  virtual void collect_buffers(
      std::vector<std::pair<std::string, std::vector<float>*>>& out) {
    (void)out;
  }
  virtual std::vector<LayerCost> layer_costs() const = 0;
  // Per-sample feature dims after the Ts axis, e.g. {F} or {C,D}.
  virtual Shape hidden_dims() const = 0;
};

class SpikeTcn : public Backbone {
 public:
  SpikeTcn(const ModelConfig& cfg, std::mt19937& rng);
  Tensor forward(const Tensor& spikes, bool training, Probe* probe) override;
  void collect(std::vector<NamedParam>& out) override;
  void collect_buffers(
      std::vector<std::pair<std::string, std::vector<float>*>>& out) override;
  std::vector<LayerCost> layer_costs() const override;
  Shape hidden_dims() const override;

 private:
  struct Block {
    Tensor conv_w, conv_b;
    BatchNormTT bn;
    SpikingLayer sn;
    bool has_down = false;
    Tensor down_w, down_b;
    BatchNormTT down_bn;
    SpikingLayer down_sn;
    int c_in = 0, c_out = 0, kernel = 0, dilation = 1;
  };
  ModelConfig cfg_;
  std::vector<Block> blocks_;
};

class SpikeRnn : public Backbone {
 public:
  SpikeRnn(const ModelConfig& cfg, std::mt19937& rng);
  Tensor forward(const Tensor& spikes, bool training, Probe* probe) override;
  void collect(std::vector<NamedParam>& out) override;
  std::vector<LayerCost> layer_costs() const override;
  Shape hidden_dims() const override { return {cfg_.hidden}; }

 private:
  ModelConfig cfg_;
  Dense in_, rec_;
  SpikingLayer sn_;
};

// GRU recurrences with every nonlinearity replaced by a spiking layer:
//   z = SN(Wz x + Uz h),  r = SN(Wr x + Ur h),
//   hcand = SN(Wh x + Uh (r*h)),  h' = z*h + (1-z)*hcand.
// Gates are binary, so the update is a multiplex between binary arrays.
class SpikeGru : public Backbone {
 public:
  SpikeGru(const ModelConfig& cfg, std::mt19937& rng);
  Tensor forward(const Tensor& spikes, bool training, Probe* probe) override;
  void collect(std::vector<NamedParam>& out) override;
  std::vector<LayerCost> layer_costs() const override;
  Shape hidden_dims() const override { return {cfg_.hidden}; }

 private:
  ModelConfig cfg_;
  Dense z_in_, z_rec_, r_in_, r_rec_, h_in_, h_rec_;
  SpikingLayer sn_z_, sn_r_, sn_h_;
};

class ISpikformer : public Backbone {
 public:
  ISpikformer(const ModelConfig& cfg, std::mt19937& rng);
  Tensor forward(const Tensor& spikes, bool training, Probe* probe) override;
  void collect(std::vector<NamedParam>& out) override;
  void collect_buffers(
      std::vector<std::pair<std::string, std::vector<float>*>>& out) override;
  std::vector<LayerCost> layer_costs() const override;
  Shape hidden_dims() const override { return {cfg_.channels, cfg_.dim}; }

 private:
  struct Block {
    Dense q, k, v;
    BatchNormTT bn_q, bn_k, bn_v;
    SpikingLayer sn_q, sn_k, sn_v, sn_attn;
    Dense f1, f2;
    BatchNormTT bn_f1, bn_f2;
    SpikingLayer sn_f1, sn_f2;
  };
  ModelConfig cfg_;
  Dense emb_;
  SpikingLayer sn_emb_;
  std::vector<Block> blocks_;
};

// Encoder + backbone + decoder behind one interface. Forward maps float
// windows (B,T,C) to forecasts (B,L,C); the decoder is the only float
// computation after the spiking stack.
class ForecastModel {
 public:
  ForecastModel(const ModelConfig& cfg, uint32_t seed);

  Tensor forward(const Tensor& x, bool training, Probe* probe = nullptr);

  const ModelConfig& config() const { return cfg_; }
  std::vector<NamedParam> params();
  std::vector<LayerCost> layer_costs() const;
  SpikeEncoder& encoder() { return encoder_; }
  Backbone& backbone() { return *backbone_; }

  // Snapshot / restore of parameter values (used by early stopping).
  std::map<std::string, std::vector<float>> state_values();
  void load_state_values(const std::map<std::string, std::vector<float>>& sv);

 private:
  std::vector<std::pair<std::string, std::vector<float>*>> buffers_();

  ModelConfig cfg_;
  SpikeEncoder encoder_;
  std::unique_ptr<Backbone> backbone_;
  Dense decoder_;
  bool per_channel_decoder_ = false;
};

// Probe that accumulates per-layer input firing rates over many forwards.
class RateRecorder : public Probe {
 public:
  void on_layer_input(const std::string& layer, const Tensor& x) override;
  double rate(const std::string& layer) const;
  bool has(const std::string& layer) const { return acc_.count(layer) > 0; }

 private:
  std::map<std::string, std::pair<double, double>> acc_;  // ones, total
};

}  // namespace snnf

#endif  // SNNF_NETS_HPP_
