// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/nets.hpp"

#include <cmath>

namespace snnf {

std::string backbone_kind_name(BackboneKind k) {
  switch (k) {
    case BackboneKind::kTcn: return "tcn";
    case BackboneKind::kRnn: return "rnn";
    case BackboneKind::kGru: return "gru";
    case BackboneKind::kISpikformer: return "ispikformer";
  }
  throw error("bad backbone kind");
}

BackboneKind backbone_kind_from(const std::string& s) {
  if (s == "tcn") return BackboneKind::kTcn;
  if (s == "rnn") return BackboneKind::kRnn;
  if (s == "gru") return BackboneKind::kGru;
  if (s == "ispikformer") return BackboneKind::kISpikformer;
  throw error("unknown backbone '" + s + "' (tcn|rnn|gru|ispikformer)");
}

std::string sew_mode_name(SewMode m) {
  switch (m) {
    case SewMode::kAdd: return "add";
    case SewMode::kAnd: return "and";
    case SewMode::kIand: return "iand";
  }
  throw error("bad sew mode");
}

SewMode sew_mode_from(const std::string& s) {
  if (s == "add") return SewMode::kAdd;
  if (s == "and") return SewMode::kAnd;
  if (s == "iand") return SewMode::kIand;
  throw error("unknown SEW mode '" + s + "' (add|and|iand)");
}

Tensor sew_combine(const Tensor& a, const Tensor& b, SewMode mode) {
  if (a.shape() != b.shape())
    throw error("sew_combine: shape mismatch " + shape_str(a.shape()) + " vs " +
                shape_str(b.shape()));
  switch (mode) {
    case SewMode::kAdd: return add(a, b);
    case SewMode::kAnd: return mul(a, b);
    case SewMode::kIand:
      return mul(add_scalar(mul_scalar(a, -1.0f), 1.0f), b);
  }
  throw error("sew_combine: bad mode");
}

void ModelConfig::validate() const {
  lif.validate();
  if (ts < 1) throw error("ModelConfig: ts must be >= 1");
  if (lookback < 1 || horizon < 1 || channels < 1)
    throw error("ModelConfig: lookback, horizon, channels must be >= 1");
  if (backbone == BackboneKind::kTcn) {
    if (tcn_blocks < 1 || tcn_channels < 1 || tcn_kernel < 1 ||
        tcn_dilations.empty())
      throw error("ModelConfig: bad Spike-TCN settings");
  }
  if ((backbone == BackboneKind::kRnn || backbone == BackboneKind::kGru) &&
      hidden < 1)
    throw error("ModelConfig: hidden must be >= 1");
  if (backbone == BackboneKind::kISpikformer &&
      (dim < 1 || ffn_dim < 1 || blocks < 1))
    throw error("ModelConfig: bad iSpikformer settings");
  if (encoder == EncoderKind::kConv && encoder_kernel < 1)
    throw error("ModelConfig: encoder kernel must be >= 1");
}

namespace {

Tensor conv_init(Shape shape, std::mt19937& rng) {
  const float fan_in = static_cast<float>(shape[1] * shape[2]);
  const float bound = 1.0f / std::sqrt(fan_in);
  return Tensor::uniform(std::move(shape), rng, -bound, bound,
                         /*requires_grad=*/true);
}

// BN over the channel axis of a (B,C,T) activation.
Tensor bn_channels(BatchNorm& bn, const Tensor& x, bool training) {
  const int B = x.dim(0), C = x.dim(1), T = x.dim(2);
  Tensor flat = reshape(permute(x, {0, 2, 1}), {B * T, C});
  Tensor y = bn.forward(flat, training);
  return permute(reshape(y, {B, T, C}), {0, 2, 1});
}

Tensor require_encoder_spikes(const Tensor& spikes) {
  if (spikes.rank() != 4) throw error("backbone: expects spikes (B,Ts,T,C)");
  for (float v : spikes.values())
    if (v != 0.0f && v != 1.0f)
      throw error("backbone: non-binary input spike train");
  return spikes;
}

}  // namespace

// ---- Spike-TCN ----

SpikeTcn::SpikeTcn(const ModelConfig& cfg, std::mt19937& rng) : cfg_(cfg) {
  int c_in = cfg.channels;
  for (int i = 0; i < cfg.tcn_blocks; ++i) {
    Block b;
    b.c_in = c_in;
    b.c_out = cfg.tcn_channels;
    b.kernel = cfg.tcn_kernel;
    b.dilation = cfg.tcn_dilations[static_cast<size_t>(i) % cfg.tcn_dilations.size()];
    b.conv_w = conv_init({b.c_out, b.c_in, b.kernel}, rng);
    b.conv_b = Tensor::zeros({b.c_out}, /*requires_grad=*/true);
    b.bn.init(b.c_out, cfg.ts);
    b.sn = SpikingLayer(cfg.lif, "tcn.block" + std::to_string(i) + ".sn");
    // Every block carries a spiking down-sampler so the residual identity
    // is re-binarized; a raw identity would forward SEW-ADD twos into the
    // next combine and break the {0,1,2} cap.
    b.has_down = true;
    if (b.has_down) {
      b.down_w = conv_init({b.c_out, b.c_in, 1}, rng);
      b.down_b = Tensor::zeros({b.c_out}, /*requires_grad=*/true);
      b.down_bn.init(b.c_out, cfg.ts);
      b.down_sn = SpikingLayer(cfg.lif, "tcn.block" + std::to_string(i) + ".down.sn");
    }
    blocks_.push_back(std::move(b));
    c_in = cfg.tcn_channels;
  }
}

Tensor SpikeTcn::forward(const Tensor& spikes, bool training, Probe* probe) {
  require_encoder_spikes(spikes);
  const int B = spikes.dim(0), Ts = spikes.dim(1), T = spikes.dim(2),
            C = spikes.dim(3);
  // Each (b, channel, t) is its own neuron: the membrane is reset per
  // series step by construction, so evaluation is batched over t.
  for (Block& b : blocks_) {
    b.sn.reset({B, b.c_out, T});
    if (b.has_down) b.down_sn.reset({B, b.c_out, T});
  }
  std::vector<Tensor> hidden;
  for (int s = 0; s < Ts; ++s) {
    Tensor x = permute(reshape(slice(spikes, 1, s, 1), {B, T, C}), {0, 2, 1});
    for (size_t i = 0; i < blocks_.size(); ++i) {
      Block& b = blocks_[i];
      const std::string base = "tcn.block" + std::to_string(i);
      if (probe) probe->on_layer_input(base + ".conv", x);
      Tensor y = conv1d_causal(x, b.conv_w, b.conv_b, b.dilation);
      y = bn_channels(b.bn.at(s), y, training);
      Tensor spk = b.sn.step(y);
      if (probe) probe->on_spikes(base + ".sn", spk);
      Tensor res = x;
      if (b.has_down) {
        if (probe) probe->on_layer_input(base + ".down", x);
        Tensor d = conv1d_causal(x, b.down_w, b.down_b, 1);
        d = bn_channels(b.down_bn.at(s), d, training);
        res = b.down_sn.step(d);
        if (probe) probe->on_spikes(base + ".down.sn", res);
      }
      x = sew_combine(spk, res, cfg_.sew);
    }
    hidden.push_back(reshape(x, {B, 1, cfg_.tcn_channels * T}));
  }
  return concat(hidden, 1);
}

void SpikeTcn::collect(std::vector<NamedParam>& out) {
  for (size_t i = 0; i < blocks_.size(); ++i) {
    Block& b = blocks_[i];
    const std::string base = "tcn.block" + std::to_string(i);
    out.push_back({base + ".conv.w", b.conv_w});
    out.push_back({base + ".conv.b", b.conv_b});
    b.bn.collect(base + ".bn", out);
    if (b.has_down) {
      out.push_back({base + ".down.w", b.down_w});
      out.push_back({base + ".down.b", b.down_b});
      b.down_bn.collect(base + ".down.bn", out);
    }
  }
}

void SpikeTcn::collect_buffers(
    std::vector<std::pair<std::string, std::vector<float>*>>& out) {
  for (size_t i = 0; i < blocks_.size(); ++i) {
    Block& b = blocks_[i];
    const std::string base = "tcn.block" + std::to_string(i);
    b.bn.collect_buffers(base + ".bn", out);
    if (b.has_down) b.down_bn.collect_buffers(base + ".down.bn", out);
  }
}

std::vector<LayerCost> SpikeTcn::layer_costs() const {
  std::vector<LayerCost> out;
  const int T = cfg_.lookback;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const Block& b = blocks_[i];
    const std::string base = "tcn.block" + std::to_string(i);
    out.push_back({base + ".conv",
                   static_cast<int64_t>(b.c_out) * b.c_in * b.kernel * T, 0.0,
                   0.0, false});
    if (b.has_down)
      out.push_back({base + ".down",
                     static_cast<int64_t>(b.c_out) * b.c_in * T, 0.0, 0.0,
                     false});
  }
  return out;
}

Shape SpikeTcn::hidden_dims() const {
  return {cfg_.tcn_channels * cfg_.lookback};
}

// ---- Spike-RNN ----

SpikeRnn::SpikeRnn(const ModelConfig& cfg, std::mt19937& rng) : cfg_(cfg) {
  in_.init(cfg.channels, cfg.hidden, rng);
  rec_.init(cfg.hidden, cfg.hidden, rng);
  sn_ = SpikingLayer(cfg.lif, "rnn.sn");
}

Tensor SpikeRnn::forward(const Tensor& spikes, bool training, Probe* probe) {
  (void)training;
  require_encoder_spikes(spikes);
  const int B = spikes.dim(0), Ts = spikes.dim(1), T = spikes.dim(2),
            C = spikes.dim(3);
  sn_.reset({B, cfg_.hidden});
  Tensor prev = Tensor::zeros({B, cfg_.hidden});
  std::vector<Tensor> last_step;
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < Ts; ++s) {
      Tensor x = reshape(slice(slice(spikes, 1, s, 1), 2, t, 1), {B, C});
      if (probe) {
        probe->on_layer_input("rnn.in", x);
        probe->on_layer_input("rnn.rec", prev);
      }
      Tensor cur = add(in_.forward(x), rec_.forward(prev));
      Tensor spk = sn_.step(cur);
      if (probe) probe->on_spikes("rnn.sn", spk);
      prev = spk;
      if (t == T - 1) last_step.push_back(reshape(spk, {B, 1, cfg_.hidden}));
    }
  }
  return concat(last_step, 1);
}

void SpikeRnn::collect(std::vector<NamedParam>& out) {
  in_.collect("rnn.in", out);
  rec_.collect("rnn.rec", out);
}

std::vector<LayerCost> SpikeRnn::layer_costs() const {
  const int64_t T = cfg_.lookback;
  return {
      {"rnn.in", T * cfg_.channels * cfg_.hidden, 0.0, 0.0, false},
      {"rnn.rec", T * static_cast<int64_t>(cfg_.hidden) * cfg_.hidden, 0.0, 0.0,
       false},
  };
}

// ---- Spike-GRU ----

SpikeGru::SpikeGru(const ModelConfig& cfg, std::mt19937& rng) : cfg_(cfg) {
  z_in_.init(cfg.channels, cfg.hidden, rng);
  z_rec_.init(cfg.hidden, cfg.hidden, rng);
  r_in_.init(cfg.channels, cfg.hidden, rng);
  r_rec_.init(cfg.hidden, cfg.hidden, rng);
  h_in_.init(cfg.channels, cfg.hidden, rng);
  h_rec_.init(cfg.hidden, cfg.hidden, rng);
  sn_z_ = SpikingLayer(cfg.lif, "gru.sn_z");
  sn_r_ = SpikingLayer(cfg.lif, "gru.sn_r");
  sn_h_ = SpikingLayer(cfg.lif, "gru.sn_h");
}

Tensor SpikeGru::forward(const Tensor& spikes, bool training, Probe* probe) {
  (void)training;
  require_encoder_spikes(spikes);
  const int B = spikes.dim(0), Ts = spikes.dim(1), T = spikes.dim(2),
            C = spikes.dim(3);
  sn_z_.reset({B, cfg_.hidden});
  sn_r_.reset({B, cfg_.hidden});
  sn_h_.reset({B, cfg_.hidden});
  Tensor h = Tensor::zeros({B, cfg_.hidden});
  std::vector<Tensor> last_step;
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < Ts; ++s) {
      Tensor x = reshape(slice(slice(spikes, 1, s, 1), 2, t, 1), {B, C});
      if (probe) {
        probe->on_layer_input("gru.z.in", x);
        probe->on_layer_input("gru.z.rec", h);
        probe->on_layer_input("gru.r.in", x);
        probe->on_layer_input("gru.r.rec", h);
        probe->on_layer_input("gru.h.in", x);
      }
      Tensor z = sn_z_.step(add(z_in_.forward(x), z_rec_.forward(h)));
      Tensor r = sn_r_.step(add(r_in_.forward(x), r_rec_.forward(h)));
      Tensor gated = mul(r, h);
      if (probe) probe->on_layer_input("gru.h.rec", gated);
      Tensor cand = sn_h_.step(add(h_in_.forward(x), h_rec_.forward(gated)));
      if (probe) {
        probe->on_spikes("gru.sn_z", z);
        probe->on_spikes("gru.sn_r", r);
        probe->on_spikes("gru.sn_h", cand);
      }
      Tensor keep = add_scalar(mul_scalar(z, -1.0f), 1.0f);  // 1 - z
      h = add(mul(z, h), mul(keep, cand));
      if (t == T - 1) last_step.push_back(reshape(h, {B, 1, cfg_.hidden}));
    }
  }
  return concat(last_step, 1);
}

void SpikeGru::collect(std::vector<NamedParam>& out) {
  z_in_.collect("gru.z.in", out);
  z_rec_.collect("gru.z.rec", out);
  r_in_.collect("gru.r.in", out);
  r_rec_.collect("gru.r.rec", out);
  h_in_.collect("gru.h.in", out);
  h_rec_.collect("gru.h.rec", out);
}

std::vector<LayerCost> SpikeGru::layer_costs() const {
  const int64_t T = cfg_.lookback;
  const int64_t in_f = T * cfg_.channels * cfg_.hidden;
  const int64_t rec_f = T * static_cast<int64_t>(cfg_.hidden) * cfg_.hidden;
  return {
      {"gru.z.in", in_f, 0.0, 0.0, false},
      {"gru.z.rec", rec_f, 0.0, 0.0, false},
      {"gru.r.in", in_f, 0.0, 0.0, false},
      {"gru.r.rec", rec_f, 0.0, 0.0, false},
      {"gru.h.in", in_f, 0.0, 0.0, false},
      {"gru.h.rec", rec_f, 0.0, 0.0, false},
  };
}

// ---- iSpikformer ----

ISpikformer::ISpikformer(const ModelConfig& cfg, std::mt19937& rng) : cfg_(cfg) {
  emb_.init(cfg.ts * cfg.lookback, cfg.dim, rng);
  sn_emb_ = SpikingLayer(cfg.lif, "emb.sn");
  LifConfig ssa_lif = cfg.lif;
  ssa_lif.u_thr = cfg.ssa_threshold;
  for (int i = 0; i < cfg.blocks; ++i) {
    Block b;
    b.q.init(cfg.dim, cfg.dim, rng);
    b.k.init(cfg.dim, cfg.dim, rng);
    b.v.init(cfg.dim, cfg.dim, rng);
    b.bn_q.init(cfg.dim, cfg.ts);
    b.bn_k.init(cfg.dim, cfg.ts);
    b.bn_v.init(cfg.dim, cfg.ts);
    b.sn_q = SpikingLayer(ssa_lif);
    b.sn_k = SpikingLayer(ssa_lif);
    b.sn_v = SpikingLayer(ssa_lif);
    b.sn_attn = SpikingLayer(cfg.lif);
    b.f1.init(cfg.dim, cfg.ffn_dim, rng);
    b.f2.init(cfg.ffn_dim, cfg.dim, rng);
    b.bn_f1.init(cfg.ffn_dim, cfg.ts);
    b.bn_f2.init(cfg.dim, cfg.ts);
    b.sn_f1 = SpikingLayer(cfg.lif);
    b.sn_f2 = SpikingLayer(cfg.lif);
    blocks_.push_back(std::move(b));
  }
}

Tensor ISpikformer::forward(const Tensor& spikes, bool training, Probe* probe) {
  require_encoder_spikes(spikes);
  const int B = spikes.dim(0), Ts = spikes.dim(1), T = spikes.dim(2),
            C = spikes.dim(3);
  const int D = cfg_.dim;
  // Channel-wise embedding from the flattened (Ts*T) spike features.
  Tensor flat = reshape(permute(spikes, {0, 3, 1, 2}), {B * C, Ts * T});
  if (probe) probe->on_layer_input("emb", flat);
  Tensor current = reshape(emb_.forward(flat), {B, C, D});
  sn_emb_.reset({B, C, D});
  for (Block& b : blocks_) {
    b.sn_q.reset({B, C, D});
    b.sn_k.reset({B, C, D});
    b.sn_v.reset({B, C, D});
    b.sn_attn.reset({B, C, D});
    b.sn_f1.reset({B, C, cfg_.ffn_dim});
    b.sn_f2.reset({B, C, D});
  }

  auto bn2d = [&](BatchNorm& bn, const Tensor& x, int f) {
    return reshape(bn.forward(reshape(x, {B * C, f}), training), {B, C, f});
  };

  std::vector<Tensor> hidden;
  for (int s = 0; s < Ts; ++s) {
    Tensor x = sn_emb_.step(current);
    if (probe) probe->on_spikes("emb.sn", x);
    for (size_t i = 0; i < blocks_.size(); ++i) {
      Block& b = blocks_[i];
      const std::string base = "blk" + std::to_string(i);
      if (probe) {
        probe->on_layer_input(base + ".q", x);
        probe->on_layer_input(base + ".k", x);
        probe->on_layer_input(base + ".v", x);
      }
      Tensor q = b.sn_q.step(bn2d(b.bn_q.at(s), b.q.forward(x), D));
      Tensor k = b.sn_k.step(bn2d(b.bn_k.at(s), b.k.forward(x), D));
      Tensor v = b.sn_v.step(bn2d(b.bn_v.at(s), b.v.forward(x), D));
      if (probe) {
        probe->on_spikes(base + ".sn_q", q);
        probe->on_spikes(base + ".sn_k", k);
        probe->on_spikes(base + ".sn_v", v);
        probe->on_layer_input(base + ".attn", v);
      }
      Tensor scores = bmm(q, permute(k, {0, 2, 1}));  // (B,C,C), integer-valued
      Tensor att = mul_scalar(bmm(scores, v), cfg_.ssa_scale);
      Tensor attn_spk = b.sn_attn.step(att);
      if (probe) probe->on_spikes(base + ".sn_attn", attn_spk);
      Tensor y = sew_combine(attn_spk, x, cfg_.sew);
      if (probe) probe->on_layer_input(base + ".ffn1", y);
      Tensor f1 = b.sn_f1.step(bn2d(b.bn_f1.at(s), b.f1.forward(y), cfg_.ffn_dim));
      if (probe) {
        probe->on_spikes(base + ".sn_f1", f1);
        probe->on_layer_input(base + ".ffn2", f1);
      }
      Tensor f2 = b.sn_f2.step(bn2d(b.bn_f2.at(s), b.f2.forward(f1), D));
      if (probe) probe->on_spikes(base + ".sn_f2", f2);
      // The residual sits at the attention; the feed-forward consumes the
      // combined value and its spiking output becomes the block output, so
      // every combine sees binary inputs and every block input is binary.
      x = f2;
    }
    hidden.push_back(reshape(x, {B, 1, C, D}));
  }
  return concat(hidden, 1);
}

void ISpikformer::collect(std::vector<NamedParam>& out) {
  emb_.collect("emb", out);
  for (size_t i = 0; i < blocks_.size(); ++i) {
    Block& b = blocks_[i];
    const std::string base = "blk" + std::to_string(i);
    b.q.collect(base + ".q", out);
    b.k.collect(base + ".k", out);
    b.v.collect(base + ".v", out);
    b.bn_q.collect(base + ".bn_q", out);
    b.bn_k.collect(base + ".bn_k", out);
    b.bn_v.collect(base + ".bn_v", out);
    b.f1.collect(base + ".ffn1", out);
    b.f2.collect(base + ".ffn2", out);
    b.bn_f1.collect(base + ".bn_f1", out);
    b.bn_f2.collect(base + ".bn_f2", out);
  }
}

void ISpikformer::collect_buffers(
    std::vector<std::pair<std::string, std::vector<float>*>>& out) {
  for (size_t i = 0; i < blocks_.size(); ++i) {
    Block& b = blocks_[i];
    const std::string base = "blk" + std::to_string(i);
    b.bn_q.collect_buffers(base + ".bn_q", out);
    b.bn_k.collect_buffers(base + ".bn_k", out);
    b.bn_v.collect_buffers(base + ".bn_v", out);
    b.bn_f1.collect_buffers(base + ".bn_f1", out);
    b.bn_f2.collect_buffers(base + ".bn_f2", out);
  }
}

std::vector<LayerCost> ISpikformer::layer_costs() const {
  std::vector<LayerCost> out;
  const int64_t C = cfg_.channels, D = cfg_.dim, F = cfg_.ffn_dim,
                T = cfg_.lookback;
  // The embedding consumes the whole (Ts*T) spike train once; its
  // per-sub-step equivalent count keeps SOPs = Ts * gamma * FLOPs exact.
  out.push_back({"emb", C * T * D, 0.0, 0.0, false});
  for (int i = 0; i < cfg_.blocks; ++i) {
    const std::string base = "blk" + std::to_string(i);
    out.push_back({base + ".q", C * D * D, 0.0, 0.0, false});
    out.push_back({base + ".k", C * D * D, 0.0, 0.0, false});
    out.push_back({base + ".v", C * D * D, 0.0, 0.0, false});
    out.push_back({base + ".attn", 2 * C * C * D, 0.0, 0.0, false});
    out.push_back({base + ".ffn1", C * D * F, 0.0, 0.0, false});
    out.push_back({base + ".ffn2", C * F * D, 0.0, 0.0, false});
  }
  return out;
}

// ---- ForecastModel ----

ForecastModel::ForecastModel(const ModelConfig& cfg, uint32_t seed) : cfg_(cfg) {
  cfg_.validate();
  std::mt19937 rng(seed);
  EncoderConfig ec;
  ec.kind = cfg_.encoder;
  ec.ts = cfg_.ts;
  ec.conv_kernel = cfg_.encoder_kernel;
  ec.lif = cfg_.lif;
  encoder_.init(ec, rng);
  switch (cfg_.backbone) {
    case BackboneKind::kTcn:
      backbone_ = std::make_unique<SpikeTcn>(cfg_, rng);
      break;
    case BackboneKind::kRnn:
      backbone_ = std::make_unique<SpikeRnn>(cfg_, rng);
      break;
    case BackboneKind::kGru:
      backbone_ = std::make_unique<SpikeGru>(cfg_, rng);
      break;
    case BackboneKind::kISpikformer:
      backbone_ = std::make_unique<ISpikformer>(cfg_, rng);
      break;
  }
  per_channel_decoder_ = cfg_.backbone == BackboneKind::kISpikformer;
  Shape hd = backbone_->hidden_dims();
  int64_t feat = 1;
  for (int d : hd) feat *= d;
  if (per_channel_decoder_) feat = cfg_.dim;
  const int d_in = static_cast<int>(cfg_.decoder_flatten_ts ? feat * cfg_.ts
                                                            : feat);
  const int d_out = per_channel_decoder_ ? cfg_.horizon
                                         : cfg_.horizon * cfg_.channels;
  decoder_.init(d_in, d_out, rng);
}

Tensor ForecastModel::forward(const Tensor& x, bool training, Probe* probe) {
  if (x.rank() != 3) throw error("ForecastModel: input must be (B,T,C)");
  if (x.dim(1) != cfg_.lookback || x.dim(2) != cfg_.channels)
    throw error("ForecastModel: input " + shape_str(x.shape()) +
                " does not match (T=" + std::to_string(cfg_.lookback) +
                ", C=" + std::to_string(cfg_.channels) + ")");
  const int B = x.dim(0);
  Tensor spikes = encoder_.encode(x, training, probe);
  Tensor hidden = backbone_->forward(spikes, training, probe);  // (B,Ts,...)

  Tensor readout;
  if (per_channel_decoder_) {
    // hidden: (B,Ts,C,D)
    const int C = cfg_.channels, D = cfg_.dim;
    if (cfg_.decoder_flatten_ts) {
      readout = reshape(permute(hidden, {0, 2, 1, 3}), {B * C, cfg_.ts * D});
    } else {
      readout = reshape(mean_axis(hidden, 1), {B * C, D});
    }
    Tensor y = decoder_.forward(readout);  // (B*C, L)
    return permute(reshape(y, {B, C, cfg_.horizon}), {0, 2, 1});
  }
  const int64_t feat = hidden.size() / (static_cast<int64_t>(B) * cfg_.ts);
  if (cfg_.decoder_flatten_ts) {
    readout = reshape(hidden, {B, static_cast<int>(cfg_.ts * feat)});
  } else {
    readout = reshape(mean_axis(hidden, 1), {B, static_cast<int>(feat)});
  }
  Tensor y = decoder_.forward(readout);
  return reshape(y, {B, cfg_.horizon, cfg_.channels});
}

std::vector<NamedParam> ForecastModel::params() {
  std::vector<NamedParam> out;
  encoder_.collect("encoder", out);
  backbone_->collect(out);
  decoder_.collect("decoder", out);
  return out;
}

std::vector<LayerCost> ForecastModel::layer_costs() const {
  std::vector<LayerCost> out;
  const int64_t enc = encoder_.flops_per_sample(cfg_.lookback, cfg_.channels);
  if (enc > 0) {
    const std::string name = cfg_.encoder == EncoderKind::kDelta
                                 ? "encoder.linear"
                                 : "encoder.conv";
    out.push_back({name, enc, 0.0, 0.0, true});
  }
  std::vector<LayerCost> bb = backbone_->layer_costs();
  for (LayerCost& l : bb) out.push_back(std::move(l));
  const int64_t dec_flops =
      static_cast<int64_t>(decoder_.d_in()) * decoder_.d_out() *
      (per_channel_decoder_ ? cfg_.channels : 1);
  out.push_back({"decoder", dec_flops, 0.0, 0.0, true});
  return out;
}

std::vector<std::pair<std::string, std::vector<float>*>>
ForecastModel::buffers_() {
  std::vector<std::pair<std::string, std::vector<float>*>> bufs;
  encoder_.collect_buffers("encoder", bufs);
  backbone_->collect_buffers(bufs);
  return bufs;
}

std::map<std::string, std::vector<float>> ForecastModel::state_values() {
  std::map<std::string, std::vector<float>> sv;
  for (NamedParam& p : params()) sv[p.name] = p.tensor.values();
  // BN running statistics ride along with the parameters.
  for (auto& [name, vec] : buffers_()) sv[name] = *vec;
  return sv;
}

void ForecastModel::load_state_values(
    const std::map<std::string, std::vector<float>>& sv) {
  for (NamedParam& p : params()) {
    auto it = sv.find(p.name);
    if (it == sv.end()) throw error("checkpoint missing parameter " + p.name);
    if (it->second.size() != p.tensor.values().size())
      throw error("checkpoint shape mismatch for " + p.name);
    p.tensor.mutable_values() = it->second;
  }
  for (auto& [name, vec] : buffers_()) {
    auto it = sv.find(name);
    if (it == sv.end()) throw error("checkpoint missing buffer " + name);
    if (it->second.size() != vec->size())
      throw error("checkpoint shape mismatch for buffer " + name);
    *vec = it->second;
  }
}

// ---- RateRecorder ----

void RateRecorder::on_layer_input(const std::string& layer, const Tensor& x) {
  auto& [ones, total] = acc_[layer];
  for (float v : x.values())
    if (v >= 0.5f) ones += 1.0;
  total += static_cast<double>(x.size());
}

double RateRecorder::rate(const std::string& layer) const {
  auto it = acc_.find(layer);
  if (it == acc_.end()) throw error("no firing rate recorded for layer " + layer);
  if (it->second.second == 0.0) return 0.0;
  return it->second.first / it->second.second;
}

}  // namespace snnf
