// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/encoders.hpp"

#include <cmath>

namespace snnf {

std::string encoder_kind_name(EncoderKind k) {
  switch (k) {
    case EncoderKind::kDelta: return "delta";
    case EncoderKind::kConv: return "conv";
    case EncoderKind::kRepeat: return "repeat";
  }
  throw error("bad encoder kind");
}

EncoderKind encoder_kind_from(const std::string& s) {
  if (s == "delta") return EncoderKind::kDelta;
  if (s == "conv") return EncoderKind::kConv;
  if (s == "repeat") return EncoderKind::kRepeat;
  throw error("unknown encoder kind '" + s + "' (delta|conv|repeat)");
}

void SpikeEncoder::init(const EncoderConfig& cfg, std::mt19937& rng) {
  cfg_ = cfg;
  cfg_.lif.validate();
  if (cfg_.ts < 1) throw error("SpikeEncoder: ts must be >= 1");
  switch (cfg_.kind) {
    case EncoderKind::kDelta:
      linear_.init(1, cfg_.ts, rng);
      bn_.init(cfg_.ts);
      break;
    case EncoderKind::kConv: {
      if (cfg_.conv_kernel < 1) throw error("SpikeEncoder: kernel must be >= 1");
      const float bound = 1.0f / std::sqrt(static_cast<float>(cfg_.conv_kernel));
      conv_w_ = Tensor::uniform({cfg_.ts, 1, cfg_.conv_kernel}, rng, -bound, bound,
                                /*requires_grad=*/true);
      conv_b_ = Tensor::uniform({cfg_.ts}, rng, -bound, bound,
                                /*requires_grad=*/true);
      bn_.init(cfg_.ts);
      break;
    }
    case EncoderKind::kRepeat:
      break;  // parameter-free
  }
}

Tensor SpikeEncoder::run_lif(const Tensor& currents_rts, int B, int T, int C,
                             bool channel_major, Probe* probe) {
  const int R = currents_rts.dim(0);
  LifState state = make_lif_state({R}, cfg_.lif);
  std::vector<Tensor> per_substep;
  per_substep.reserve(static_cast<size_t>(cfg_.ts));
  for (int s = 0; s < cfg_.ts; ++s) {
    Tensor cur = reshape(slice(currents_rts, 1, s, 1), {R});
    Tensor spk = lif_step(cur, state, cfg_.lif);
    if (channel_major) {
      spk = permute(reshape(spk, {B, C, T}), {0, 2, 1});
      spk = reshape(spk, {B, 1, T, C});
    } else {
      spk = reshape(spk, {B, 1, T, C});
    }
    per_substep.push_back(spk);
  }
  Tensor out = concat(per_substep, 1);
  if (probe) probe->on_spikes("encoder.sn", out);
  return out;
}

Tensor SpikeEncoder::encode(const Tensor& x, bool training, Probe* probe) {
  if (x.rank() != 3) throw error("SpikeEncoder: input must be (B,T,C)");
  const int B = x.dim(0), T = x.dim(1), C = x.dim(2);
  if (T < 1) throw error("SpikeEncoder: empty series");
  const int ts = cfg_.ts;

  switch (cfg_.kind) {
    case EncoderKind::kDelta: {
      // x_0 is taken as x_1, so the first difference is zero.
      Tensor dx;
      if (T == 1) {
        dx = Tensor::zeros({B, 1, C});
      } else {
        Tensor diff = sub(slice(x, 1, 1, T - 1), slice(x, 1, 0, T - 1));
        dx = concat({Tensor::zeros({B, 1, C}), diff}, 1);
      }
      Tensor flat = reshape(dx, {B * T * C, 1});
      Tensor cur = linear_.forward(flat);            // (B*T*C, Ts)
      cur = bn_.forward(cur, training);
      return run_lif(cur, B, T, C, /*channel_major=*/false, probe);
    }
    case EncoderKind::kConv: {
      Tensor xc = reshape(permute(x, {0, 2, 1}), {B * C, 1, T});
      Tensor y = conv1d_causal(xc, conv_w_, conv_b_, 1);  // (B*C, Ts, T)
      Tensor flat = reshape(permute(y, {0, 2, 1}), {B * C * T, ts});
      Tensor cur = bn_.forward(flat, training);
      return run_lif(cur, B, T, C, /*channel_major=*/true, probe);
    }
    case EncoderKind::kRepeat: {
      Tensor flat = reshape(x, {B * T * C});
      LifState state = make_lif_state({B * T * C}, cfg_.lif);
      std::vector<Tensor> per_substep;
      for (int s = 0; s < ts; ++s) {
        Tensor spk = lif_step(flat, state, cfg_.lif);
        per_substep.push_back(reshape(spk, {B, 1, T, C}));
      }
      Tensor out = concat(per_substep, 1);
      if (probe) probe->on_spikes("encoder.sn", out);
      return out;
    }
  }
  throw error("SpikeEncoder: bad kind");
}

void SpikeEncoder::collect(const std::string& prefix,
                           std::vector<NamedParam>& out) {
  switch (cfg_.kind) {
    case EncoderKind::kDelta:
      linear_.collect(prefix + ".linear", out);
      bn_.collect(prefix + ".bn", out);
      break;
    case EncoderKind::kConv:
      out.push_back({prefix + ".conv.w", conv_w_});
      out.push_back({prefix + ".conv.b", conv_b_});
      bn_.collect(prefix + ".bn", out);
      break;
    case EncoderKind::kRepeat:
      break;
  }
}

void SpikeEncoder::collect_buffers(
    const std::string& prefix,
    std::vector<std::pair<std::string, std::vector<float>*>>& out) {
  if (cfg_.kind != EncoderKind::kRepeat) bn_.collect_buffers(prefix + ".bn", out);
}

int64_t SpikeEncoder::flops_per_sample(int T, int C) const {
  switch (cfg_.kind) {
    case EncoderKind::kDelta:
      return static_cast<int64_t>(T) * C * cfg_.ts;
    case EncoderKind::kConv:
      return static_cast<int64_t>(C) * cfg_.ts * cfg_.conv_kernel * T;
    case EncoderKind::kRepeat:
      return 0;
  }
  return 0;
}

}  // namespace snnf
