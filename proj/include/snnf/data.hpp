// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_DATA_HPP_
#define SNNF_DATA_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "snnf/tensor.hpp"

namespace snnf {

enum class Split { kTrain, kValid, kTest };

// Multivariate series with chronological splits and per-channel z-score
// stats taken from the train split only.
struct SeriesDataset {
  std::vector<float> values;  // (N, C) row-major
  int64_t length = 0;         // N
  int channels = 0;           // C
  std::vector<std::string> channel_names;
  // split boundaries: [0, train_end) train, [train_end, valid_end) valid,
  // [valid_end, N) test
  int64_t train_end = 0;
  int64_t valid_end = 0;
  bool normalized = false;
  std::vector<float> norm_mean, norm_std;  // per channel, from train rows

  float at(int64_t row, int ch) const {
    return values[static_cast<size_t>(row) * channels + ch];
  }
  int64_t split_begin(Split s) const;
  int64_t split_end(Split s) const;
};

struct WindowSpec {
  int lookback = 0;  // T
  int horizon = 0;   // L
  int stride = 1;

  void validate() const;
};

// Two-sine-plus-noise generator: A1*sin(w1*t) + A2*sin(w2*t + phi) + noise.
// Ranged fields are sampled once per dataset from the seed.
struct SynthConfig {
  float a1_lo = 1.0f, a1_hi = 1.0f;
  float a2_lo = 0.0f, a2_hi = 0.0f;
  float omega1 = 5e-3f;
  float omega2 = 0.0f;
  float phi_lo = 0.0f, phi_hi = 0.0f;
  float sigma = 0.0f;
  int64_t length = 0;
  uint32_t seed = 0;

  // Appendix-style presets.
  static SynthConfig preset_low(int64_t length, uint32_t seed);
  static SynthConfig preset_high(int64_t length, uint32_t seed);
  static SynthConfig preset(const std::string& name, int64_t length,
                            uint32_t seed);
  void validate() const;
};

// Amplitudes/phase actually drawn for a generated dataset.
struct SynthDraw {
  float a1 = 0, a2 = 0, phi = 0;
};

SeriesDataset synth_generate(const SynthConfig& cfg, SynthDraw* draw = nullptr);

SeriesDataset load_csv(const std::string& path, bool has_header);
void write_csv(const SeriesDataset& ds, const std::string& path);

// Chronological split at floor(N*train) and floor(N*(train+valid)).
void split(SeriesDataset& ds, double train, double valid, double test);

// Per-channel z-score with stats from the train split; std clamped at 1e-8.
void normalize(SeriesDataset& ds);
std::vector<float> denormalize_channelwise(const SeriesDataset& ds,
                                           const std::vector<float>& flat_lc,
                                           int L);

// Start indices of sliding windows confined to one split.
std::vector<int64_t> window_starts(const SeriesDataset& ds, const WindowSpec& w,
                                   Split s);
// Materializes (X,Y) batch tensors for the given window starts.
// X: (B,T,C), Y: (B,L,C).
std::pair<Tensor, Tensor> make_batch(const SeriesDataset& ds,
                                     const WindowSpec& w,
                                     const std::vector<int64_t>& starts);

}  // namespace snnf

#endif  // SNNF_DATA_HPP_
