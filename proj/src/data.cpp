// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace snnf {

int64_t SeriesDataset::split_begin(Split s) const {
  switch (s) {
    case Split::kTrain: return 0;
    case Split::kValid: return train_end;
    case Split::kTest: return valid_end;
  }
  throw error("bad split");
}

int64_t SeriesDataset::split_end(Split s) const {
  switch (s) {
    case Split::kTrain: return train_end;
    case Split::kValid: return valid_end;
    case Split::kTest: return length;
  }
  throw error("bad split");
}

void WindowSpec::validate() const {
  if (lookback < 1 || horizon < 1) throw error("WindowSpec: T and L must be >= 1");
  if (stride < 1) throw error("WindowSpec: stride must be >= 1");
}

SynthConfig SynthConfig::preset_low(int64_t length, uint32_t seed) {
  SynthConfig c;
  c.a1_lo = 1.0f;
  c.a1_hi = 5.0f;
  c.a2_lo = 1.0f;
  c.a2_hi = 2.0f;
  c.omega1 = 5e-3f;
  c.omega2 = 0.04f * std::numbers::pi_v<float>;
  c.sigma = 0.3f;
  c.length = length;
  c.seed = seed;
  return c;
}

SynthConfig SynthConfig::preset_high(int64_t length, uint32_t seed) {
  SynthConfig c;
  c.a1_lo = c.a1_hi = 9.0f;
  c.a2_lo = c.a2_hi = 8.0f;
  c.omega1 = 5e-3f;
  c.omega2 = 0.1f * std::numbers::pi_v<float>;
  c.phi_lo = 0.0f;
  c.phi_hi = 10.0f;
  c.sigma = 0.5f;
  c.length = length;
  c.seed = seed;
  return c;
}

SynthConfig SynthConfig::preset(const std::string& name, int64_t length,
                                uint32_t seed) {
  if (name == "low") return preset_low(length, seed);
  if (name == "high") return preset_high(length, seed);
  throw error("unknown synth preset '" + name + "' (low|high)");
}

void SynthConfig::validate() const {
  if (length < 1) throw error("SynthConfig: length must be >= 1");
  if (sigma < 0.0f) throw error("SynthConfig: sigma must be >= 0");
  if (a1_hi < a1_lo || a2_hi < a2_lo || phi_hi < phi_lo)
    throw error("SynthConfig: bad range");
}

SeriesDataset synth_generate(const SynthConfig& cfg, SynthDraw* draw_out) {
  cfg.validate();
  // mt19937 + uniform/normal from <random>; cross-platform bit identity of
  // the normal variates is not guaranteed, same-platform reruns are.
  std::mt19937 rng(cfg.seed);
  auto uni = [&rng](float lo, float hi) {
    if (hi <= lo) return lo;
    return std::uniform_real_distribution<float>(lo, hi)(rng);
  };
  SynthDraw draw;
  draw.a1 = uni(cfg.a1_lo, cfg.a1_hi);
  draw.a2 = uni(cfg.a2_lo, cfg.a2_hi);
  draw.phi = uni(cfg.phi_lo, cfg.phi_hi);
  if (draw_out) *draw_out = draw;
  std::normal_distribution<float> noise(0.0f, cfg.sigma);

  SeriesDataset ds;
  ds.length = cfg.length;
  ds.channels = 1;
  ds.channel_names = {"x"};
  ds.values.resize(static_cast<size_t>(cfg.length));
  for (int64_t t = 0; t < cfg.length; ++t) {
    float v = draw.a1 * std::sin(cfg.omega1 * static_cast<float>(t)) +
              draw.a2 * std::sin(cfg.omega2 * static_cast<float>(t) + draw.phi);
    if (cfg.sigma > 0.0f) v += noise(rng);
    ds.values[static_cast<size_t>(t)] = v;
  }
  ds.train_end = ds.length;
  ds.valid_end = ds.length;
  return ds;
}

SeriesDataset load_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw error("load_csv: cannot open " + path);
  SeriesDataset ds;
  std::string line;
  int64_t row = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (first && has_header) {
      ds.channel_names = cells;
      first = false;
      continue;
    }
    first = false;
    if (ds.channels == 0) ds.channels = static_cast<int>(cells.size());
    if (static_cast<int>(cells.size()) != ds.channels)
      throw error("load_csv: ragged row " + std::to_string(row + 1) + " in " +
                  path + " (" + std::to_string(cells.size()) +
                  " cells, expected " + std::to_string(ds.channels) + ")");
    for (const std::string& c : cells) {
      try {
        size_t pos = 0;
        float v = std::stof(c, &pos);
        while (pos < c.size() && std::isspace(static_cast<unsigned char>(c[pos])))
          ++pos;
        if (pos != c.size()) throw std::invalid_argument(c);
        ds.values.push_back(v);
      } catch (const std::exception&) {
        throw error("load_csv: non-numeric cell '" + c + "' at row " +
                    std::to_string(row + 1) + " in " + path);
      }
    }
    ++row;
  }
  if (row == 0) throw error("load_csv: empty file " + path);
  ds.length = row;
  if (ds.channel_names.empty())
    for (int c = 0; c < ds.channels; ++c)
      ds.channel_names.push_back("c" + std::to_string(c));
  ds.train_end = ds.length;
  ds.valid_end = ds.length;
  return ds;
}

void write_csv(const SeriesDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw error("write_csv: cannot open " + path + " for writing");
  out << std::setprecision(std::numeric_limits<float>::max_digits10);
  for (size_t c = 0; c < ds.channel_names.size(); ++c)
    out << (c ? "," : "") << ds.channel_names[c];
  if (!ds.channel_names.empty()) out << "\n";
  for (int64_t r = 0; r < ds.length; ++r) {
    for (int c = 0; c < ds.channels; ++c)
      out << (c ? "," : "") << ds.at(r, c);
    out << "\n";
  }
  if (!out) throw error("write_csv: write failed for " + path);
}

void split(SeriesDataset& ds, double train, double valid, double test) {
  const double total = train + valid + test;
  if (std::abs(total - 1.0) > 1e-9)
    throw error("split: ratios must sum to 1, got " + std::to_string(total));
  if (train <= 0.0 || valid <= 0.0 || test <= 0.0)
    throw error("split: every ratio must be positive");
  ds.train_end = static_cast<int64_t>(std::floor(static_cast<double>(ds.length) * train));
  ds.valid_end =
      static_cast<int64_t>(std::floor(static_cast<double>(ds.length) * (train + valid)));
  if (ds.train_end == 0 || ds.valid_end == ds.train_end || ds.valid_end == ds.length)
    throw error("split: degenerate split (an empty part) for N=" +
                std::to_string(ds.length));
}

void normalize(SeriesDataset& ds) {
  if (ds.train_end < 1) throw error("normalize: empty train split");
  if (ds.normalized) throw error("normalize: dataset already normalized");
  const int C = ds.channels;
  ds.norm_mean.assign(static_cast<size_t>(C), 0.0f);
  ds.norm_std.assign(static_cast<size_t>(C), 0.0f);
  for (int c = 0; c < C; ++c) {
    double m = 0.0;
    for (int64_t r = 0; r < ds.train_end; ++r) m += ds.at(r, c);
    m /= static_cast<double>(ds.train_end);
    double v = 0.0;
    for (int64_t r = 0; r < ds.train_end; ++r) {
      const double d = ds.at(r, c) - m;
      v += d * d;
    }
    v /= static_cast<double>(ds.train_end);
    ds.norm_mean[static_cast<size_t>(c)] = static_cast<float>(m);
    ds.norm_std[static_cast<size_t>(c)] =
        std::max(static_cast<float>(std::sqrt(v)), 1e-8f);
  }
  for (int64_t r = 0; r < ds.length; ++r)
    for (int c = 0; c < C; ++c)
      ds.values[static_cast<size_t>(r) * C + c] =
          (ds.at(r, c) - ds.norm_mean[static_cast<size_t>(c)]) /
          ds.norm_std[static_cast<size_t>(c)];
  ds.normalized = true;
}

std::vector<float> denormalize_channelwise(const SeriesDataset& ds,
                                           const std::vector<float>& flat_lc,
                                           int L) {
  if (!ds.normalized) return flat_lc;
  const int C = ds.channels;
  if (flat_lc.size() % static_cast<size_t>(L * C) != 0)
    throw error("denormalize: length mismatch");
  std::vector<float> out(flat_lc.size());
  for (size_t i = 0; i < flat_lc.size(); ++i) {
    const int c = static_cast<int>(i % static_cast<size_t>(C));
    out[i] = flat_lc[i] * ds.norm_std[static_cast<size_t>(c)] +
             ds.norm_mean[static_cast<size_t>(c)];
  }
  return out;
}

std::vector<int64_t> window_starts(const SeriesDataset& ds, const WindowSpec& w,
                                   Split s) {
  w.validate();
  const int64_t begin = ds.split_begin(s);
  const int64_t end = ds.split_end(s);
  const int64_t need = w.lookback + w.horizon;
  if (end - begin < need)
    throw error("window_starts: split too short (" + std::to_string(end - begin) +
                " rows, need " + std::to_string(need) + ")");
  std::vector<int64_t> starts;
  for (int64_t st = begin; st + need <= end; st += w.stride) starts.push_back(st);
  return starts;
}

std::pair<Tensor, Tensor> make_batch(const SeriesDataset& ds,
                                     const WindowSpec& w,
                                     const std::vector<int64_t>& starts) {
  const int B = static_cast<int>(starts.size());
  const int T = w.lookback, L = w.horizon, C = ds.channels;
  std::vector<float> xs(static_cast<size_t>(B) * T * C);
  std::vector<float> ys(static_cast<size_t>(B) * L * C);
  for (int b = 0; b < B; ++b) {
    const int64_t st = starts[static_cast<size_t>(b)];
    for (int t = 0; t < T; ++t)
      for (int c = 0; c < C; ++c)
        xs[(static_cast<size_t>(b) * T + t) * C + c] = ds.at(st + t, c);
    for (int l = 0; l < L; ++l)
      for (int c = 0; c < C; ++c)
        ys[(static_cast<size_t>(b) * L + l) * C + c] = ds.at(st + T + l, c);
  }
  return {Tensor::from({B, T, C}, std::move(xs)),
          Tensor::from({B, L, C}, std::move(ys))};
}

}  // namespace snnf
