// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/checkpoint.hpp"

#include <cstdint>
#include <fstream>

namespace snnf {

namespace {

constexpr char kMagic[4] = {'S', 'N', 'N', 'F'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& os, uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_u64(std::ostream& os, uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_str(std::ostream& os, const std::string& s) {
  write_u64(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

uint32_t read_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw error("checkpoint: truncated file");
  return v;
}

uint64_t read_u64(std::istream& is) {
  uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw error("checkpoint: truncated file");
  return v;
}

std::string read_str(std::istream& is) {
  const uint64_t n = read_u64(is);
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  if (!is) throw error("checkpoint: truncated file");
  return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const RunConfig& cfg,
                     ForecastModel& model, int channels) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw error("checkpoint: cannot open " + path + " for writing");
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  write_str(os, cfg.serialize());
  write_u32(os, static_cast<uint32_t>(channels));
  const auto state = model.state_values();
  write_u64(os, state.size());
  for (const auto& [name, values] : state) {
    write_str(os, name);
    write_u64(os, values.size());
    os.write(reinterpret_cast<const char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(float)));
  }
  if (!os) throw error("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw error("checkpoint: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != std::string(kMagic, 4))
    throw error("checkpoint: bad magic in " + path);
  const uint32_t ver = read_u32(is);
  if (ver != kVersion)
    throw error("checkpoint: unsupported format version " + std::to_string(ver));
  Checkpoint c;
  c.config = RunConfig::from_string(read_str(is), path + "#config");
  c.channels = static_cast<int>(read_u32(is));
  const uint64_t entries = read_u64(is);
  for (uint64_t i = 0; i < entries; ++i) {
    std::string name = read_str(is);
    const uint64_t n = read_u64(is);
    std::vector<float> vals(n);
    is.read(reinterpret_cast<char*>(vals.data()),
            static_cast<std::streamsize>(n * sizeof(float)));
    if (!is) throw error("checkpoint: truncated tensor '" + name + "'");
    c.state.emplace(std::move(name), std::move(vals));
  }
  return c;
}

ForecastModel restore_model(const Checkpoint& ckpt) {
  ForecastModel model(ckpt.config.model_for(ckpt.channels), ckpt.config.seed);
  model.load_state_values(ckpt.state);
  return model;
}

}  // namespace snnf
