// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace snnf {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw config_error("config: key '" + key + "' expects a bool, got '" + v + "'");
}

template <typename T>
T parse_num(const std::string& v, const std::string& key) {
  std::istringstream is(v);
  T out{};
  is >> out;
  if (is.fail() || !is.eof())
    throw config_error("config: key '" + key + "' expects a number, got '" + v + "'");
  return out;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string float_str(float v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path);
}

RunConfig RunConfig::from_string(const std::string& text,
                                 const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(origin + ":" + std::to_string(lineno) +
                         ": expected 'key = value', got '" + line + "'");
    try {
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const config_error& e) {
      throw config_error(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (value.empty() && key != "dataset.csv")
    throw config_error("config: empty value for key '" + key + "'");

  if (key == "seed") { seed = parse_num<uint32_t>(value, key); train.seed = seed; return; }
  if (key == "out_dir") { out_dir = value; return; }

  if (key == "dataset.source") {
    if (value != "synth" && value != "csv")
      throw config_error("config: dataset.source must be synth|csv, got '" + value + "'");
    source = value;
    return;
  }
  if (key == "dataset.preset") {
    if (value != "low" && value != "high")
      throw config_error("config: dataset.preset must be low|high, got '" + value + "'");
    preset = value;
    return;
  }
  if (key == "dataset.length") { length = parse_num<int64_t>(value, key); return; }
  if (key == "dataset.csv") { csv_path = value; return; }
  if (key == "dataset.has_header") { has_header = parse_bool(value, key); return; }
  if (key == "dataset.train") { train_ratio = parse_num<double>(value, key); return; }
  if (key == "dataset.valid") { valid_ratio = parse_num<double>(value, key); return; }
  if (key == "dataset.test") { test_ratio = parse_num<double>(value, key); return; }
  if (key == "dataset.normalize") { normalize = parse_bool(value, key); return; }

  if (key == "window.lookback") { window.lookback = parse_num<int>(value, key); return; }
  if (key == "window.horizon") { window.horizon = parse_num<int>(value, key); return; }
  if (key == "window.stride") { window.stride = parse_num<int>(value, key); return; }

  if (key == "model.backbone") {
    try { model.backbone = backbone_kind_from(value); }
    catch (const error& e) { throw config_error(e.what()); }
    return;
  }
  if (key == "model.encoder") {
    try { model.encoder = encoder_kind_from(value); }
    catch (const error& e) { throw config_error(e.what()); }
    return;
  }
  if (key == "model.sew") {
    try { model.sew = sew_mode_from(value); }
    catch (const error& e) { throw config_error(e.what()); }
    return;
  }
  if (key == "model.ts") { model.ts = parse_num<int>(value, key); return; }
  if (key == "model.beta") { model.lif.beta = parse_num<float>(value, key); return; }
  if (key == "model.u_thr") { model.lif.u_thr = parse_num<float>(value, key); return; }
  if (key == "model.v_reset") { model.lif.v_reset = parse_num<float>(value, key); return; }
  if (key == "model.alpha") { model.lif.alpha = parse_num<float>(value, key); return; }
  if (key == "model.center_at_threshold") {
    model.lif.center_at_threshold = parse_bool(value, key);
    return;
  }
  if (key == "model.encoder_kernel") { model.encoder_kernel = parse_num<int>(value, key); return; }
  if (key == "model.tcn_channels") { model.tcn_channels = parse_num<int>(value, key); return; }
  if (key == "model.tcn_kernel") { model.tcn_kernel = parse_num<int>(value, key); return; }
  if (key == "model.tcn_blocks") {
    model.tcn_blocks = parse_num<int>(value, key);
    model.tcn_dilations.clear();
    for (int i = 0; i < model.tcn_blocks; ++i)
      model.tcn_dilations.push_back(1 << std::min(i, 16));
    return;
  }
  if (key == "model.hidden") { model.hidden = parse_num<int>(value, key); return; }
  if (key == "model.dim") { model.dim = parse_num<int>(value, key); return; }
  if (key == "model.ffn_dim") { model.ffn_dim = parse_num<int>(value, key); return; }
  if (key == "model.blocks") { model.blocks = parse_num<int>(value, key); return; }
  if (key == "model.ssa_threshold") { model.ssa_threshold = parse_num<float>(value, key); return; }
  if (key == "model.ssa_scale") { model.ssa_scale = parse_num<float>(value, key); return; }
  if (key == "model.decoder_flatten_ts") {
    model.decoder_flatten_ts = parse_bool(value, key);
    return;
  }

  if (key == "train.batch_size") { train.batch_size = parse_num<int>(value, key); return; }
  if (key == "train.lr") { train.lr = parse_num<float>(value, key); return; }
  if (key == "train.max_epochs") { train.max_epochs = parse_num<int>(value, key); return; }
  if (key == "train.patience") { train.patience = parse_num<int>(value, key); return; }
  if (key == "train.clip_norm") { train.clip_norm = parse_num<float>(value, key); return; }

  throw config_error("config: unknown key '" + key + "'");
}

void RunConfig::apply_overrides(const std::vector<std::string>& kvs) {
  for (const std::string& kv : kvs) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw config_error("--set expects key=value, got '" + kv + "'");
    std::string key = trim(kv.substr(0, eq));
    std::string val = trim(kv.substr(eq + 1));
    set(key, val);
  }
}

void RunConfig::validate() const {
  if (source == "csv" && csv_path.empty())
    throw config_error("config: dataset.source=csv requires dataset.csv");
  if (source == "synth" && length < 1)
    throw config_error("config: dataset.length must be >= 1");
  if (train_ratio <= 0 || valid_ratio <= 0 || test_ratio <= 0)
    throw config_error("config: split ratios must be positive");
  if (std::abs(train_ratio + valid_ratio + test_ratio - 1.0) > 1e-9)
    throw config_error("config: split ratios must sum to 1");
  try {
    window.validate();
    ModelConfig m = model;
    m.lookback = window.lookback;
    m.horizon = window.horizon;
    m.channels = 1;
    m.validate();
    train.validate();
  } catch (const error& e) {
    throw config_error(e.what());
  }
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "seed = " << seed << "\n";
  os << "out_dir = " << out_dir << "\n";
  os << "dataset.source = " << source << "\n";
  os << "dataset.preset = " << preset << "\n";
  os << "dataset.length = " << length << "\n";
  os << "dataset.csv = " << csv_path << "\n";
  os << "dataset.has_header = " << bool_str(has_header) << "\n";
  os << "dataset.train = " << train_ratio << "\n";
  os << "dataset.valid = " << valid_ratio << "\n";
  os << "dataset.test = " << test_ratio << "\n";
  os << "dataset.normalize = " << bool_str(normalize) << "\n";
  os << "window.lookback = " << window.lookback << "\n";
  os << "window.horizon = " << window.horizon << "\n";
  os << "window.stride = " << window.stride << "\n";
  os << "model.backbone = " << backbone_kind_name(model.backbone) << "\n";
  os << "model.encoder = " << encoder_kind_name(model.encoder) << "\n";
  os << "model.sew = " << sew_mode_name(model.sew) << "\n";
  os << "model.ts = " << model.ts << "\n";
  os << "model.beta = " << float_str(model.lif.beta) << "\n";
  os << "model.u_thr = " << float_str(model.lif.u_thr) << "\n";
  os << "model.v_reset = " << float_str(model.lif.v_reset) << "\n";
  os << "model.alpha = " << float_str(model.lif.alpha) << "\n";
  os << "model.center_at_threshold = " << bool_str(model.lif.center_at_threshold)
     << "\n";
  os << "model.encoder_kernel = " << model.encoder_kernel << "\n";
  os << "model.tcn_channels = " << model.tcn_channels << "\n";
  os << "model.tcn_kernel = " << model.tcn_kernel << "\n";
  os << "model.tcn_blocks = " << model.tcn_blocks << "\n";
  os << "model.hidden = " << model.hidden << "\n";
  os << "model.dim = " << model.dim << "\n";
  os << "model.ffn_dim = " << model.ffn_dim << "\n";
  os << "model.blocks = " << model.blocks << "\n";
  os << "model.ssa_threshold = " << float_str(model.ssa_threshold) << "\n";
  os << "model.ssa_scale = " << float_str(model.ssa_scale) << "\n";
  os << "model.decoder_flatten_ts = " << bool_str(model.decoder_flatten_ts)
     << "\n";
  os << "train.batch_size = " << train.batch_size << "\n";
  os << "train.lr = " << float_str(train.lr) << "\n";
  os << "train.max_epochs = " << train.max_epochs << "\n";
  os << "train.patience = " << train.patience << "\n";
  os << "train.clip_norm = " << float_str(train.clip_norm) << "\n";
  return os.str();
}

std::string RunConfig::hash() const {
  const std::string s = serialize();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

SeriesDataset RunConfig::build_dataset() const {
  SeriesDataset ds;
  if (source == "synth") {
    ds = synth_generate(SynthConfig::preset(preset, length, seed));
  } else {
    ds = load_csv(csv_path, has_header);
  }
  split(ds, train_ratio, valid_ratio, test_ratio);
  if (normalize) snnf::normalize(ds);
  return ds;
}

ModelConfig RunConfig::model_for(int channels) const {
  ModelConfig m = model;
  m.lookback = window.lookback;
  m.horizon = window.horizon;
  m.channels = channels;
  m.validate();
  return m;
}

std::string manifest_text(const RunConfig& cfg, const std::string& command) {
  std::ostringstream os;
  os << "command = " << command << "\n";
  os << "config_hash = " << cfg.hash() << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "format_version = 1\n";
  os << "# config\n";
  std::istringstream in(cfg.serialize());
  std::string line;
  while (std::getline(in, line)) os << "config." << line << "\n";
  return os.str();
}

}  // namespace snnf
