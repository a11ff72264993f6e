// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/run.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "snnf/train.hpp"

namespace snnf {

namespace fs = std::filesystem;

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw error("cannot create directory " + path + ": " + ec.message());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw error("write failed for " + path);
}

namespace {

std::string out_path(const RunConfig& cfg, const std::string& file) {
  return (fs::path(cfg.out_dir) / file).string();
}

void write_manifest(const RunConfig& cfg, const std::string& command) {
  write_text_file(out_path(cfg, "manifest_" + command + ".txt"),
                  manifest_text(cfg, command));
}

// Prediction matrix over every window of a split, denormalized.
struct SplitPreds {
  std::vector<float> preds, truths;  // flat (M,L,C)
  int M = 0;
};

SplitPreds predict_split(ForecastModel& model, const SeriesDataset& ds,
                         const WindowSpec& w, Split split, int batch_size) {
  const std::vector<int64_t> starts = window_starts(ds, w, split);
  const int L = w.horizon, C = ds.channels;
  SplitPreds out;
  out.M = static_cast<int>(starts.size());
  out.preds.reserve(static_cast<size_t>(out.M) * L * C);
  out.truths.reserve(static_cast<size_t>(out.M) * L * C);
  for (size_t i = 0; i < starts.size(); i += static_cast<size_t>(batch_size)) {
    const size_t n =
        std::min(static_cast<size_t>(batch_size), starts.size() - i);
    std::vector<int64_t> chunk(starts.begin() + static_cast<long>(i),
                               starts.begin() + static_cast<long>(i + n));
    auto [x, y] = make_batch(ds, w, chunk);
    Tensor pred = model.forward(x, /*training=*/false);
    std::vector<float> p = denormalize_channelwise(ds, pred.values(), L);
    std::vector<float> t = denormalize_channelwise(ds, y.values(), L);
    out.preds.insert(out.preds.end(), p.begin(), p.end());
    out.truths.insert(out.truths.end(), t.begin(), t.end());
  }
  return out;
}

}  // namespace

MetricReport eval_model(ForecastModel& model, const SeriesDataset& ds,
                        const WindowSpec& w, Split split, int batch_size) {
  SplitPreds sp = predict_split(model, ds, w, split, batch_size);
  return evaluate_metrics(sp.preds, sp.truths, sp.M, w.horizon, ds.channels);
}

void run_synth(const RunConfig& cfg, bool verbose) {
  if (cfg.source != "synth")
    throw config_error("synth: dataset.source must be synth");
  ensure_dir(cfg.out_dir);
  SynthConfig sc = SynthConfig::preset(cfg.preset, cfg.length, cfg.seed);
  SynthDraw draw;
  SeriesDataset ds = synth_generate(sc, &draw);
  write_csv(ds, out_path(cfg, "data.csv"));

  std::ostringstream stats;
  stats << "preset = " << cfg.preset << "\n";
  stats << "length = " << sc.length << "\n";
  stats << "seed = " << sc.seed << "\n";
  stats << "omega1 = " << sc.omega1 << "\n";
  stats << "omega2 = " << sc.omega2 << "\n";
  stats << "sigma = " << sc.sigma << "\n";
  stats << "a1 = " << draw.a1 << "\n";
  stats << "a2 = " << draw.a2 << "\n";
  stats << "phi = " << draw.phi << "\n";
  write_text_file(out_path(cfg, "data_stats.txt"), stats.str());
  write_manifest(cfg, "synth");
  if (verbose)
    std::fprintf(stderr, "wrote %s (%lld rows)\n",
                 out_path(cfg, "data.csv").c_str(),
                 static_cast<long long>(ds.length));
}

TrainOutcome run_train(const RunConfig& cfg, bool verbose) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  SeriesDataset ds = cfg.build_dataset();
  ForecastModel model(cfg.model_for(ds.channels), cfg.seed);
  TrainResult tr = train(model, ds, cfg.window, cfg.train, verbose);

  save_checkpoint(out_path(cfg, "checkpoint.bin"), cfg, model, ds.channels);
  write_text_file(out_path(cfg, "history.csv"), history_csv(tr.history));
  write_manifest(cfg, "train");

  TrainOutcome out;
  out.best_valid_loss = tr.best_valid_loss;
  out.best_epoch = tr.best_epoch;
  out.epochs_run = static_cast<int>(tr.history.size());
  out.valid_metrics =
      eval_model(model, ds, cfg.window, Split::kValid, cfg.train.batch_size);
  if (verbose)
    std::fprintf(stderr, "best epoch %d valid_loss %.6f valid RSE %.4f R2 %.4f\n",
                 tr.best_epoch, tr.best_valid_loss, out.valid_metrics.rse,
                 out.valid_metrics.r2);
  return out;
}

MetricReport run_eval(const std::string& checkpoint_path, const RunConfig& cfg,
                      Split split, bool verbose) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  if (split == Split::kTrain)
    std::fprintf(stderr,
                 "warning: evaluating on the training split; metrics are "
                 "optimistic\n");
  SeriesDataset ds = cfg.build_dataset();
  Checkpoint ckpt = load_checkpoint(checkpoint_path);
  // The model comes from this config; the checkpoint only supplies weights,
  // so any architecture mismatch surfaces as a shape error here.
  ForecastModel model(cfg.model_for(ds.channels), cfg.seed);
  model.load_state_values(ckpt.state);

  MetricReport r = eval_model(model, ds, cfg.window, split, cfg.train.batch_size);
  std::ostringstream csv;
  csv << "backbone,samples,lookback,horizon,channels,rse,r2,skipped_zero_var\n"
      << backbone_kind_name(cfg.model.backbone) << "," << r.samples << ","
      << cfg.window.lookback << "," << r.horizon << "," << r.channels << ","
      << r.rse << "," << r.r2 << "," << r.skipped_zero_var << "\n";
  write_text_file(out_path(cfg, "metrics.csv"), csv.str());
  write_manifest(cfg, "eval");
  if (verbose)
    std::fprintf(stderr, "RSE %.6f R2 %.6f over %d windows\n", r.rse, r.r2,
                 r.samples);
  return r;
}

void run_forecast(const std::string& checkpoint_path, const RunConfig& cfg,
                  bool verbose) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  SeriesDataset ds = cfg.build_dataset();
  Checkpoint ckpt = load_checkpoint(checkpoint_path);
  ForecastModel model(cfg.model_for(ds.channels), cfg.seed);
  model.load_state_values(ckpt.state);

  const int T = cfg.window.lookback, L = cfg.window.horizon, C = ds.channels;
  if (ds.length < T) throw error("forecast: series shorter than lookback");
  std::vector<float> xs(static_cast<size_t>(T) * C);
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < C; ++c)
      xs[static_cast<size_t>(t) * C + c] = ds.at(ds.length - T + t, c);
  Tensor x = Tensor::from({1, T, C}, std::move(xs));
  Tensor pred = model.forward(x, /*training=*/false);
  std::vector<float> p = denormalize_channelwise(ds, pred.values(), L);

  std::ostringstream csv;
  csv << "step,channel,value\n";
  for (int l = 0; l < L; ++l)
    for (int c = 0; c < C; ++c)
      csv << l << "," << ds.channel_names[static_cast<size_t>(c)] << ","
          << p[static_cast<size_t>(l) * C + c] << "\n";
  write_text_file(out_path(cfg, "forecast.csv"), csv.str());
  write_manifest(cfg, "forecast");
  if (verbose)
    std::fprintf(stderr, "wrote %s (%d steps x %d channels)\n",
                 out_path(cfg, "forecast.csv").c_str(), L, C);
}

EnergyReport run_energy(const std::string& checkpoint_path,
                        const RunConfig& cfg, bool verbose) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  SeriesDataset ds = cfg.build_dataset();
  Checkpoint ckpt = load_checkpoint(checkpoint_path);
  ForecastModel model(cfg.model_for(ds.channels), cfg.seed);
  model.load_state_values(ckpt.state);

  RateRecorder rec;
  const std::vector<int64_t> starts = window_starts(ds, cfg.window, Split::kTest);
  for (size_t i = 0; i < starts.size();
       i += static_cast<size_t>(cfg.train.batch_size)) {
    const size_t n = std::min(static_cast<size_t>(cfg.train.batch_size),
                              starts.size() - i);
    std::vector<int64_t> chunk(starts.begin() + static_cast<long>(i),
                               starts.begin() + static_cast<long>(i + n));
    auto [x, y] = make_batch(ds, cfg.window, chunk);
    (void)y;
    model.forward(x, /*training=*/false, &rec);
  }

  std::vector<LayerCost> costs = model.layer_costs();
  for (LayerCost& l : costs)
    if (!l.is_float_layer) l.gamma = rec.rate(l.name);
  EnergyReport r = energy_from_costs(std::move(costs), cfg.model.ts);
  write_text_file(out_path(cfg, "energy.csv"), energy_report_csv(r));
  write_manifest(cfg, "energy");
  if (verbose) std::fputs(energy_report_table(r).c_str(), stderr);
  return r;
}

void run_inspect(const std::string& checkpoint_path, const RunConfig& cfg,
                 int64_t window_index, bool verbose) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  SeriesDataset ds = cfg.build_dataset();
  Checkpoint ckpt = load_checkpoint(checkpoint_path);
  ForecastModel model(cfg.model_for(ds.channels), cfg.seed);
  model.load_state_values(ckpt.state);

  const std::vector<int64_t> starts = window_starts(ds, cfg.window, Split::kTest);
  if (window_index < 0 || window_index >= static_cast<int64_t>(starts.size()))
    throw error("inspect: window index " + std::to_string(window_index) +
                " out of range [0, " + std::to_string(starts.size()) + ")");
  auto [x, y] =
      make_batch(ds, cfg.window, {starts[static_cast<size_t>(window_index)]});

  Tensor spikes = model.encoder().encode(x, /*training=*/false);  // (1,Ts,T,C)
  const int Ts = spikes.dim(1), T = spikes.dim(2), C = spikes.dim(3);
  std::ostringstream sc;
  sc << "t,sub_step,channel,spike\n";
  for (int t = 0; t < T; ++t)
    for (int s = 0; s < Ts; ++s)
      for (int c = 0; c < C; ++c)
        sc << t << "," << s << "," << ds.channel_names[static_cast<size_t>(c)]
           << ","
           << spikes.values()[(static_cast<size_t>(s) * T + t) * C + c] << "\n";
  write_text_file(out_path(cfg, "spikes.csv"), sc.str());

  Tensor pred = model.forward(x, /*training=*/false);
  const int L = cfg.window.horizon;
  std::vector<float> p = denormalize_channelwise(ds, pred.values(), L);
  std::vector<float> truth = denormalize_channelwise(ds, y.values(), L);
  std::ostringstream pc;
  pc << "step,channel,prediction,truth\n";
  for (int l = 0; l < L; ++l)
    for (int c = 0; c < C; ++c)
      pc << l << "," << ds.channel_names[static_cast<size_t>(c)] << ","
         << p[static_cast<size_t>(l) * C + c] << ","
         << truth[static_cast<size_t>(l) * C + c] << "\n";
  write_text_file(out_path(cfg, "prediction.csv"), pc.str());
  write_manifest(cfg, "inspect");
  if (verbose)
    std::fprintf(stderr, "wrote spikes.csv and prediction.csv for window %lld\n",
                 static_cast<long long>(window_index));
}

}  // namespace snnf
