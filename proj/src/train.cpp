// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace snnf {

void TrainConfig::validate() const {
  if (batch_size < 2) throw error("TrainConfig: batch_size must be >= 2 (BN)");
  if (!(lr > 0.0f)) throw error("TrainConfig: lr must be > 0");
  if (patience < 0) throw error("TrainConfig: patience must be >= 0");
  if (max_epochs < 1) throw error("TrainConfig: max_epochs must be >= 1");
}

Adam::Adam(std::vector<NamedParam> params, float lr, float beta1, float beta2,
           float eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const NamedParam& p : params_) {
    m_.emplace_back(p.tensor.values().size(), 0.0f);
    v_.emplace_back(p.tensor.values().size(), 0.0f);
  }
}

void Adam::step() {
  ++t_;
  const float bc1 = 1.0f - std::pow(beta1_, static_cast<float>(t_));
  const float bc2 = 1.0f - std::pow(beta2_, static_cast<float>(t_));
  for (size_t pi = 0; pi < params_.size(); ++pi) {
    Tensor& p = params_[pi].tensor;
    auto& vals = p.mutable_values();
    const std::vector<float>* g = p.has_grad() ? &p.grad() : nullptr;
    auto& m = m_[pi];
    auto& v = v_[pi];
    for (size_t i = 0; i < vals.size(); ++i) {
      const float gi = g ? (*g)[i] : 0.0f;
      m[i] = beta1_ * m[i] + (1.0f - beta1_) * gi;
      v[i] = beta2_ * v[i] + (1.0f - beta2_) * gi * gi;
      const float mhat = m[i] / bc1;
      const float vhat = v[i] / bc2;
      vals[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

void Adam::zero_grad() {
  for (NamedParam& p : params_) p.tensor.zero_grad();
}

void Adam::clip_global_norm(float max_norm) {
  if (max_norm <= 0.0f) return;
  double sq = 0.0;
  for (NamedParam& p : params_)
    if (p.tensor.has_grad())
      for (float g : p.tensor.grad()) sq += static_cast<double>(g) * g;
  const double norm = std::sqrt(sq);
  if (norm <= max_norm) return;
  const float scale = static_cast<float>(max_norm / norm);
  for (NamedParam& p : params_)
    if (p.tensor.has_grad()) {
      auto& g = const_cast<std::vector<float>&>(p.tensor.grad());
      for (float& v : g) v *= scale;
    }
}

Tensor mse_loss(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape())
    throw error("mse_loss: shape mismatch " + shape_str(pred.shape()) + " vs " +
                shape_str(target.shape()));
  Tensor d = sub(pred, target);
  return mean(mul(d, d));
}

TrainResult train(ForecastModel& model, const SeriesDataset& ds,
                  const WindowSpec& w, const TrainConfig& cfg, bool verbose) {
  cfg.validate();
  std::vector<int64_t> train_starts = window_starts(ds, w, Split::kTrain);
  std::vector<int64_t> valid_starts = window_starts(ds, w, Split::kValid);
  if (train_starts.empty() || valid_starts.empty())
    throw error("train: empty train or valid split");

  Adam opt(model.params(), cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps);
  std::mt19937 shuffle_rng(cfg.seed ^ 0x9e3779b9u);

  auto run_valid = [&]() {
    double acc = 0.0;
    int64_t count = 0;
    for (size_t i = 0; i < valid_starts.size(); i += static_cast<size_t>(cfg.batch_size)) {
      const size_t n = std::min(static_cast<size_t>(cfg.batch_size),
                                valid_starts.size() - i);
      std::vector<int64_t> chunk(valid_starts.begin() + static_cast<long>(i),
                                 valid_starts.begin() + static_cast<long>(i + n));
      auto [x, y] = make_batch(ds, w, chunk);
      Tensor pred = model.forward(x, /*training=*/false);
      acc += static_cast<double>(mse_loss(pred, y).item()) * static_cast<double>(n);
      count += static_cast<int64_t>(n);
    }
    return acc / static_cast<double>(count);
  };

  TrainResult res;
  std::map<std::string, std::vector<float>> best_state = model.state_values();
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::shuffle(train_starts.begin(), train_starts.end(), shuffle_rng);
    double train_acc = 0.0;
    int64_t batches = 0;
    // Last partial batch dropped: BN needs >= 2 and uniform batch shapes
    // keep the loss comparable across steps.
    for (size_t i = 0; i + static_cast<size_t>(cfg.batch_size) <= train_starts.size();
         i += static_cast<size_t>(cfg.batch_size)) {
      std::vector<int64_t> chunk(
          train_starts.begin() + static_cast<long>(i),
          train_starts.begin() + static_cast<long>(i + cfg.batch_size));
      auto [x, y] = make_batch(ds, w, chunk);
      Tensor pred = model.forward(x, /*training=*/true);
      Tensor loss = mse_loss(pred, y);
      const float lv = loss.item();
      if (!std::isfinite(lv))
        throw error("train: loss diverged (non-finite) at epoch " +
                    std::to_string(epoch) + ", batch " + std::to_string(batches));
      backward(loss);
      opt.clip_global_norm(cfg.clip_norm);
      opt.step();
      opt.zero_grad();
      train_acc += lv;
      ++batches;
    }
    if (batches == 0)
      throw error("train: fewer training windows than one batch (" +
                  std::to_string(train_starts.size()) + " < " +
                  std::to_string(cfg.batch_size) + ")");
    const double valid_loss = run_valid();
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.history.push_back(
        {epoch, train_acc / static_cast<double>(batches), valid_loss, wall});
    if (verbose)
      std::fprintf(stderr, "epoch %d train %.6f valid %.6f (%.1fs)\n", epoch,
                   train_acc / static_cast<double>(batches), valid_loss, wall);

    if (valid_loss < best) {
      best = valid_loss;
      res.best_epoch = epoch;
      best_state = model.state_values();
      since_best = 0;
    } else {
      ++since_best;
      if (since_best > cfg.patience) {
        res.stopped_early = true;
        break;
      }
    }
  }
  res.best_valid_loss = best;
  model.load_state_values(best_state);
  return res;
}

std::string history_csv(const std::vector<EpochStats>& history) {
  std::ostringstream os;
  os << "epoch,train_loss,valid_loss,wall_seconds\n";
  for (const EpochStats& e : history)
    os << e.epoch << "," << e.train_loss << "," << e.valid_loss << ","
       << e.wall_seconds << "\n";
  return os.str();
}

}  // namespace snnf
