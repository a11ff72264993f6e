// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/nn.hpp"

#include <cmath>

namespace snnf {

void Dense::init(int d_in, int d_out, std::mt19937& rng) {
  const float bound = 1.0f / std::sqrt(static_cast<float>(d_in));
  w = Tensor::uniform({d_in, d_out}, rng, -bound, bound, /*requires_grad=*/true);
  b = Tensor::uniform({d_out}, rng, -bound, bound, /*requires_grad=*/true);
}

void Dense::collect(const std::string& prefix, std::vector<NamedParam>& out) {
  out.push_back({prefix + ".w", w});
  out.push_back({prefix + ".b", b});
}

void BatchNorm::init(int features) {
  gamma = Tensor::full({features}, 1.0f, /*requires_grad=*/true);
  beta = Tensor::zeros({features}, /*requires_grad=*/true);
  run_mean.assign(static_cast<size_t>(features), 0.0f);
  run_var.assign(static_cast<size_t>(features), 1.0f);
}

Tensor BatchNorm::forward(const Tensor& x, bool training) {
  if (x.rank() != 2 || x.dim(1) != features())
    throw error("BatchNorm: expects (R," + std::to_string(features()) + ")");
  const int R = x.dim(0), F = x.dim(1);
  const float e = eps;
  if (training) {
    if (R < 2) throw error("BatchNorm: train mode needs a batch of >= 2");
    Tensor mu = mean_axis(x, 0);
    Tensor xc = sub_rowvec(x, mu);
    Tensor var = mean_axis(mul(xc, xc), 0);
    Tensor inv = custom_unary(
        var, [e](float v) { return 1.0f / std::sqrt(v + e); },
        [e](float v, float g) {
          return -0.5f * g / ((v + e) * std::sqrt(v + e));
        });
    Tensor xhat = mul_rowvec(xc, inv);
    // Running stats track the unbiased batch variance.
    const float unbias = static_cast<float>(R) / static_cast<float>(R - 1);
    for (int f = 0; f < F; ++f) {
      run_mean[static_cast<size_t>(f)] =
          (1.0f - momentum) * run_mean[static_cast<size_t>(f)] +
          momentum * mu.values()[static_cast<size_t>(f)];
      run_var[static_cast<size_t>(f)] =
          (1.0f - momentum) * run_var[static_cast<size_t>(f)] +
          momentum * unbias * var.values()[static_cast<size_t>(f)];
    }
    return add_rowvec(mul_rowvec(xhat, gamma), beta);
  }
  std::vector<float> inv_v(static_cast<size_t>(F));
  for (int f = 0; f < F; ++f)
    inv_v[static_cast<size_t>(f)] =
        1.0f / std::sqrt(run_var[static_cast<size_t>(f)] + e);
  Tensor xc = sub_rowvec(x, Tensor::from({F}, std::vector<float>(run_mean)));
  Tensor xhat = mul_rowvec(xc, Tensor::from({F}, std::move(inv_v)));
  return add_rowvec(mul_rowvec(xhat, gamma), beta);
}

void BatchNorm::collect(const std::string& prefix, std::vector<NamedParam>& out) {
  out.push_back({prefix + ".gamma", gamma});
  out.push_back({prefix + ".beta", beta});
}

void BatchNorm::collect_buffers(
    const std::string& prefix,
    std::vector<std::pair<std::string, std::vector<float>*>>& out) {
  out.push_back({prefix + ".run_mean", &run_mean});
  out.push_back({prefix + ".run_var", &run_var});
}

void BatchNormTT::init(int features, int steps) {
  per_step_.assign(static_cast<size_t>(steps), BatchNorm{});
  for (BatchNorm& bn : per_step_) bn.init(features);
}

void BatchNormTT::collect(const std::string& prefix,
                          std::vector<NamedParam>& out) {
  for (size_t i = 0; i < per_step_.size(); ++i)
    per_step_[i].collect(prefix + ".t" + std::to_string(i), out);
}

void BatchNormTT::collect_buffers(
    const std::string& prefix,
    std::vector<std::pair<std::string, std::vector<float>*>>& out) {
  for (size_t i = 0; i < per_step_.size(); ++i)
    per_step_[i].collect_buffers(prefix + ".t" + std::to_string(i), out);
}

}  // namespace snnf
