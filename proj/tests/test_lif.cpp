// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "snnf/lif.hpp"

using namespace snnf;

namespace {
constexpr float kPi = std::numbers::pi_v<float>;
}

TEST_CASE("config validation") {
  LifConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.beta = 0.0f;
  CHECK_THROWS_AS(cfg.validate(), error);
  cfg.beta = 1.0f;
  CHECK_NOTHROW(cfg.validate());
  cfg.u_thr = cfg.v_reset;
  CHECK_THROWS_AS(cfg.validate(), error);
  cfg = LifConfig{};
  cfg.alpha = 0.0f;
  CHECK_THROWS_AS(cfg.validate(), error);
}

TEST_CASE("single-step scalar traces") {
  LifConfig cfg;  // u_thr=1, beta=0.99, v_reset=0
  // threshold crossing: i=1.2 -> U=1.2, S=1, H'=0
  {
    LifState st = make_lif_state({1}, cfg);
    Tensor s = lif_step(Tensor::from({1}, {1.2f}), st, cfg);
    CHECK(s.values()[0] == 1.0f);
    CHECK(std::abs(st.h.values()[0] - 0.0f) < 1e-6f);
  }
  // sub-threshold: i=0.5 -> U=0.5, S=0, H'=0.495
  {
    LifState st = make_lif_state({1}, cfg);
    Tensor s = lif_step(Tensor::from({1}, {0.5f}), st, cfg);
    CHECK(s.values()[0] == 0.0f);
    CHECK(std::abs(st.h.values()[0] - 0.495f) < 1e-6f);
  }
  // tie at exactly u_thr spikes
  {
    LifState st = make_lif_state({1}, cfg);
    Tensor s = lif_step(Tensor::from({1}, {1.0f}), st, cfg);
    CHECK(s.values()[0] == 1.0f);
  }
}

TEST_CASE("two-step accumulation trace") {
  LifConfig cfg;
  LifState st = make_lif_state({1}, cfg);
  Tensor i = Tensor::from({1}, {0.6f});
  Tensor s1 = lif_step(i, st, cfg);
  CHECK(s1.values()[0] == 0.0f);
  CHECK(std::abs(st.h.values()[0] - 0.594f) < 1e-6f);  // 0.99 * 0.6
  Tensor s2 = lif_step(i, st, cfg);
  // U = 0.594 + 0.6 = 1.194 >= 1 -> spike, reset
  CHECK(s2.values()[0] == 1.0f);
  CHECK(std::abs(st.h.values()[0] - 0.0f) < 1e-6f);
}

TEST_CASE("post-spike stored H equals v_reset") {
  LifConfig cfg;
  cfg.v_reset = 0.25f;
  cfg.u_thr = 1.0f;
  std::mt19937 rng(3);
  LifState st = make_lif_state({64}, cfg);
  for (int step = 0; step < 20; ++step) {
    Tensor i = Tensor::uniform({64}, rng, -1.0f, 2.0f);
    Tensor s = lif_step(i, st, cfg);
    for (int n = 0; n < 64; ++n)
      if (s.values()[static_cast<size_t>(n)] == 1.0f)
        CHECK(st.h.values()[static_cast<size_t>(n)] ==
              doctest::Approx(cfg.v_reset).epsilon(1e-6));
  }
}

TEST_CASE("decay semantics: S=0 implies H' = beta * U") {
  LifConfig cfg;
  LifState st = make_lif_state({1}, cfg);
  lif_step(Tensor::from({1}, {0.3f}), st, cfg);
  const float h1 = st.h.values()[0];
  CHECK(h1 == doctest::Approx(0.99f * 0.3f).epsilon(1e-6));
  lif_step(Tensor::from({1}, {0.2f}), st, cfg);
  CHECK(st.h.values()[0] == doctest::Approx(0.99f * (h1 + 0.2f)).epsilon(1e-6));
}

TEST_CASE("surrogate gradient values") {
  // u=0, alpha=2 -> exactly (alpha/2) = 1.0
  CHECK(surrogate_grad(0.0f, 2.0f) == 1.0f);
  // u=1, alpha=2 -> 1/(1+pi^2)
  CHECK(std::abs(surrogate_grad(1.0f, 2.0f) - 1.0f / (1.0f + kPi * kPi)) <
        1e-6f);
  std::mt19937 rng(11);
  std::uniform_real_distribution<float> dist(-4.0f, 4.0f);
  for (int i = 0; i < 100; ++i) {
    const float u = dist(rng);
    const float alpha = 2.0f;
    const float expect =
        (alpha / 2.0f) / (1.0f + std::pow((kPi / 2.0f) * alpha * u, 2.0f));
    CHECK(std::abs(surrogate_grad(u, alpha) - expect) < 1e-6f);
    CHECK(surrogate_grad(u, alpha) == surrogate_grad(-u, alpha));  // even
  }
}

TEST_CASE("spike backward equals the surrogate at (U - u_thr)") {
  std::mt19937 rng(5);
  Tensor u = Tensor::uniform({100}, rng, -2.0f, 2.0f, /*requires_grad=*/true);
  Tensor s = spike(u, 1.0f, 2.0f, /*center_at_threshold=*/true);
  backward(sum(s));
  for (int i = 0; i < 100; ++i)
    CHECK(std::abs(u.grad()[static_cast<size_t>(i)] -
                   surrogate_grad(u.values()[static_cast<size_t>(i)] - 1.0f,
                                  2.0f)) < 1e-6f);
}

TEST_CASE("sn_layer unrolls the scalar oracle") {
  LifConfig cfg;
  const int T = 10;
  const float c = 0.4f;
  Tensor currents = Tensor::full({T, 1}, c);
  LifState st = make_lif_state({1}, cfg);
  Tensor out = sn_layer(currents, cfg, st);
  CHECK(out.shape() == Shape{T, 1});
  // scalar reference
  float h = 0.0f;
  for (int t = 0; t < T; ++t) {
    const float u = h + c;
    const float s = u >= cfg.u_thr ? 1.0f : 0.0f;
    h = s == 1.0f ? cfg.v_reset : cfg.beta * u;
    CHECK(out.values()[static_cast<size_t>(t)] == s);
  }
}

TEST_CASE("sn_layer binarity and zero-input behavior") {
  LifConfig cfg;
  LifState st = make_lif_state({4}, cfg);
  Tensor zeros = Tensor::zeros({5, 4});
  Tensor out = sn_layer(zeros, cfg, st);
  for (float v : out.values()) CHECK(v == 0.0f);
  for (float v : st.h.values()) CHECK(v == 0.0f);

  std::mt19937 rng(21);
  LifState st2 = make_lif_state({8}, cfg);
  Tensor r = Tensor::uniform({6, 8}, rng, -2.0f, 2.0f);
  Tensor spikes = sn_layer(r, cfg, st2);
  for (float v : spikes.values()) CHECK((v == 0.0f || v == 1.0f));
}

TEST_CASE("reset_state semantics") {
  LifConfig cfg;
  cfg.v_reset = 0.5f;
  cfg.u_thr = 2.0f;
  LifState st = make_lif_state({3}, cfg);
  lif_step(Tensor::from({3}, {0.9f, 0.2f, 0.4f}), st, cfg);
  reset_state(st, cfg);
  for (float v : st.h.values()) CHECK(v == 0.5f);
  CHECK(st.step_count == 0);
  reset_state(st, cfg);  // idempotent
  for (float v : st.h.values()) CHECK(v == 0.5f);
}

TEST_CASE("gradients flow through time") {
  // Two chained steps: the input of step 1 influences the spike of step 2
  // through the carried membrane, so BPTT must reach it.
  LifConfig cfg;
  Tensor i1 = Tensor::from({1}, {0.6f}, true);
  Tensor i2 = Tensor::from({1}, {0.6f}, true);
  LifState st = make_lif_state({1}, cfg);
  Tensor s1 = lif_step(i1, st, cfg);
  Tensor s2 = lif_step(i2, st, cfg);
  backward(sum(add(s1, s2)));
  CHECK(i1.has_grad());
  CHECK(i1.grad()[0] != 0.0f);
  CHECK(i2.grad()[0] != 0.0f);
}

TEST_CASE("alignment config validation") {
  AlignmentConfig a;
  a.ts = 4;
  a.series_len = 10;
  a.channels = 2;
  CHECK_NOTHROW(a.validate());
  a.ts = 0;
  CHECK_THROWS_AS(a.validate(), error);
}
