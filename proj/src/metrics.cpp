// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/metrics.hpp"

#include <cmath>
#include <sstream>

#include "snnf/tensor.hpp"

namespace snnf {

namespace {

void check_dims(const std::vector<float>& p, const std::vector<float>& t, int M,
                int L, int C) {
  if (M < 1 || L < 1 || C < 1) throw error("metrics: bad dimensions");
  const size_t n = static_cast<size_t>(M) * L * C;
  if (p.size() != n || t.size() != n)
    throw error("metrics: preds/truths length mismatch");
}

}  // namespace

double rse(const std::vector<float>& preds, const std::vector<float>& truths,
           int M, int L, int C) {
  check_dims(preds, truths, M, L, C);
  double mean = 0.0;
  for (float v : truths) mean += v;
  mean /= static_cast<double>(truths.size());
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < truths.size(); ++i) {
    const double e = static_cast<double>(preds[i]) - truths[i];
    const double d = static_cast<double>(truths[i]) - mean;
    num += e * e;
    den += d * d;
  }
  if (den == 0.0) throw error("rse: constant ground truth (zero denominator)");
  return std::sqrt(num / den);
}

double r2(const std::vector<float>& preds, const std::vector<float>& truths,
          int M, int L, int C, int* skipped) {
  check_dims(preds, truths, M, L, C);
  // Across-sample mean of the truth at each (l,c) position.
  std::vector<double> pos_mean(static_cast<size_t>(L) * C, 0.0);
  for (int m = 0; m < M; ++m)
    for (int i = 0; i < L * C; ++i)
      pos_mean[static_cast<size_t>(i)] +=
          truths[static_cast<size_t>(m) * L * C + i];
  for (double& v : pos_mean) v /= static_cast<double>(M);

  // Coefficient of determination per (l,c) output over the M samples,
  // averaged uniformly across outputs. Outputs whose ground truth never
  // deviates from its mean carry no signal and are skipped (counted).
  double acc = 0.0;
  int64_t used = 0;
  int skip = 0;
  for (int i = 0; i < L * C; ++i) {
    double err = 0.0, var = 0.0;
    for (int m = 0; m < M; ++m) {
      const size_t idx = static_cast<size_t>(m) * L * C + i;
      const double e = static_cast<double>(preds[idx]) - truths[idx];
      const double d =
          static_cast<double>(truths[idx]) - pos_mean[static_cast<size_t>(i)];
      err += e * e;
      var += d * d;
    }
    if (var == 0.0) {
      ++skip;
      continue;
    }
    acc += 1.0 - err / var;
    ++used;
  }
  if (skipped) *skipped = skip;
  if (used == 0) throw error("r2: no positions with nonzero variance");
  return acc / static_cast<double>(used);
}

MetricReport evaluate_metrics(const std::vector<float>& preds,
                              const std::vector<float>& truths, int M, int L,
                              int C) {
  MetricReport r;
  r.samples = M;
  r.horizon = L;
  r.channels = C;
  r.rse = rse(preds, truths, M, L, C);
  r.r2 = r2(preds, truths, M, L, C, &r.skipped_zero_var);
  return r;
}

std::string metric_report_csv(const MetricReport& r, const std::string& backbone) {
  std::ostringstream os;
  os << "backbone,samples,horizon,channels,rse,r2,skipped_zero_var\n";
  os << backbone << "," << r.samples << "," << r.horizon << "," << r.channels
     << "," << r.rse << "," << r.r2 << "," << r.skipped_zero_var << "\n";
  return os.str();
}

}  // namespace snnf
