// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_METRICS_HPP_
#define SNNF_METRICS_HPP_

#include <string>
#include <vector>

namespace snnf {

struct MetricReport {
  double rse = 0.0;
  double r2 = 0.0;
  int samples = 0;   // M
  int horizon = 0;   // L
  int channels = 0;  // C
  int skipped_zero_var = 0;  // (c,l) positions dropped from R2
};

// preds/truths: flat (M,L,C) row-major.
// RSE = sqrt( sum_m ||pred_m - truth_m||^2 / sum_m ||truth_m - mean||^2 )
// with mean the global element mean of the truths. Errors on a constant
// ground truth (zero denominator).
double rse(const std::vector<float>& preds, const std::vector<float>& truths,
           int M, int L, int C);

// Coefficient of determination computed per (c,l) output across the M
// samples (baseline: the across-sample truth mean at that output), then
// averaged uniformly over outputs. Outputs with zero across-sample
// variance are skipped (counted in the report).
double r2(const std::vector<float>& preds, const std::vector<float>& truths,
          int M, int L, int C, int* skipped = nullptr);

MetricReport evaluate_metrics(const std::vector<float>& preds,
                              const std::vector<float>& truths, int M, int L,
                              int C);

std::string metric_report_csv(const MetricReport& r,
                              const std::string& backbone);

}  // namespace snnf

#endif  // SNNF_METRICS_HPP_
