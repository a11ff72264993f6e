// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SNNF_ENERGY_HPP_
#define SNNF_ENERGY_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace snnf {

// 45nm process constants, picojoules per operation.
inline constexpr double kEnergyMacPj = 4.6;
inline constexpr double kEnergyAcPj = 0.9;

// Per-layer accounting for one sample. flops is the MAC-equivalent count
// of the ANN counterpart's single pass; spiking layers run ts times on
// binary inputs with firing rate gamma, so sops = ts * gamma * flops.
struct LayerCost {
  std::string name;
  int64_t flops = 0;
  double gamma = 0.0;     // input firing rate, in [0,1]
  double sops = 0.0;
  bool is_float_layer = false;
};

struct EnergyReport {
  std::vector<LayerCost> layers;
  int ts = 1;
  double snn_energy_pj = 0.0;
  double ann_energy_pj = 0.0;
  double reduction_pct = 0.0;  // 1 - snn/ann, as percent
};

// Fills sops and totals. Spiking layers are billed at E_AC * SOPs; float
// layers (first encoder map, decoder) at E_MAC * FLOPs. The float
// reference variant bills every layer at E_MAC * FLOPs.
EnergyReport energy_from_costs(std::vector<LayerCost> layers, int ts);

std::string energy_report_csv(const EnergyReport& r);
std::string energy_report_table(const EnergyReport& r);

}  // namespace snnf

#endif  // SNNF_ENERGY_HPP_
