// Copyright 2026 The snnf authors
// SPDX-License-Identifier: Apache-2.0

#include "snnf/energy.hpp"

#include <iomanip>
#include <sstream>

#include "snnf/tensor.hpp"

namespace snnf {

EnergyReport energy_from_costs(std::vector<LayerCost> layers, int ts) {
  if (ts < 1) throw error("energy_from_costs: ts must be >= 1");
  EnergyReport r;
  r.ts = ts;
  for (LayerCost& l : layers) {
    if (l.gamma < 0.0 || l.gamma > 1.0)
      throw error("energy_from_costs: gamma out of [0,1] for layer " + l.name);
    if (l.is_float_layer) {
      l.sops = 0.0;
      r.snn_energy_pj += kEnergyMacPj * static_cast<double>(l.flops);
    } else {
      l.sops = static_cast<double>(ts) * l.gamma * static_cast<double>(l.flops);
      r.snn_energy_pj += kEnergyAcPj * l.sops;
    }
    r.ann_energy_pj += kEnergyMacPj * static_cast<double>(l.flops);
  }
  r.layers = std::move(layers);
  r.reduction_pct =
      r.ann_energy_pj > 0.0
          ? 100.0 * (1.0 - r.snn_energy_pj / r.ann_energy_pj)
          : 0.0;
  return r;
}

std::string energy_report_csv(const EnergyReport& r) {
  std::ostringstream os;
  os << "layer,flops,gamma,sops,energy_pj,is_float\n";
  for (const LayerCost& l : r.layers) {
    const double e = l.is_float_layer
                         ? kEnergyMacPj * static_cast<double>(l.flops)
                         : kEnergyAcPj * l.sops;
    os << l.name << "," << l.flops << "," << l.gamma << "," << l.sops << ","
       << e << "," << (l.is_float_layer ? 1 : 0) << "\n";
  }
  os << "total_snn_pj,,,," << r.snn_energy_pj << ",\n";
  os << "total_ann_pj,,,," << r.ann_energy_pj << ",\n";
  os << "reduction_pct,,,," << r.reduction_pct << ",\n";
  return os.str();
}

std::string energy_report_table(const EnergyReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(24) << "layer" << std::right << std::setw(14)
     << "FLOPs" << std::setw(10) << "gamma" << std::setw(16) << "SOPs"
     << std::setw(14) << "pJ" << "\n";
  for (const LayerCost& l : r.layers) {
    const double e = l.is_float_layer
                         ? kEnergyMacPj * static_cast<double>(l.flops)
                         : kEnergyAcPj * l.sops;
    os << std::left << std::setw(24) << l.name << std::right << std::setw(14)
       << l.flops << std::setw(10) << std::fixed << std::setprecision(4)
       << l.gamma << std::setw(16) << std::setprecision(1) << l.sops
       << std::setw(14) << std::setprecision(1) << e;
    os << (l.is_float_layer ? "  (MAC)" : "  (AC)") << "\n";
    os.unsetf(std::ios::fixed);
  }
  os << "spiking total: " << r.snn_energy_pj / 1e6 << " uJ, float reference: "
     << r.ann_energy_pj / 1e6 << " uJ, reduction: " << r.reduction_pct << "%\n";
  return os.str();
}

}  // namespace snnf
