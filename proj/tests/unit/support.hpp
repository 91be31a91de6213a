#pragma once

#include <cstdint>
#include <vector>

#include "tavdc/model.hpp"
#include "tavdc/topology.hpp"
#include "tavdc/workload.hpp"

namespace tavdc::test {

inline TopologyConfig tiny_topology(int racks = 2, int servers_per_rack = 3) {
  TopologyConfig cfg;
  cfg.name = "tiny";
  cfg.racks = racks;
  cfg.n_tor = racks;
  cfg.servers_per_rack = servers_per_rack;
  cfg.n_agg = 2;
  cfg.n_core = 2;
  return cfg;
}

inline DataCenterState fixed_inlets(const TopologyConfig& cfg, std::vector<double> inlets) {
  Rng rng(1);
  auto state = build_vl2(cfg, rng);
  for (std::size_t r = 0; r < inlets.size(); ++r) state.set_inlet_temperature(static_cast<RackId>(r), inlets[r]);
  return state;
}

// VMs 0..n-1 with the given CPU demands, chained 0-1-2-... with `bw` each.
inline VdcRequest chain_vdc(VdcId id, std::vector<std::int64_t> cpu, Mbps bw) {
  VdcRequest v;
  v.id = id;
  for (std::size_t i = 0; i < cpu.size(); ++i) v.vms.push_back({static_cast<VmId>(i), {cpu[i], 10, 100}});
  for (std::size_t i = 1; i < cpu.size(); ++i) {
    v.vlinks.push_back({static_cast<VmId>(i - 1), static_cast<VmId>(i), bw});
  }
  return v;
}

}  // namespace tavdc::test
