#include "tavdc/embedding.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "tavdc/error.hpp"

namespace tavdc {

const char* to_string(Algorithm algo) {
  return algo == Algorithm::temperature_aware ? "temperature_aware" : "load_balanced";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "temperature_aware" || name == "ta") return Algorithm::temperature_aware;
  if (name == "load_balanced" || name == "lb") return Algorithm::load_balanced;
  throw ConfigError("unknown algorithm '" + name + "'");
}

const char* to_string(EmbedFailure failure) {
  switch (failure) {
    case EmbedFailure::none: return "none";
    case EmbedFailure::vm_mapping: return "vm_mapping";
    case EmbedFailure::link_mapping: return "link_mapping";
    case EmbedFailure::injected: return "injected";
  }
  return "?";
}

Transaction::Transaction(DataCenterState& state, long fail_at_reservation)
    : state_(state), fail_at_(fail_at_reservation) {}

Transaction::~Transaction() {
  if (!committed_) rollback();
}

bool Transaction::tick() {
  if (fail_at_ >= 0 && counter_ == fail_at_) {
    fault_injected_ = true;
    return false;
  }
  ++counter_;
  return true;
}

bool Transaction::reserve_server(NodeId server, const ResourceVector& amount) {
  if (!tick()) return false;
  state_.reserve_server(server, amount);
  ops_.push_back({false, server, amount, 0});
  return true;
}

bool Transaction::reserve_path(const Path& path, Mbps amount) {
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto link = state_.link_between(path[i - 1], path[i]);
    if (!link) throw StateError("reserve_path: nodes " + std::to_string(path[i - 1]) + " and " +
                                std::to_string(path[i]) + " are not adjacent");
    if (!tick()) return false;
    state_.reserve_link(*link, amount);
    ops_.push_back({true, *link, {}, amount});
  }
  return true;
}

void Transaction::rollback() {
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    if (it->is_link) {
      state_.release_link(it->target, it->mbps);
    } else {
      state_.release_server(it->target, it->amount);
    }
  }
  ops_.clear();
}

namespace {

std::vector<std::size_t> vm_order(const VdcRequest& vdc) {
  std::vector<std::size_t> order(vdc.vms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&vdc](std::size_t a, std::size_t b) {
    return vdc.vms[a].demand.cpu > vdc.vms[b].demand.cpu;
  });
  return order;
}

const PhysicalLink& access_link(const DataCenterState& state, NodeId server) {
  return state.link(state.neighbors(server).front().link);
}

}  // namespace

bool server_eligible(const DataCenterState& state, NodeId server, const VdcRequest& vdc, const VmDemand& vm,
                     const std::vector<NodeId>& taken) {
  const auto& s = state.server(server);
  if (!vm.demand.fits_in(s.residual)) return false;
  if (access_link(state, server).residual < vdc.incident_bandwidth(vm.id)) return false;
  return std::find(taken.begin(), taken.end(), server) == taken.end();
}

std::optional<std::vector<VmPlacement>> map_vms_temperature_aware(Transaction& tx, const VdcRequest& vdc,
                                                                  const ThermalModel& model) {
  const DataCenterState& state = tx.state();
  std::vector<VmPlacement> placements;
  std::vector<NodeId> taken;
  std::vector<std::pair<double, RackId>> racks;
  std::vector<NodeId> servers;
  // A placement only changes the outlet of the rack that received it.
  std::vector<double> outlet;
  for (const auto& rack : state.racks()) outlet.push_back(rack_outlet_temperature(rack, state, model));

  for (std::size_t idx : vm_order(vdc)) {
    const VmDemand& vm = vdc.vms[idx];

    racks.clear();
    for (const auto& rack : state.racks()) racks.emplace_back(outlet[static_cast<std::size_t>(rack.id)], rack.id);
    std::sort(racks.begin(), racks.end());

    NodeId chosen = -1;
    for (const auto& entry : racks) {
      const auto& rack = state.rack(entry.second);
      servers.assign(rack.servers.begin(), rack.servers.end());
      std::stable_sort(servers.begin(), servers.end(), [&state](NodeId a, NodeId b) {
        return state.server(a).residual.cpu < state.server(b).residual.cpu;
      });
      for (NodeId s : servers) {
        if (server_eligible(state, s, vdc, vm, taken)) {
          chosen = s;
          break;
        }
      }
      if (chosen >= 0) break;
    }
    if (chosen < 0) return std::nullopt;
    if (!tx.reserve_server(chosen, vm.demand)) return std::nullopt;
    const RackId r = state.server(chosen).rack;
    outlet[static_cast<std::size_t>(r)] = rack_outlet_temperature(state.rack(r), state, model);
    taken.push_back(chosen);
    placements.push_back({vm.id, chosen, vm.demand});
  }
  return placements;
}

std::optional<std::vector<VmPlacement>> map_vms_least_load(Transaction& tx, const VdcRequest& vdc) {
  const DataCenterState& state = tx.state();
  std::vector<VmPlacement> placements;
  std::vector<NodeId> taken;

  for (std::size_t idx : vm_order(vdc)) {
    const VmDemand& vm = vdc.vms[idx];
    NodeId chosen = -1;
    std::int64_t best_load = 0;
    for (const auto& s : state.servers()) {
      if (chosen >= 0 && s.allocated_cpu() >= best_load) continue;
      if (!server_eligible(state, s.id, vdc, vm, taken)) continue;
      chosen = s.id;
      best_load = s.allocated_cpu();
    }
    if (chosen < 0) return std::nullopt;
    if (!tx.reserve_server(chosen, vm.demand)) return std::nullopt;
    taken.push_back(chosen);
    placements.push_back({vm.id, chosen, vm.demand});
  }
  return placements;
}

namespace {

EmbedResult embed_impl(DataCenterState& state, const VdcRequest& vdc, Algorithm algo, const ThermalModel& model,
                       const EmbedOptions& options) {
  if (state.find_embedding(vdc.id) != nullptr) {
    throw StateError("VDC " + std::to_string(vdc.id) + " is already embedded");
  }
  Transaction tx(state, options.fail_at_reservation);
  auto failed = [&tx](EmbedFailure stage) {
    tx.rollback();
    return EmbedResult{std::nullopt, tx.fault_injected() ? EmbedFailure::injected : stage};
  };

  auto placements = algo == Algorithm::temperature_aware ? map_vms_temperature_aware(tx, vdc, model)
                                                         : map_vms_least_load(tx, vdc);
  if (!placements) return failed(EmbedFailure::vm_mapping);

  Embedding embedding;
  embedding.vdc_id = vdc.id;
  embedding.placements = std::move(*placements);

  std::vector<std::size_t> order(vdc.vlinks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&vdc](std::size_t a, std::size_t b) {
    return vdc.vlinks[a].bandwidth > vdc.vlinks[b].bandwidth;
  });

  for (std::size_t idx : order) {
    const VirtualLink& vl = vdc.vlinks[idx];
    const NodeId src = embedding.host_of(vl.s);
    const NodeId dst = embedding.host_of(vl.d);
    auto path = algo == Algorithm::temperature_aware ? find_path(state, src, dst, vl.bandwidth)
                                                     : find_widest_path(state, src, dst, vl.bandwidth);
    if (!path) return failed(EmbedFailure::link_mapping);
    if (!tx.reserve_path(*path, vl.bandwidth)) return failed(EmbedFailure::link_mapping);
    embedding.paths.push_back({vl, std::move(*path), vl.bandwidth});
  }

  state.commit_embedding(embedding);
  tx.commit();
  return EmbedResult{std::move(embedding), EmbedFailure::none};
}

}  // namespace

EmbedResult embed_temperature_aware(DataCenterState& state, const VdcRequest& vdc, const ThermalModel& model,
                                    const EmbedOptions& options) {
  return embed_impl(state, vdc, Algorithm::temperature_aware, model, options);
}

EmbedResult embed_load_balanced(DataCenterState& state, const VdcRequest& vdc, const EmbedOptions& options) {
  return embed_impl(state, vdc, Algorithm::load_balanced, ThermalModel{}, options);
}

EmbedResult embed(DataCenterState& state, const VdcRequest& vdc, Algorithm algo, const ThermalModel& model,
                  const EmbedOptions& options) {
  return embed_impl(state, vdc, algo, model, options);
}

void release_vdc(DataCenterState& state, const Embedding& embedding) {
  const Embedding* registered = state.find_embedding(embedding.vdc_id);
  if (registered == nullptr) {
    throw StateError("release_vdc: VDC " + std::to_string(embedding.vdc_id) + " is not embedded");
  }
  if (!(*registered == embedding)) {
    throw StateError("release_vdc: embedding does not match the one registered for VDC " +
                     std::to_string(embedding.vdc_id));
  }
  release_vdc(state, embedding.vdc_id);
}

void release_vdc(DataCenterState& state, VdcId vdc_id) {
  auto embedding = state.take_embedding(vdc_id);
  if (!embedding) throw StateError("release_vdc: VDC " + std::to_string(vdc_id) + " is not embedded");
  for (auto it = embedding->paths.rbegin(); it != embedding->paths.rend(); ++it) {
    for (std::size_t i = it->nodes.size(); i-- > 1;) {
      state.release_link(*state.link_between(it->nodes[i - 1], it->nodes[i]), it->bandwidth);
    }
  }
  for (auto it = embedding->placements.rbegin(); it != embedding->placements.rend(); ++it) {
    state.release_server(it->server, it->demand);
  }
}

std::vector<std::string> verify_embedding(const DataCenterState& state, const VdcRequest& vdc,
                                          const Embedding& embedding) {
  std::vector<std::string> issues;
  const std::string tag = "VDC " + std::to_string(vdc.id) + ": ";
  if (embedding.vdc_id != vdc.id) issues.push_back(tag + "embedding belongs to another VDC");

  std::set<NodeId> hosts;
  for (const auto& vm : vdc.vms) {
    const auto count = std::count_if(embedding.placements.begin(), embedding.placements.end(),
                                     [&vm](const VmPlacement& p) { return p.vm == vm.id; });
    if (count != 1) issues.push_back(tag + "VM " + std::to_string(vm.id) + " placed " + std::to_string(count) + " times");
  }
  for (const auto& p : embedding.placements) {
    if (!state.is_server(p.server)) {
      issues.push_back(tag + "VM " + std::to_string(p.vm) + " placed on non-server node");
      continue;
    }
    if (!hosts.insert(p.server).second) {
      issues.push_back(tag + "two VMs share server " + std::to_string(p.server));
    }
    const int idx = vdc.vm_index(p.vm);
    if (idx < 0 || !(vdc.vms[static_cast<std::size_t>(idx)].demand == p.demand)) {
      issues.push_back(tag + "placement demand of VM " + std::to_string(p.vm) + " does not match request");
    }
  }

  for (const auto& vl : vdc.vlinks) {
    const auto it = std::find_if(embedding.paths.begin(), embedding.paths.end(),
                                 [&vl](const LinkPath& lp) { return lp.vlink == vl; });
    const std::string ltag = tag + "vlink " + std::to_string(vl.s) + "-" + std::to_string(vl.d) + ": ";
    if (it == embedding.paths.end()) {
      issues.push_back(ltag + "no path");
      continue;
    }
    const auto& nodes = it->nodes;
    if (it->bandwidth != vl.bandwidth) issues.push_back(ltag + "reserved bandwidth differs from demand");
    if (nodes.size() < 2) {
      issues.push_back(ltag + "path too short");
      continue;
    }
    if (nodes.front() != embedding.host_of(vl.s) || nodes.back() != embedding.host_of(vl.d)) {
      issues.push_back(ltag + "path endpoints are not the hosts of the vlink endpoints");
    }
    std::set<NodeId> seen;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!seen.insert(nodes[i]).second) issues.push_back(ltag + "path revisits a node");
      if (i > 0 && !state.link_between(nodes[i - 1], nodes[i])) issues.push_back(ltag + "consecutive nodes not adjacent");
      if (i > 0 && i + 1 < nodes.size() && state.is_server(nodes[i])) issues.push_back(ltag + "path transits a server");
    }
  }
  if (embedding.paths.size() != vdc.vlinks.size()) issues.push_back(tag + "path count differs from vlink count");
  return issues;
}

}  // namespace tavdc
