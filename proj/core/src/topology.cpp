#include "tavdc/topology.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "tavdc/error.hpp"

namespace tavdc {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::server: return "server";
    case NodeKind::tor: return "tor";
    case NodeKind::aggregation: return "aggregation";
    case NodeKind::core: return "core";
  }
  return "?";
}

const char* to_string(LinkMedium medium) {
  return medium == LinkMedium::electronic ? "electronic" : "optical";
}

TopologyConfig TopologyConfig::case_a() { return TopologyConfig{}; }

TopologyConfig TopologyConfig::case_b() {
  TopologyConfig cfg;
  cfg.name = "caseB";
  cfg.racks = 40;
  cfg.servers_per_rack = 10;
  cfg.n_tor = 40;
  cfg.n_agg = 20;
  cfg.n_core = 10;
  return cfg;
}

void TopologyConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("topology: " + msg); };
  if (racks <= 0) fail("racks must be positive");
  if (servers_per_rack <= 0) fail("servers_per_rack must be positive");
  if (n_tor != racks) fail("n_tor must equal racks (one ToR per rack)");
  if (n_agg <= 0) fail("n_agg must be positive");
  if (n_core <= 0) fail("n_core must be positive");
  if (n_agg > 2 * n_tor) fail("n_agg exceeds 2 * n_tor; some aggregation switch would have no ToR");
  if (access_rate_mbps <= 0 || trunk_rate_mbps <= 0) fail("link rates must be positive");
  if (server_capacity.cpu <= 0) fail("cpu capacity must be positive");
  if (!server_capacity.non_negative()) fail("capacities must be non-negative");
  if (!(inlet_min_c <= inlet_max_c)) fail("inlet_min_c must not exceed inlet_max_c");
}

std::optional<RackId> DataCenterState::rack_of(NodeId n) const {
  if (is_server(n)) return servers_[static_cast<std::size_t>(n)].rack;
  return switch_node(n).rack;
}

const ServerState& DataCenterState::server(NodeId n) const {
  if (!is_server(n)) throw StateError("node " + std::to_string(n) + " is not a server");
  return servers_[static_cast<std::size_t>(n)];
}

const SwitchState& DataCenterState::switch_node(NodeId n) const {
  if (!is_node(n) || is_server(n)) throw StateError("node " + std::to_string(n) + " is not a switch");
  return switches_[static_cast<std::size_t>(n) - servers_.size()];
}

SwitchState& DataCenterState::mutable_switch(NodeId n) {
  return switches_[static_cast<std::size_t>(n) - servers_.size()];
}

std::span<const Adjacency> DataCenterState::neighbors(NodeId n) const {
  return adjacency_.at(static_cast<std::size_t>(n));
}

std::optional<LinkId> DataCenterState::link_between(NodeId a, NodeId b) const {
  if (!is_node(a) || !is_node(b)) return std::nullopt;
  const auto& adj = adjacency_[static_cast<std::size_t>(a)];
  auto it = std::lower_bound(adj.begin(), adj.end(), b,
                             [](const Adjacency& x, NodeId v) { return x.neighbor < v; });
  if (it == adj.end() || it->neighbor != b) return std::nullopt;
  return it->link;
}

Mbps DataCenterState::max_link_capacity() const {
  Mbps m = 0;
  for (const auto& l : links_) m = std::max(m, l.capacity);
  return m;
}

double DataCenterState::max_inlet_c() const {
  double m = -1e300;
  for (const auto& r : racks_) m = std::max(m, r.inlet_c);
  return m;
}

NodeId DataCenterState::add_node(NodeKind kind) {
  node_kind_.push_back(kind);
  adjacency_.emplace_back();
  return static_cast<NodeId>(node_kind_.size() - 1);
}

void DataCenterState::add_link(NodeId a, NodeId b, Mbps capacity) {
  const auto id = static_cast<LinkId>(links_.size());
  cost_scale_ = std::lcm(cost_scale_, capacity);
  if (cost_scale_ > (std::int64_t{1} << 40)) throw ConfigError("link capacities have no usable common cost scale");
  cost_unit_.push_back(0);
  const bool electronic = is_server(a) != is_server(b);
  links_.push_back(PhysicalLink{a, b, capacity, capacity,
                                electronic ? LinkMedium::electronic : LinkMedium::optical, false});
  for (std::size_t l = 0; l < links_.size(); ++l) cost_unit_[l] = cost_scale_ / links_[l].capacity;
  adjacency_[static_cast<std::size_t>(a)].push_back({b, id});
  adjacency_[static_cast<std::size_t>(b)].push_back({a, id});
  for (NodeId end : {a, b}) {
    if (is_server(end)) continue;
    auto& sw = mutable_switch(end);
    if (is_server(end == a ? b : a)) {
      ++sw.server_degree;
    } else {
      ++sw.switch_degree;
    }
  }
}

void DataCenterState::set_link_used(LinkId l, bool used) {
  auto& link = links_[static_cast<std::size_t>(l)];
  if (link.used == used) return;
  link.used = used;
  const int delta = used ? 1 : -1;
  for (NodeId end : {link.a, link.b}) {
    if (is_server(end)) continue;
    auto& sw = mutable_switch(end);
    if (link.medium == LinkMedium::electronic) {
      sw.used_electronic_ports += delta;
    } else {
      sw.used_optical_ports += delta;
    }
    sw.active = sw.used_electronic_ports + sw.used_optical_ports > 0;
  }
}

void DataCenterState::reserve_server(NodeId n, const ResourceVector& amount) {
  if (!is_server(n)) throw StateError("reserve_server: node " + std::to_string(n) + " is not a server");
  if (!amount.non_negative()) throw StateError("reserve_server: negative amount");
  auto& s = servers_[static_cast<std::size_t>(n)];
  if (!amount.fits_in(s.residual)) {
    throw StateError("reserve_server: demand exceeds residual on server " + std::to_string(n));
  }
  s.residual -= amount;
  ++s.hosted_vms;
  s.active = true;
}

void DataCenterState::release_server(NodeId n, const ResourceVector& amount) {
  if (!is_server(n)) throw StateError("release_server: node " + std::to_string(n) + " is not a server");
  auto& s = servers_[static_cast<std::size_t>(n)];
  if (s.hosted_vms == 0 || !amount.non_negative() || !(s.residual + amount).fits_in(s.capacity)) {
    throw StateError("release_server: amount exceeds reservation on server " + std::to_string(n));
  }
  s.residual += amount;
  --s.hosted_vms;
  s.active = s.hosted_vms > 0;
}

void DataCenterState::reserve_link(LinkId l, Mbps amount) {
  if (l < 0 || static_cast<std::size_t>(l) >= links_.size()) throw StateError("reserve_link: unknown link");
  auto& link = links_[static_cast<std::size_t>(l)];
  if (amount < 0 || amount > link.residual) {
    throw StateError("reserve_link: demand exceeds residual on link " + std::to_string(l));
  }
  link.residual -= amount;
  set_link_used(l, link.residual < link.capacity);
}

void DataCenterState::release_link(LinkId l, Mbps amount) {
  if (l < 0 || static_cast<std::size_t>(l) >= links_.size()) throw StateError("release_link: unknown link");
  auto& link = links_[static_cast<std::size_t>(l)];
  if (amount < 0 || amount > link.allocated()) {
    throw StateError("release_link: amount exceeds reservation on link " + std::to_string(l));
  }
  link.residual += amount;
  set_link_used(l, link.residual < link.capacity);
}

void DataCenterState::set_inlet_temperature(RackId r, double inlet_c) {
  racks_.at(static_cast<std::size_t>(r)).inlet_c = inlet_c;
}

void DataCenterState::set_server_capacity(NodeId n, const ResourceVector& capacity) {
  if (!is_server(n)) throw StateError("set_server_capacity: not a server");
  auto& s = servers_[static_cast<std::size_t>(n)];
  if (s.hosted_vms != 0) throw StateError("set_server_capacity: server has reservations");
  if (!capacity.non_negative()) throw StateError("set_server_capacity: negative capacity");
  s.capacity = capacity;
  s.residual = capacity;
}

void DataCenterState::commit_embedding(Embedding e) {
  const VdcId id = e.vdc_id;
  if (!embeddings_.emplace(id, std::move(e)).second) {
    throw StateError("VDC " + std::to_string(id) + " is already embedded");
  }
}

std::optional<Embedding> DataCenterState::take_embedding(VdcId id) {
  auto it = embeddings_.find(id);
  if (it == embeddings_.end()) return std::nullopt;
  Embedding e = std::move(it->second);
  embeddings_.erase(it);
  return e;
}

const Embedding* DataCenterState::find_embedding(VdcId id) const {
  auto it = embeddings_.find(id);
  return it == embeddings_.end() ? nullptr : &it->second;
}

std::vector<std::string> DataCenterState::check_consistency() const {
  std::vector<std::string> issues;
  auto report = [&issues](auto&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    issues.push_back(os.str());
  };
  for (const auto& s : servers_) {
    if (!s.residual.non_negative() || !s.residual.fits_in(s.capacity)) report("server ", s.id, ": residual out of range");
    if (s.hosted_vms < 0) report("server ", s.id, ": negative VM count");
    if (s.active != (s.hosted_vms > 0)) report("server ", s.id, ": active flag mismatch");
  }
  std::vector<int> electronic(node_kind_.size(), 0);
  std::vector<int> optical(node_kind_.size(), 0);
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& l = links_[i];
    if (l.residual < 0 || l.residual > l.capacity) report("link ", i, ": residual out of range");
    if (l.used != (l.residual < l.capacity)) report("link ", i, ": used flag mismatch");
    if ((l.medium == LinkMedium::electronic) != (is_server(l.a) != is_server(l.b))) report("link ", i, ": medium mismatch");
    if (!l.used) continue;
    auto& counter = l.medium == LinkMedium::electronic ? electronic : optical;
    ++counter[static_cast<std::size_t>(l.a)];
    ++counter[static_cast<std::size_t>(l.b)];
  }
  for (const auto& sw : switches_) {
    const auto n = static_cast<std::size_t>(sw.id);
    if (sw.used_electronic_ports != electronic[n]) report("switch ", sw.id, ": electronic port count mismatch");
    if (sw.used_optical_ports != optical[n]) report("switch ", sw.id, ": optical port count mismatch");
    if (sw.used_electronic_ports > sw.server_degree || sw.used_optical_ports > sw.switch_degree) {
      report("switch ", sw.id, ": port count exceeds degree");
    }
    if (sw.active != (electronic[n] + optical[n] > 0)) report("switch ", sw.id, ": active flag mismatch");
    if (sw.rack.has_value() != (sw.tier == NodeKind::tor)) report("switch ", sw.id, ": rack only valid for ToR");
  }
  return issues;
}

DataCenterState build_vl2(const TopologyConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  DataCenterState dc;

  for (int r = 0; r < cfg.racks; ++r) {
    Rack rack;
    rack.id = r;
    for (int k = 0; k < cfg.servers_per_rack; ++k) {
      const NodeId id = dc.add_node(NodeKind::server);
      dc.servers_.push_back(ServerState{id, r, cfg.server_capacity, cfg.server_capacity, 0, false});
      rack.servers.push_back(id);
    }
    dc.racks_.push_back(std::move(rack));
  }

  auto add_switch = [&dc](NodeKind tier, std::optional<RackId> rack) {
    const NodeId id = dc.add_node(tier);
    SwitchState sw;
    sw.id = id;
    sw.tier = tier;
    sw.rack = rack;
    dc.switches_.push_back(sw);
    return id;
  };

  std::vector<NodeId> tors, aggs, cores;
  for (int r = 0; r < cfg.racks; ++r) tors.push_back(add_switch(NodeKind::tor, r));
  for (int a = 0; a < cfg.n_agg; ++a) aggs.push_back(add_switch(NodeKind::aggregation, std::nullopt));
  for (int c = 0; c < cfg.n_core; ++c) cores.push_back(add_switch(NodeKind::core, std::nullopt));

  for (int r = 0; r < cfg.racks; ++r) {
    auto& rack = dc.racks_[static_cast<std::size_t>(r)];
    rack.tor = tors[static_cast<std::size_t>(r)];
    for (NodeId s : rack.servers) dc.add_link(s, rack.tor, cfg.access_rate_mbps);
  }
  for (int t = 0; t < cfg.n_tor; ++t) {
    const int first = (2 * t) % cfg.n_agg;
    const int second = (2 * t + 1) % cfg.n_agg;
    dc.add_link(tors[static_cast<std::size_t>(t)], aggs[static_cast<std::size_t>(first)], cfg.trunk_rate_mbps);
    if (second != first) {
      dc.add_link(tors[static_cast<std::size_t>(t)], aggs[static_cast<std::size_t>(second)], cfg.trunk_rate_mbps);
    }
  }
  for (NodeId a : aggs) {
    for (NodeId c : cores) dc.add_link(a, c, cfg.trunk_rate_mbps);
  }
  for (auto& adj : dc.adjacency_) {
    std::sort(adj.begin(), adj.end(), [](const Adjacency& x, const Adjacency& y) { return x.neighbor < y.neighbor; });
  }

  std::uniform_real_distribution<double> inlet(cfg.inlet_min_c, cfg.inlet_max_c);
  for (auto& rack : dc.racks_) {
    rack.inlet_c = cfg.inlet_min_c == cfg.inlet_max_c ? cfg.inlet_min_c : inlet(rng);
  }
  return dc;
}

DataCenterState build_vl2(const TopologyConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return build_vl2(cfg, rng);
}

}  // namespace tavdc
