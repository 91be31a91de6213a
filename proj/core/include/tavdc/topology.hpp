#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tavdc/model.hpp"

namespace tavdc {

enum class NodeKind : std::uint8_t { server, tor, aggregation, core };
enum class LinkMedium : std::uint8_t { electronic, optical };

const char* to_string(NodeKind kind);
const char* to_string(LinkMedium medium);

// Parameters of a VL2-style three-tier tree.
struct TopologyConfig {
  std::string name = "caseA";
  int racks = 4;
  int servers_per_rack = 5;
  // Must equal `racks`; kept separate so configs can state it explicitly.
  int n_tor = 4;
  int n_agg = 2;
  int n_core = 2;
  Mbps access_rate_mbps = 1000;
  Mbps trunk_rate_mbps = 10000;
  ResourceVector server_capacity{100, 1000, 10000};
  double inlet_min_c = 15.0;
  double inlet_max_c = 20.0;
  std::uint64_t seed = 1;

  static TopologyConfig case_a();
  static TopologyConfig case_b();

  // Throws ConfigError on an unbuildable configuration.
  void validate() const;
};

struct ServerState {
  NodeId id = 0;
  RackId rack = 0;
  ResourceVector capacity;
  ResourceVector residual;
  int hosted_vms = 0;
  bool active = false;

  std::int64_t allocated_cpu() const { return capacity.cpu - residual.cpu; }
  bool operator==(const ServerState&) const = default;
};

struct SwitchState {
  NodeId id = 0;
  NodeKind tier = NodeKind::tor;
  std::optional<RackId> rack;  // ToR only
  bool active = false;
  int used_electronic_ports = 0;
  int used_optical_ports = 0;
  int server_degree = 0;
  int switch_degree = 0;

  bool operator==(const SwitchState&) const = default;
};

struct PhysicalLink {
  NodeId a = 0;
  NodeId b = 0;
  Mbps capacity = 0;
  Mbps residual = 0;
  LinkMedium medium = LinkMedium::electronic;
  bool used = false;

  Mbps allocated() const { return capacity - residual; }
  double utilization() const { return static_cast<double>(allocated()) / static_cast<double>(capacity); }
  NodeId other(NodeId n) const { return n == a ? b : a; }

  bool operator==(const PhysicalLink&) const = default;
};

struct Rack {
  RackId id = 0;
  std::vector<NodeId> servers;
  NodeId tor = 0;
  double inlet_c = 0.0;

  bool operator==(const Rack&) const = default;
};

struct Adjacency {
  NodeId neighbor = 0;
  LinkId link = 0;
  bool operator==(const Adjacency&) const = default;
};

// Physical data center plus its mutable reservation state.
//
// Node ids are dense: servers occupy [0, server_count()) in rack-major order,
// followed by ToR, aggregation and core switches. Adjacency lists are sorted
// by neighbour id. All derived flags (server/switch activity, link usage,
// port counters) are maintained by the reserve/release primitives and always
// agree with what check_consistency() recomputes from scratch.
class DataCenterState {
 public:
  DataCenterState() = default;

  std::size_t node_count() const { return node_kind_.size(); }
  std::size_t server_count() const { return servers_.size(); }
  bool is_server(NodeId n) const { return n >= 0 && static_cast<std::size_t>(n) < servers_.size(); }
  bool is_node(NodeId n) const { return n >= 0 && static_cast<std::size_t>(n) < node_kind_.size(); }
  NodeKind kind(NodeId n) const { return node_kind_.at(static_cast<std::size_t>(n)); }
  std::optional<RackId> rack_of(NodeId n) const;

  const ServerState& server(NodeId n) const;
  const SwitchState& switch_node(NodeId n) const;
  const PhysicalLink& link(LinkId l) const { return links_.at(static_cast<std::size_t>(l)); }
  const Rack& rack(RackId r) const { return racks_.at(static_cast<std::size_t>(r)); }

  std::span<const ServerState> servers() const { return servers_; }
  std::span<const SwitchState> switches() const { return switches_; }
  std::span<const PhysicalLink> links() const { return links_; }
  std::span<const Rack> racks() const { return racks_; }
  std::span<const Adjacency> neighbors(NodeId n) const;
  std::optional<LinkId> link_between(NodeId a, NodeId b) const;

  Mbps max_link_capacity() const;
  // Least common multiple of all link capacities: utilization times this
  // scale is an integer on every link.
  std::int64_t link_cost_scale() const { return cost_scale_; }
  // link_cost_scale() / capacity of link `l`.
  std::int64_t link_cost_unit(LinkId l) const { return cost_unit_[static_cast<std::size_t>(l)]; }
  double max_inlet_c() const;

  // Resource primitives. Each either fully applies or throws StateError and
  // leaves the state unchanged. A server reservation hosts one VM.
  void reserve_server(NodeId n, const ResourceVector& amount);
  void release_server(NodeId n, const ResourceVector& amount);
  void reserve_link(LinkId l, Mbps amount);
  void release_link(LinkId l, Mbps amount);

  // Scenario setup hooks. Only allowed before anything is reserved on the
  // affected element.
  void set_inlet_temperature(RackId r, double inlet_c);
  void set_server_capacity(NodeId n, const ResourceVector& capacity);

  // Registry of embeddings currently committed against this state.
  void commit_embedding(Embedding e);
  std::optional<Embedding> take_embedding(VdcId id);
  const Embedding* find_embedding(VdcId id) const;
  const std::map<VdcId, Embedding>& embeddings() const { return embeddings_; }

  // Recomputes every derived field from residuals and returns one message per
  // mismatch; empty means consistent.
  std::vector<std::string> check_consistency() const;

  bool operator==(const DataCenterState&) const = default;

 private:
  friend DataCenterState build_vl2(const TopologyConfig& cfg, std::mt19937_64& rng);

  NodeId add_node(NodeKind kind);
  void add_link(NodeId a, NodeId b, Mbps capacity);
  void set_link_used(LinkId l, bool used);
  SwitchState& mutable_switch(NodeId n);

  std::vector<NodeKind> node_kind_;
  std::vector<ServerState> servers_;
  std::vector<SwitchState> switches_;
  std::vector<PhysicalLink> links_;
  std::vector<Rack> racks_;
  std::vector<std::vector<Adjacency>> adjacency_;
  std::map<VdcId, Embedding> embeddings_;
  std::int64_t cost_scale_ = 1;
  std::vector<std::int64_t> cost_unit_;
};

// Builds a VL2 tree: each ToR uplinks to two aggregation switches chosen
// round-robin (one if only one exists), aggregation and core form a complete
// bipartite graph. Inlet temperatures are drawn from `rng`.
DataCenterState build_vl2(const TopologyConfig& cfg, std::mt19937_64& rng);
// Same, seeded from cfg.seed.
DataCenterState build_vl2(const TopologyConfig& cfg);

}  // namespace tavdc
