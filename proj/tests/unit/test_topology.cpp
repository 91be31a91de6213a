#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "support.hpp"
#include "tavdc/error.hpp"
#include "tavdc/topology.hpp"

namespace tavdc {
namespace {

std::size_t count_kind(const DataCenterState& s, NodeKind k) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.node_count(); ++i) n += s.kind(static_cast<NodeId>(i)) == k;
  return n;
}

TEST(Topology, CaseAShape) {
  const auto s = build_vl2(TopologyConfig::case_a());
  EXPECT_EQ(s.server_count(), 20u);
  EXPECT_EQ(count_kind(s, NodeKind::tor), 4u);
  EXPECT_EQ(count_kind(s, NodeKind::aggregation), 2u);
  EXPECT_EQ(count_kind(s, NodeKind::core), 2u);
  // 20 access links, each ToR to both aggregation switches, agg x core mesh.
  EXPECT_EQ(s.links().size(), 20u + 4 * 2 + 2 * 2);
  EXPECT_EQ(s.link_cost_scale(), 10000);
}

TEST(Topology, CaseBShape) {
  const auto s = build_vl2(TopologyConfig::case_b());
  EXPECT_EQ(s.server_count(), 400u);
  EXPECT_EQ(s.node_count(), 400u + 40 + 20 + 10);
  EXPECT_EQ(s.links().size(), 400u + 40 * 2 + 20 * 10);
  std::set<std::pair<NodeId, NodeId>> agg_pairs;
  for (const auto& rack : s.racks()) {
    EXPECT_EQ(rack.servers.size(), 10u);
    std::vector<NodeId> ups;
    for (const auto& adj : s.neighbors(rack.tor)) {
      if (s.kind(adj.neighbor) == NodeKind::aggregation) ups.push_back(adj.neighbor);
    }
    ASSERT_EQ(ups.size(), 2u);
    agg_pairs.insert({ups[0], ups[1]});
  }
  // Every aggregation switch serves four ToRs.
  for (std::size_t i = 0; i < s.node_count(); ++i) {
    const auto n = static_cast<NodeId>(i);
    if (s.kind(n) != NodeKind::aggregation) continue;
    int tors = 0;
    for (const auto& adj : s.neighbors(n)) tors += s.kind(adj.neighbor) == NodeKind::tor;
    EXPECT_EQ(tors, 4);
  }
}

TEST(Topology, LinksAndAdjacencyAreConsistent) {
  const auto s = build_vl2(TopologyConfig::case_a());
  for (std::size_t i = 0; i < s.node_count(); ++i) {
    const auto adj = s.neighbors(static_cast<NodeId>(i));
    EXPECT_TRUE(std::is_sorted(adj.begin(), adj.end(),
                               [](const Adjacency& a, const Adjacency& b) { return a.neighbor < b.neighbor; }));
    for (const auto& a : adj) EXPECT_EQ(s.link(a.link).other(static_cast<NodeId>(i)), a.neighbor);
  }
  for (const auto& l : s.links()) {
    const bool access = s.is_server(l.a) || s.is_server(l.b);
    EXPECT_EQ(l.medium, access ? LinkMedium::electronic : LinkMedium::optical);
    EXPECT_EQ(l.capacity, access ? 1000 : 10000);
    EXPECT_EQ(l.residual, l.capacity);
  }
  EXPECT_TRUE(s.check_consistency().empty());
}

TEST(Topology, InletsAreDrawnInRangeAndReproducible) {
  const auto cfg = TopologyConfig::case_b();
  Rng a(42), b(42), c(43);
  const auto s1 = build_vl2(cfg, a);
  const auto s2 = build_vl2(cfg, b);
  const auto s3 = build_vl2(cfg, c);
  EXPECT_TRUE(s1 == s2);
  EXPECT_FALSE(s1 == s3);
  for (const auto& r : s1.racks()) {
    EXPECT_GE(r.inlet_c, 15.0);
    EXPECT_LE(r.inlet_c, 20.0);
  }
  EXPECT_EQ(s1.max_inlet_c(),
            std::max_element(s1.racks().begin(), s1.racks().end(), [](const Rack& x, const Rack& y) {
              return x.inlet_c < y.inlet_c;
            })->inlet_c);
}

TEST(Topology, InvalidConfigurationsAreRejected) {
  auto cfg = TopologyConfig::case_a();
  cfg.n_tor = 3;
  EXPECT_THROW(build_vl2(cfg), ConfigError);
  cfg = TopologyConfig::case_a();
  cfg.inlet_min_c = 21.0;
  EXPECT_THROW(build_vl2(cfg), ConfigError);
  cfg = TopologyConfig::case_a();
  cfg.servers_per_rack = 0;
  EXPECT_THROW(build_vl2(cfg), ConfigError);
}

TEST(Topology, ReservationsMaintainDerivedState) {
  auto s = build_vl2(test::tiny_topology());
  const auto pristine = s;
  s.reserve_server(0, {10, 10, 10});
  EXPECT_TRUE(s.server(0).active);
  EXPECT_EQ(s.server(0).hosted_vms, 1);
  const LinkId access = s.neighbors(0).front().link;
  s.reserve_link(access, 100);
  EXPECT_TRUE(s.link(access).used);
  const NodeId tor = s.racks()[0].tor;
  EXPECT_EQ(s.switch_node(tor).used_electronic_ports, 1);
  EXPECT_TRUE(s.switch_node(tor).active);
  EXPECT_TRUE(s.check_consistency().empty());
  s.release_link(access, 100);
  s.release_server(0, {10, 10, 10});
  EXPECT_TRUE(s == pristine);
}

TEST(Topology, FailedPrimitivesLeaveStateUntouched) {
  auto s = build_vl2(test::tiny_topology());
  const auto before = s;
  EXPECT_THROW(s.reserve_server(0, {101, 0, 0}), StateError);
  EXPECT_THROW(s.reserve_server(0, {-1, 0, 0}), StateError);
  EXPECT_THROW(s.release_server(0, {1, 0, 0}), StateError);
  EXPECT_THROW(s.reserve_link(0, 1001), StateError);
  EXPECT_THROW(s.release_link(0, 1), StateError);
  EXPECT_THROW(s.reserve_server(static_cast<NodeId>(s.server_count()), {1, 0, 0}), StateError);
  EXPECT_TRUE(s == before);
}

TEST(Topology, SetupHooksRefuseLoadedServers) {
  auto s = build_vl2(test::tiny_topology());
  s.set_server_capacity(1, {50, 50, 50});
  EXPECT_EQ(s.server(1).residual.cpu, 50);
  s.reserve_server(1, {5, 5, 5});
  EXPECT_THROW(s.set_server_capacity(1, {60, 60, 60}), StateError);
  EXPECT_THROW(s.set_server_capacity(s.racks()[0].tor, {1, 1, 1}), StateError);
}

}  // namespace
}  // namespace tavdc
