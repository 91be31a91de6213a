#include <gtest/gtest.h>

#include <limits>
#include <numeric>
#include <random>
#include <tuple>

#include "support.hpp"
#include "tavdc/error.hpp"
#include "tavdc/routing.hpp"

namespace tavdc {
namespace {

// Every simple route from src to dst whose interior avoids servers.
void enumerate(const DataCenterState& s, NodeId u, NodeId dst, Path& cur, std::vector<char>& on,
               std::vector<Path>& out) {
  if (u == dst) {
    out.push_back(cur);
    return;
  }
  if (cur.size() > 1 && s.is_server(u)) return;
  for (const auto& adj : s.neighbors(u)) {
    const auto v = static_cast<std::size_t>(adj.neighbor);
    if (on[v]) continue;
    on[v] = 1;
    cur.push_back(adj.neighbor);
    enumerate(s, adj.neighbor, dst, cur, on, out);
    cur.pop_back();
    on[v] = 0;
  }
}

std::vector<Path> all_routes(const DataCenterState& s, NodeId src, NodeId dst) {
  std::vector<Path> out;
  Path cur{src};
  std::vector<char> on(s.node_count(), 0);
  on[static_cast<std::size_t>(src)] = 1;
  enumerate(s, src, dst, cur, on, out);
  return out;
}

const PhysicalLink& hop(const DataCenterState& s, NodeId a, NodeId b) { return s.link(*s.link_between(a, b)); }

// Exact cost as a fraction over the lcm of capacities, computed from scratch.
std::int64_t exact_cost(const DataCenterState& s, const Path& p) {
  std::int64_t scale = 1;
  for (const auto& l : s.links()) scale = std::lcm(scale, l.capacity);
  std::int64_t c = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const auto& l = hop(s, p[i - 1], p[i]);
    c += l.used ? l.allocated() * (scale / l.capacity) : 100 * scale;
  }
  return c;
}

std::optional<Path> oracle_min_cost(const DataCenterState& s, NodeId src, NodeId dst, Mbps demand) {
  std::optional<std::tuple<std::int64_t, std::size_t, Path>> best;
  for (const auto& p : all_routes(s, src, dst)) {
    if (path_bottleneck(s, p) < demand) continue;
    std::tuple<std::int64_t, std::size_t, Path> key{exact_cost(s, p), p.size(), p};
    if (!best || key < *best) best = key;
  }
  if (!best) return std::nullopt;
  return std::get<2>(*best);
}

std::optional<Path> oracle_widest(const DataCenterState& s, NodeId src, NodeId dst, Mbps demand) {
  std::optional<std::tuple<Mbps, std::size_t, Path>> best;
  for (const auto& p : all_routes(s, src, dst)) {
    const Mbps w = path_bottleneck(s, p);
    if (w < demand) continue;
    std::tuple<Mbps, std::size_t, Path> key{-w, p.size(), p};
    if (!best || key < *best) best = key;
  }
  if (!best) return std::nullopt;
  return std::get<2>(*best);
}

// Random background load: each link gets a reservation with probability
// `p_used`, sometimes filling it completely.
DataCenterState loaded(const TopologyConfig& cfg, std::mt19937_64& rng, double p_used) {
  auto s = build_vl2(cfg, rng);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t i = 0; i < s.links().size(); ++i) {
    if (coin(rng) >= p_used) continue;
    const auto cap = s.link(static_cast<LinkId>(i)).capacity;
    // Coarse amounts provoke exact cost ties.
    std::uniform_int_distribution<Mbps> amount(1, 10);
    const Mbps a = coin(rng) < 0.1 ? cap : amount(rng) * cap / 10;
    s.reserve_link(static_cast<LinkId>(i), a);
  }
  return s;
}

class RoutingOracle : public ::testing::TestWithParam<double> {};

TEST_P(RoutingOracle, MinCostMatchesExhaustiveSearch) {
  std::mt19937_64 rng(1234);
  auto cfg = TopologyConfig::case_a();
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = loaded(cfg, rng, GetParam());
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(s.server_count()) - 1);
    std::uniform_int_distribution<Mbps> demand(0, 1000);
    for (int q = 0; q < 10; ++q) {
      const NodeId a = pick(rng), b = pick(rng);
      if (a == b) continue;
      const Mbps d = demand(rng);
      EXPECT_EQ(find_path(s, a, b, d), oracle_min_cost(s, a, b, d)) << "trial " << trial << " " << a << "->" << b;
    }
  }
}

TEST_P(RoutingOracle, WidestMatchesExhaustiveSearch) {
  std::mt19937_64 rng(99);
  auto cfg = TopologyConfig::case_a();
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = loaded(cfg, rng, GetParam());
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(s.server_count()) - 1);
    std::uniform_int_distribution<Mbps> demand(0, 1000);
    for (int q = 0; q < 10; ++q) {
      const NodeId a = pick(rng), b = pick(rng);
      if (a == b) continue;
      const Mbps d = demand(rng);
      EXPECT_EQ(find_widest_path(s, a, b, d), oracle_widest(s, a, b, d)) << "trial " << trial;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Load, RoutingOracle, ::testing::Values(0.0, 0.3, 0.7, 1.0));

TEST(Routing, UsedLinksAreAlwaysPreferred) {
  auto s = build_vl2(test::tiny_topology());
  // Rack 0 ToR = node 6, rack 1 ToR = node 7, aggs 8 and 9.
  const NodeId tor0 = s.racks()[0].tor, tor1 = s.racks()[1].tor;
  const NodeId agg_hi = tor1 + 2;
  s.reserve_link(*s.link_between(tor0, agg_hi), 9000);
  s.reserve_link(*s.link_between(agg_hi, tor1), 9000);
  const auto p = find_path(s, 0, 3, 10);
  ASSERT_TRUE(p);
  EXPECT_EQ(*p, (Path{0, tor0, agg_hi, tor1, 3}));
  // The baseline avoids the loaded aggregation switch.
  EXPECT_EQ(*find_widest_path(s, 0, 3, 10), (Path{0, tor0, agg_hi - 1, tor1, 3}));
}

TEST(Routing, TiesGoToFewerHopsThenLexicographicOrder) {
  const auto s = build_vl2(test::tiny_topology());
  const NodeId tor0 = s.racks()[0].tor, tor1 = s.racks()[1].tor;
  EXPECT_EQ(*find_path(s, 0, 1, 10), (Path{0, tor0, 1}));
  EXPECT_EQ(*find_path(s, 0, 4, 10), (Path{0, tor0, tor1 + 1, tor1, 4}));
  EXPECT_EQ(*find_widest_path(s, 0, 4, 10), (Path{0, tor0, tor1 + 1, tor1, 4}));
}

TEST(Routing, InsufficientResidualMeansNoRoute) {
  auto s = build_vl2(test::tiny_topology());
  s.reserve_link(s.neighbors(0).front().link, 995);
  EXPECT_FALSE(find_path(s, 0, 4, 10));
  EXPECT_FALSE(find_widest_path(s, 0, 4, 10));
  EXPECT_TRUE(find_path(s, 0, 4, 5));
  EXPECT_FALSE(find_path(s, 0, 1, 6));
}

TEST(Routing, EndpointsMustExist) {
  const auto s = build_vl2(test::tiny_topology());
  EXPECT_THROW(find_path(s, 0, 1000, 1), InputError);
  EXPECT_THROW(find_widest_path(s, -1, 0, 1), InputError);
  EXPECT_EQ(*find_path(s, 2, 2, 1), Path{2});
}

TEST(Routing, PathCostAndBottleneck) {
  auto s = build_vl2(test::tiny_topology());
  s.reserve_link(s.neighbors(0).front().link, 250);
  const NodeId tor0 = s.racks()[0].tor;
  EXPECT_DOUBLE_EQ(path_cost(s, {0, tor0, 1}), 0.25 + 100.0);
  EXPECT_EQ(path_bottleneck(s, {0, tor0, 1}), 750);
  EXPECT_THROW(path_cost(s, {0, 1}), InputError);
}

}  // namespace
}  // namespace tavdc
