#include "tavdc/routing.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>

#include "tavdc/error.hpp"

namespace tavdc {

namespace {

std::int64_t scaled_cost(const DataCenterState& state, LinkId id) {
  const auto& l = state.link(id);
  if (!l.used) return static_cast<std::int64_t>(kUnusedLinkCost) * state.link_cost_scale();
  return l.allocated() * state.link_cost_unit(id);
}

// Nodes of the path ending at `n`, source first.
void unwind(const std::vector<NodeId>& pred, NodeId n, Path& out) {
  out.clear();
  for (; n >= 0; n = pred[static_cast<std::size_t>(n)]) out.push_back(n);
  std::reverse(out.begin(), out.end());
}

bool transit_allowed(const DataCenterState& state, NodeId n, NodeId src) {
  return n == src || !state.is_server(n);
}

// Servers other than the endpoints can never lie on a route, so they are
// not even labelled.
bool reachable_label(const DataCenterState& state, NodeId n, NodeId dst) {
  return n == dst || !state.is_server(n);
}

// Per-thread buffers reused across searches. Only entries listed in
// `touched` can differ from their initial values.
struct Scratch {
  std::vector<std::int64_t> cost;
  std::vector<int> hops;
  std::vector<NodeId> pred;
  std::vector<char> done;
  std::vector<Mbps> width;
  std::vector<NodeId> touched;

  void reset(std::size_t n) {
    if (cost.size() != n) {
      cost.assign(n, std::numeric_limits<std::int64_t>::max());
      hops.assign(n, std::numeric_limits<int>::max());
      pred.assign(n, -1);
      done.assign(n, 0);
      width.assign(n, -1);
      touched.clear();
      return;
    }
    for (NodeId v : touched) {
      const auto i = static_cast<std::size_t>(v);
      cost[i] = std::numeric_limits<std::int64_t>::max();
      hops[i] = std::numeric_limits<int>::max();
      pred[i] = -1;
      done[i] = 0;
      width[i] = -1;
    }
    touched.clear();
  }
};

// Two servers under the same ToR have exactly one simple route between
// them; returns it (or nullopt if it lacks capacity) when that applies.
std::optional<std::optional<Path>> same_rack_route(const DataCenterState& state, NodeId src, NodeId dst,
                                                   Mbps demand) {
  if (!state.is_server(src) || !state.is_server(dst)) return std::nullopt;
  const auto a = state.neighbors(src);
  const auto b = state.neighbors(dst);
  if (a.size() != 1 || b.size() != 1 || a.front().neighbor != b.front().neighbor) return std::nullopt;
  if (state.link(a.front().link).residual < demand || state.link(b.front().link).residual < demand) {
    return std::optional<Path>{};
  }
  return std::optional<Path>{Path{src, a.front().neighbor, dst}};
}

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

void check_endpoints(const DataCenterState& state, NodeId src, NodeId dst) {
  if (!state.is_node(src) || !state.is_node(dst)) throw InputError("route endpoints must be existing nodes");
}

}  // namespace

std::optional<Path> find_path(const DataCenterState& state, NodeId src, NodeId dst, Mbps demand) {
  check_endpoints(state, src, dst);
  if (src == dst) return Path{src};
  if (auto direct = same_rack_route(state, src, dst, demand)) return *direct;
  auto& sc = scratch();
  sc.reset(state.node_count());
  auto& cost = sc.cost;
  auto& hops = sc.hops;
  auto& pred = sc.pred;
  auto& done = sc.done;
  Path lhs, rhs;

  using Entry = std::tuple<std::int64_t, int, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  auto& touched = sc.touched;
  cost[static_cast<std::size_t>(src)] = 0;
  hops[static_cast<std::size_t>(src)] = 0;
  touched.push_back(src);
  heap.emplace(0, 0, src);

  while (!heap.empty()) {
    const auto [c, h, u] = heap.top();
    heap.pop();
    const auto ui = static_cast<std::size_t>(u);
    if (done[ui] || c != cost[ui] || h != hops[ui]) continue;
    done[ui] = 1;
    if (u == dst) break;
    if (!transit_allowed(state, u, src)) continue;
    for (const auto& adj : state.neighbors(u)) {
      if (!reachable_label(state, adj.neighbor, dst)) continue;
      const auto& link = state.link(adj.link);
      if (link.residual < demand) continue;
      const auto vi = static_cast<std::size_t>(adj.neighbor);
      if (done[vi]) continue;
      const std::int64_t nc = c + scaled_cost(state, adj.link);
      const int nh = h + 1;
      bool better = nc < cost[vi] || (nc == cost[vi] && nh < hops[vi]);
      if (!better && nc == cost[vi] && nh == hops[vi]) {
        unwind(pred, u, lhs);
        unwind(pred, pred[vi], rhs);
        better = lhs < rhs;
      }
      if (better) {
        if (cost[vi] == std::numeric_limits<std::int64_t>::max()) touched.push_back(adj.neighbor);
        cost[vi] = nc;
        hops[vi] = nh;
        pred[vi] = u;
        heap.emplace(nc, nh, adj.neighbor);
      }
    }
  }
  if (!done[static_cast<std::size_t>(dst)]) return std::nullopt;
  Path path;
  unwind(pred, dst, path);
  return path;
}

namespace {

// Fewest-hop route over links with residual >= `floor`. FIFO order plus
// ascending neighbour ids yields the lexicographically smallest such route.
std::optional<Path> bfs_route(const DataCenterState& state, NodeId src, NodeId dst, Mbps floor) {
  auto& sc = scratch();
  sc.reset(state.node_count());
  auto& pred = sc.pred;
  auto& seen = sc.done;
  auto& touched = sc.touched;
  std::queue<NodeId> frontier;
  frontier.push(src);
  seen[static_cast<std::size_t>(src)] = 1;
  touched.push_back(src);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    if (u == dst) break;
    if (!transit_allowed(state, u, src)) continue;
    for (const auto& adj : state.neighbors(u)) {
      if (!reachable_label(state, adj.neighbor, dst)) continue;
      const auto vi = static_cast<std::size_t>(adj.neighbor);
      if (seen[vi] || state.link(adj.link).residual < floor) continue;
      seen[vi] = 1;
      pred[vi] = u;
      touched.push_back(adj.neighbor);
      frontier.push(adj.neighbor);
    }
  }
  if (!seen[static_cast<std::size_t>(dst)]) return std::nullopt;
  Path path;
  unwind(pred, dst, path);
  return path;
}

// Largest achievable bottleneck between src and dst over links with
// residual >= demand, or -1 if dst is unreachable.
Mbps best_bottleneck(const DataCenterState& state, NodeId src, NodeId dst, Mbps demand) {
  auto& sc = scratch();
  sc.reset(state.node_count());
  auto& width = sc.width;
  auto& done = sc.done;
  auto& touched = sc.touched;
  std::priority_queue<std::pair<Mbps, NodeId>> heap;
  width[static_cast<std::size_t>(src)] = std::numeric_limits<Mbps>::max();
  touched.push_back(src);
  heap.emplace(width[static_cast<std::size_t>(src)], src);
  while (!heap.empty()) {
    const auto [w, u] = heap.top();
    heap.pop();
    const auto ui = static_cast<std::size_t>(u);
    if (done[ui] || w != width[ui]) continue;
    done[ui] = 1;
    if (u == dst) return w;
    if (!transit_allowed(state, u, src)) continue;
    for (const auto& adj : state.neighbors(u)) {
      if (!reachable_label(state, adj.neighbor, dst)) continue;
      const auto& link = state.link(adj.link);
      if (link.residual < demand) continue;
      const auto vi = static_cast<std::size_t>(adj.neighbor);
      const Mbps nw = std::min(w, link.residual);
      if (!done[vi] && nw > width[vi]) {
        if (width[vi] < 0) touched.push_back(adj.neighbor);
        width[vi] = nw;
        heap.emplace(nw, adj.neighbor);
      }
    }
  }
  return -1;
}

Mbps widest_incident_residual(const DataCenterState& state, NodeId n) {
  Mbps best = -1;
  for (const auto& adj : state.neighbors(n)) best = std::max(best, state.link(adj.link).residual);
  return best;
}

}  // namespace

std::optional<Path> find_widest_path(const DataCenterState& state, NodeId src, NodeId dst, Mbps demand) {
  check_endpoints(state, src, dst);
  if (src == dst) return Path{src};
  if (auto direct = same_rack_route(state, src, dst, demand)) return *direct;

  // No route can be wider than the widest link at either end. If a route
  // reaches that bound it is optimal, and the BFS picks the fewest-hop,
  // lexicographically smallest one among them.
  const Mbps upper = std::min(widest_incident_residual(state, src), widest_incident_residual(state, dst));
  if (upper >= demand) {
    if (auto path = bfs_route(state, src, dst, upper)) return path;
  }
  const Mbps bottleneck = best_bottleneck(state, src, dst, demand);
  if (bottleneck < 0) return std::nullopt;
  return bfs_route(state, src, dst, bottleneck);
}

double path_cost(const DataCenterState& state, const Path& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto l = state.link_between(path[i - 1], path[i]);
    if (!l) throw InputError("path is not contiguous");
    const auto& link = state.link(*l);
    total += link.used ? link.utilization() : kUnusedLinkCost;
  }
  return total;
}

Mbps path_bottleneck(const DataCenterState& state, const Path& path) {
  Mbps w = std::numeric_limits<Mbps>::max();
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto l = state.link_between(path[i - 1], path[i]);
    if (!l) throw InputError("path is not contiguous");
    w = std::min(w, state.link(*l).residual);
  }
  return w;
}

}  // namespace tavdc
