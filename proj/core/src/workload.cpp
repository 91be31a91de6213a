#include "tavdc/workload.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "tavdc/error.hpp"

namespace tavdc {

namespace {

std::int64_t draw(const IntRange& r, Rng& rng) {
  return std::uniform_int_distribution<std::int64_t>(r.min, r.max)(rng);
}

void check_range(const IntRange& r, const char* name, std::int64_t floor) {
  if (r.min > r.max) throw ConfigError(std::string("workload: empty range for ") + name);
  if (r.min < floor) throw ConfigError(std::string("workload: range for ") + name + " below " + std::to_string(floor));
}

double positive_exponential(double rate, Rng& rng) {
  std::exponential_distribution<double> dist(rate);
  double x = 0.0;
  while (x <= 0.0) x = dist(rng);
  return x;
}

}  // namespace

WorkloadParams WorkloadParams::case_a() { return WorkloadParams{}; }

WorkloadParams WorkloadParams::case_b() {
  WorkloadParams p;
  p.m_max = 12;
  return p;
}

void WorkloadParams::validate() const {
  if (m_min < 1) throw ConfigError("workload: m_min must be at least 1");
  if (m_min > m_max) throw ConfigError("workload: m_min exceeds m_max");
  check_range(cpu, "cpu", 1);
  check_range(mem, "mem", 0);
  check_range(disk, "disk", 0);
  check_range(bandwidth, "bandwidth", 1);
}

VdcRequest generate_vdc(const WorkloadParams& params, Rng& rng, VdcId id) {
  params.validate();
  VdcRequest vdc;
  vdc.id = id;
  const int m = static_cast<int>(draw({params.m_min, params.m_max}, rng));
  vdc.vms.reserve(static_cast<std::size_t>(m));
  for (VmId v = 0; v < m; ++v) {
    ResourceVector demand;
    demand.cpu = draw(params.cpu, rng);
    demand.mem = draw(params.mem, rng);
    demand.disk = draw(params.disk, rng);
    vdc.vms.push_back({v, demand});
  }

  // Random insertion order; order[0] seeds the graph.
  std::vector<VmId> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<VmId> in_graph{order.front()};
  for (std::size_t i = 1; i < order.size(); ++i) {
    const VmId incoming = order[i];
    const auto e = static_cast<std::int64_t>(in_graph.size());
    const auto n_vm = static_cast<std::size_t>(draw({1, e}, rng));
    // Partial Fisher-Yates over a copy picks n_vm distinct neighbours.
    std::vector<VmId> pool = in_graph;
    for (std::size_t k = 0; k < n_vm; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
      std::swap(pool[k], pool[pick(rng)]);
      vdc.vlinks.push_back({incoming, pool[k], draw(params.bandwidth, rng)});
    }
    in_graph.push_back(incoming);
  }
  return vdc;
}

std::vector<VdcRequest> generate_static_batch(std::size_t n, const WorkloadParams& params, Rng& rng) {
  std::vector<VdcRequest> batch;
  batch.reserve(n);
  for (std::size_t i = 0; i < n; ++i) batch.push_back(generate_vdc(params, rng, static_cast<VdcId>(i)));
  return batch;
}

EventTrace generate_dynamic_trace(std::size_t n_requests, double lambda_per_hour, double mean_holding_h,
                                  const WorkloadParams& params, Rng& rng) {
  if (!(lambda_per_hour > 0.0)) throw ConfigError("dynamic: lambda must be positive");
  if (!(mean_holding_h > 0.0)) throw ConfigError("dynamic: mean holding time must be positive");
  EventTrace trace;
  trace.requests.reserve(n_requests);
  trace.events.reserve(2 * n_requests);
  double t = 0.0;
  for (std::size_t k = 0; k < n_requests; ++k) {
    t += positive_exponential(lambda_per_hour, rng);
    const double holding = positive_exponential(1.0 / mean_holding_h, rng);
    VdcRequest vdc = generate_vdc(params, rng, static_cast<VdcId>(k));
    vdc.arrival_time = t;
    vdc.holding_time = holding;
    trace.events.push_back({t, EventKind::arrive, vdc.id});
    trace.events.push_back({t + holding, EventKind::depart, vdc.id});
    trace.requests.push_back(std::move(vdc));
  }
  std::stable_sort(trace.events.begin(), trace.events.end(), [](const TraceEvent& a, const TraceEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.kind == EventKind::depart && b.kind == EventKind::arrive;
  });
  return trace;
}

void EventTrace::validate() const {
  for (std::size_t k = 0; k < requests.size(); ++k) {
    if (requests[k].id != static_cast<VdcId>(k)) throw InputError("trace: request ids must be dense and ordered");
  }
  std::vector<int> state(requests.size(), 0);  // 0 = pending, 1 = arrived, 2 = departed
  double last = -std::numeric_limits<double>::infinity();
  for (const auto& ev : events) {
    if (ev.time < last) throw InputError("trace: event times decrease");
    last = ev.time;
    if (ev.vdc_id < 0 || static_cast<std::size_t>(ev.vdc_id) >= requests.size()) {
      throw InputError("trace: event references unknown VDC " + std::to_string(ev.vdc_id));
    }
    auto& s = state[static_cast<std::size_t>(ev.vdc_id)];
    const auto& req = requests[static_cast<std::size_t>(ev.vdc_id)];
    if (ev.kind == EventKind::arrive) {
      if (s != 0) throw InputError("trace: duplicate ARRIVE for VDC " + std::to_string(ev.vdc_id));
      if (ev.time != req.arrival_time) throw InputError("trace: ARRIVE time mismatch");
      s = 1;
    } else {
      if (s != 1) throw InputError("trace: DEPART without ARRIVE for VDC " + std::to_string(ev.vdc_id));
      if (ev.time != req.arrival_time + req.holding_time) throw InputError("trace: DEPART time mismatch");
      s = 2;
    }
  }
  for (std::size_t k = 0; k < state.size(); ++k) {
    if (state[k] != 2) throw InputError("trace: VDC " + std::to_string(k) + " lacks ARRIVE/DEPART pair");
  }
}

bool is_connected(const VdcRequest& vdc) {
  if (vdc.vms.empty()) return true;
  std::unordered_map<VmId, std::vector<VmId>> adj;
  for (const auto& l : vdc.vlinks) {
    adj[l.s].push_back(l.d);
    adj[l.d].push_back(l.s);
  }
  std::unordered_map<VmId, bool> seen;
  std::queue<VmId> frontier;
  frontier.push(vdc.vms.front().id);
  seen[vdc.vms.front().id] = true;
  while (!frontier.empty()) {
    const VmId v = frontier.front();
    frontier.pop();
    for (VmId w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        frontier.push(w);
      }
    }
  }
  return std::all_of(vdc.vms.begin(), vdc.vms.end(), [&seen](const VmDemand& vm) { return seen[vm.id]; });
}

}  // namespace tavdc
