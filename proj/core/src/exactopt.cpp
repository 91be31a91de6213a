#include "tavdc/exactopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "tavdc/error.hpp"

namespace tavdc {

namespace milp_names {
std::string delta(std::size_t i, VmId v, NodeId n) {
  return "delta_" + std::to_string(i) + "_" + std::to_string(v) + "_" + std::to_string(n);
}
std::string mu(std::size_t i, VmId s, VmId d, NodeId m, NodeId n) {
  return "mu_" + std::to_string(i) + "_" + std::to_string(s) + "_" + std::to_string(d) + "_" + std::to_string(m) +
         "_" + std::to_string(n);
}
std::string omega(NodeId n) { return "omega_" + std::to_string(n); }
std::string pi(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return "pi_" + std::to_string(a) + "_" + std::to_string(b);
}
std::string q(NodeId n) { return "q_" + std::to_string(n); }
std::string sigma(NodeId n) { return "sigma_" + std::to_string(n); }
std::string p(NodeId n) { return "p_" + std::to_string(n); }
std::string tout(RackId k) { return "tout_" + std::to_string(k); }
}  // namespace milp_names

Mbps MilpInstance::effective_big_m() const { return big_m > 0 ? big_m : topology.max_link_capacity(); }

void MilpInstance::validate() const {
  if (!(alpha >= 0.0) || std::isinf(alpha)) throw InputError("instance: alpha must be finite and >= 0");
  if (big_m != 0 && big_m < topology.max_link_capacity()) {
    throw InputError("instance: big_m must be at least the largest link capacity");
  }
  if (topology.node_count() == 0) throw InputError("instance: empty topology");
  for (const auto& s : topology.servers()) {
    if (!(s.residual == s.capacity)) throw InputError("instance: topology must be unreserved");
  }
  for (const auto& l : topology.links()) {
    if (l.residual != l.capacity) throw InputError("instance: topology must be unreserved");
  }
  std::set<VdcId> ids;
  for (const auto& vdc : vdcs) {
    if (!ids.insert(vdc.id).second) throw InputError("instance: duplicate VDC id " + std::to_string(vdc.id));
    std::set<VmId> vms;
    for (const auto& vm : vdc.vms) {
      if (!vms.insert(vm.id).second) throw InputError("instance: duplicate VM id in VDC " + std::to_string(vdc.id));
      if (!vm.demand.non_negative()) throw InputError("instance: negative VM demand");
    }
    for (const auto& vl : vdc.vlinks) {
      if (vl.s == vl.d || !vms.count(vl.s) || !vms.count(vl.d) || vl.bandwidth < 0) {
        throw InputError("instance: malformed virtual link in VDC " + std::to_string(vdc.id));
      }
    }
  }
}

SolutionMetrics evaluate_embeddings(const MilpInstance& instance, std::span<const Embedding> embeddings) {
  const auto& topo = instance.topology;
  const auto& power = instance.model.power;
  std::unordered_map<VdcId, const VdcRequest*> by_id;
  for (const auto& vdc : instance.vdcs) by_id.emplace(vdc.id, &vdc);

  std::vector<std::int64_t> cpu(topo.server_count(), 0);
  std::vector<bool> server_on(topo.server_count(), false);
  std::vector<bool> link_on(topo.links().size(), false);
  for (const auto& e : embeddings) {
    auto it = by_id.find(e.vdc_id);
    if (it == by_id.end()) throw InputError("candidate: unknown VDC " + std::to_string(e.vdc_id));
    const VdcRequest& vdc = *it->second;
    for (const auto& pl : e.placements) {
      const int idx = vdc.vm_index(pl.vm);
      if (idx < 0) throw InputError("candidate: VDC " + std::to_string(vdc.id) + " has no VM " + std::to_string(pl.vm));
      if (!topo.is_server(pl.server)) throw InputError("candidate: node " + std::to_string(pl.server) + " is not a server");
      cpu[static_cast<std::size_t>(pl.server)] += vdc.vms[static_cast<std::size_t>(idx)].demand.cpu;
      server_on[static_cast<std::size_t>(pl.server)] = true;
    }
    for (const auto& path : e.paths) {
      for (std::size_t h = 0; h + 1 < path.nodes.size(); ++h) {
        const NodeId a = path.nodes[h];
        const NodeId b = path.nodes[h + 1];
        if (!topo.is_node(a) || !topo.is_node(b)) throw InputError("candidate: unknown node on a path");
        const auto l = topo.link_between(a, b);
        if (!l) throw InputError("candidate: nodes " + std::to_string(a) + " and " + std::to_string(b) + " are not adjacent");
        link_on[static_cast<std::size_t>(*l)] = true;
      }
    }
  }

  SolutionMetrics m;
  m.node_power_kw.assign(topo.node_count(), 0.0);
  for (const auto& s : topo.servers()) {
    const auto k = static_cast<std::size_t>(s.id);
    if (!server_on[k]) continue;
    const double u = static_cast<double>(cpu[k]) / static_cast<double>(s.capacity.cpu);
    m.node_power_kw[k] = power.server_idle_kw + (power.server_max_kw - power.server_idle_kw) * u;
  }
  auto& electronic = m.electronic_ports;
  auto& optical = m.optical_ports;
  electronic.assign(topo.node_count(), 0);
  optical.assign(topo.node_count(), 0);
  for (std::size_t l = 0; l < link_on.size(); ++l) {
    if (!link_on[l]) continue;
    const auto& link = topo.link(static_cast<LinkId>(l));
    for (NodeId end : {link.a, link.b}) {
      if (topo.is_server(end)) continue;
      if (topo.is_server(link.other(end))) {
        ++electronic[static_cast<std::size_t>(end)];
      } else {
        ++optical[static_cast<std::size_t>(end)];
      }
    }
  }
  for (const auto& sw : topo.switches()) {
    const auto k = static_cast<std::size_t>(sw.id);
    if (electronic[k] + optical[k] == 0) continue;
    m.node_power_kw[k] =
        power.switch_idle_kw + electronic[k] * power.electronic_port_kw + optical[k] * power.optical_port_kw;
  }

  m.link_used = std::move(link_on);
  m.max_outlet_c = -std::numeric_limits<double>::infinity();
  for (const auto& rack : topo.racks()) {
    double p = 0.0;
    for (NodeId s : rack.servers) p += m.node_power_kw[static_cast<std::size_t>(s)];
    p += m.node_power_kw[static_cast<std::size_t>(rack.tor)];
    const double out = rack.inlet_c + p / instance.model.thermo.rho_f_cp();
    m.rack_outlet_c.push_back(out);
    m.max_outlet_c = std::max(m.max_outlet_c, out);
  }
  double total = 0.0;
  for (double p : m.node_power_kw) total += p;
  m.total_power_kw = total;
  m.objective = m.max_outlet_c + instance.alpha * total;
  return m;
}

namespace {

// Bandwidth demanded between an ordered VM pair; the reverse pair carries the
// same amount so that the two flows mirror each other.
Mbps pair_demand(const VdcRequest& vdc, VmId s, VmId d) {
  Mbps b = 0;
  for (const auto& vl : vdc.vlinks) {
    if ((vl.s == s && vl.d == d) || (vl.s == d && vl.d == s)) b += vl.bandwidth;
  }
  return b;
}

}  // namespace

lp::Model build_milp(const MilpInstance& instance) {
  using namespace milp_names;
  using lp::Sense;
  instance.validate();
  const auto& topo = instance.topology;
  const auto& pw = instance.model.power;
  const auto n_nodes = static_cast<NodeId>(topo.node_count());
  const auto n_servers = static_cast<NodeId>(topo.server_count());
  const double big_m = static_cast<double>(instance.effective_big_m());

  lp::Model m;
  m.comment = "temperature-aware VDC embedding\n" + std::to_string(instance.vdcs.size()) + " VDCs, " +
              std::to_string(n_servers) + " servers, " + std::to_string(n_nodes - n_servers) + " switches, " +
              std::to_string(topo.links().size()) + " links";
  m.objective.push_back({1.0, "T"});
  for (NodeId n = 0; n < n_nodes; ++n) m.objective.push_back({instance.alpha, p(n)});

  auto add = [&m](std::string name, std::vector<lp::Term> terms, Sense sense, double rhs) {
    m.constraints.push_back({std::move(name), std::move(terms), sense, rhs});
  };
  auto tag = [](auto... parts) {
    std::string s;
    ((s += "_" + std::to_string(parts)), ...);
    return s;
  };

  for (std::size_t i = 0; i < instance.vdcs.size(); ++i) {
    const auto& vdc = instance.vdcs[i];
    for (const auto& vm : vdc.vms) {
      std::vector<lp::Term> t;
      for (NodeId n = 0; n < n_servers; ++n) t.push_back({1.0, delta(i, vm.id, n)});
      add("c3" + tag(i, vm.id), std::move(t), Sense::eq, 1.0);
    }
  }
  for (std::size_t i = 0; i < instance.vdcs.size(); ++i) {
    const auto& vdc = instance.vdcs[i];
    if (vdc.vms.size() < 2) continue;
    for (NodeId n = 0; n < n_servers; ++n) {
      std::vector<lp::Term> t;
      for (const auto& vm : vdc.vms) t.push_back({1.0, delta(i, vm.id, n)});
      add("c4" + tag(i, n), std::move(t), Sense::le, 1.0);
    }
  }
  for (const auto& srv : topo.servers()) {
    const std::pair<const char*, std::int64_t ResourceVector::*> resources[] = {
        {"cpu", &ResourceVector::cpu}, {"mem", &ResourceVector::mem}, {"disk", &ResourceVector::disk}};
    for (const auto& [rname, field] : resources) {
      std::vector<lp::Term> t;
      for (std::size_t i = 0; i < instance.vdcs.size(); ++i) {
        for (const auto& vm : instance.vdcs[i].vms) {
          if (vm.demand.*field != 0) t.push_back({static_cast<double>(vm.demand.*field), delta(i, vm.id, srv.id)});
        }
      }
      if (!t.empty()) add("c5" + tag(srv.id) + "_" + rname, std::move(t), Sense::le, static_cast<double>(srv.capacity.*field));
    }
  }

  // Flow families, per ordered VM pair.
  std::map<std::pair<NodeId, NodeId>, std::vector<lp::Term>> link_load;  // directed hop
  std::map<std::pair<NodeId, NodeId>, std::vector<lp::Term>> link_flow;  // undirected link
  for (std::size_t i = 0; i < instance.vdcs.size(); ++i) {
    const auto& vdc = instance.vdcs[i];
    for (const auto& s : vdc.vms) {
      for (const auto& d : vdc.vms) {
        if (s.id == d.id) continue;
        const double b = static_cast<double>(pair_demand(vdc, s.id, d.id));
        for (NodeId n = 0; n < n_nodes; ++n) {
          std::vector<lp::Term> t;
          for (const auto& adj : topo.neighbors(n)) t.push_back({1.0, mu(i, s.id, d.id, n, adj.neighbor)});
          for (const auto& adj : topo.neighbors(n)) t.push_back({-1.0, mu(i, s.id, d.id, adj.neighbor, n)});
          if (topo.is_server(n)) {
            if (b != 0.0) {
              t.push_back({-b, delta(i, s.id, n)});
              t.push_back({b, delta(i, d.id, n)});
            }
            add("c6" + tag(i, s.id, d.id, n), std::move(t), Sense::eq, 0.0);
          } else {
            add("c7" + tag(i, s.id, d.id, n), std::move(t), Sense::eq, 0.0);
          }
        }
        for (NodeId mnode = 0; mnode < n_nodes; ++mnode) {
          for (const auto& adj : topo.neighbors(mnode)) {
            const NodeId n = adj.neighbor;
            // The mirror row for (s,d) and (d,s) is the same row; emit it once.
            if (s.id < d.id) {
              add("c8" + tag(i, s.id, d.id, mnode, n),
                  {{1.0, mu(i, s.id, d.id, mnode, n)}, {-1.0, mu(i, d.id, s.id, n, mnode)}}, Sense::eq, 0.0);
            }
            link_load[{mnode, n}].push_back({1.0, mu(i, s.id, d.id, mnode, n)});
            if (mnode < n) {
              add("c12" + tag(i, s.id, d.id, mnode, n), {{big_m, pi(mnode, n)}, {-1.0, mu(i, s.id, d.id, mnode, n)}},
                  Sense::ge, 0.0);
              add("c13" + tag(i, s.id, d.id, mnode, n), {{big_m, pi(mnode, n)}, {-1.0, mu(i, s.id, d.id, n, mnode)}},
                  Sense::ge, 0.0);
              auto& f = link_flow[{mnode, n}];
              f.push_back({-1.0, mu(i, s.id, d.id, n, mnode)});
              f.push_back({-1.0, mu(i, s.id, d.id, mnode, n)});
            }
          }
        }
      }
    }
  }
  for (NodeId mnode = 0; mnode < n_nodes; ++mnode) {
    for (const auto& adj : topo.neighbors(mnode)) {
      auto it = link_load.find({mnode, adj.neighbor});
      if (it == link_load.end()) continue;
      add("c9" + tag(mnode, adj.neighbor), std::move(it->second), Sense::le,
          static_cast<double>(topo.link(adj.link).capacity));
    }
  }

  for (std::size_t i = 0; i < instance.vdcs.size(); ++i) {
    for (const auto& vm : instance.vdcs[i].vms) {
      for (NodeId n = 0; n < n_servers; ++n) {
        add("c10" + tag(i, vm.id, n), {{1.0, omega(n)}, {-1.0, delta(i, vm.id, n)}}, Sense::ge, 0.0);
      }
    }
  }
  for (NodeId n = 0; n < n_servers; ++n) {
    std::vector<lp::Term> t{{1.0, omega(n)}};
    for (std::size_t i = 0; i < instance.vdcs.size(); ++i) {
      for (const auto& vm : instance.vdcs[i].vms) t.push_back({-1.0, delta(i, vm.id, n)});
    }
    add("c11" + tag(n), std::move(t), Sense::le, 0.0);
  }
  for (const auto& link : topo.links()) {
    const NodeId a = std::min(link.a, link.b);
    const NodeId b = std::max(link.a, link.b);
    std::vector<lp::Term> t{{1.0, pi(a, b)}};
    if (auto it = link_flow.find({a, b}); it != link_flow.end()) {
      t.insert(t.end(), it->second.begin(), it->second.end());
    }
    add("c14" + tag(a, b), std::move(t), Sense::le, 0.0);
  }
  // One row per switch-link incidence covers both endpoints, since pi is
  // indexed by the undirected link.
  for (NodeId mnode = n_servers; mnode < n_nodes; ++mnode) {
    for (const auto& adj : topo.neighbors(mnode)) {
      add("c15" + tag(mnode, adj.neighbor), {{1.0, omega(mnode)}, {-1.0, pi(mnode, adj.neighbor)}}, Sense::ge, 0.0);
    }
  }
  for (NodeId n = n_servers; n < n_nodes; ++n) {
    std::vector<lp::Term> te{{1.0, q(n)}};
    std::vector<lp::Term> to{{1.0, sigma(n)}};
    for (const auto& adj : topo.neighbors(n)) {
      (topo.is_server(adj.neighbor) ? te : to).push_back({-1.0, pi(n, adj.neighbor)});
    }
    add("c17" + tag(n), std::move(te), Sense::eq, 0.0);
    add("c18" + tag(n), std::move(to), Sense::eq, 0.0);
  }
  for (const auto& srv : topo.servers()) {
    std::vector<lp::Term> t{{1.0, p(srv.id)}, {-pw.server_idle_kw, omega(srv.id)}};
    const double slope = pw.server_max_kw - pw.server_idle_kw;
    for (std::size_t i = 0; i < instance.vdcs.size(); ++i) {
      for (const auto& vm : instance.vdcs[i].vms) {
        if (vm.demand.cpu == 0) continue;
        t.push_back({-slope * static_cast<double>(vm.demand.cpu) / static_cast<double>(srv.capacity.cpu),
                     delta(i, vm.id, srv.id)});
      }
    }
    add("c19" + tag(srv.id), std::move(t), Sense::eq, 0.0);
  }
  for (NodeId n = n_servers; n < n_nodes; ++n) {
    add("c20" + tag(n),
        {{1.0, p(n)}, {-pw.switch_idle_kw, omega(n)}, {-pw.electronic_port_kw, q(n)}, {-pw.optical_port_kw, sigma(n)}},
        Sense::eq, 0.0);
  }
  const double inv_rfc = 1.0 / instance.model.thermo.rho_f_cp();
  for (const auto& rack : topo.racks()) {
    std::vector<lp::Term> t{{1.0, tout(rack.id)}};
    for (NodeId s : rack.servers) t.push_back({-inv_rfc, p(s)});
    t.push_back({-inv_rfc, p(rack.tor)});
    add("c21" + tag(rack.id), std::move(t), Sense::eq, rack.inlet_c);
  }
  for (const auto& rack : topo.racks()) {
    add("c22" + tag(rack.id), {{1.0, "T"}, {-1.0, tout(rack.id)}}, Sense::ge, 0.0);
  }

  for (NodeId n = n_servers; n < n_nodes; ++n) {
    m.generals.push_back(q(n));
    m.generals.push_back(sigma(n));
  }
  for (std::size_t i = 0; i < instance.vdcs.size(); ++i) {
    for (const auto& vm : instance.vdcs[i].vms) {
      for (NodeId n = 0; n < n_servers; ++n) m.binaries.push_back(delta(i, vm.id, n));
    }
  }
  for (NodeId n = 0; n < n_nodes; ++n) m.binaries.push_back(omega(n));
  for (const auto& link : topo.links()) m.binaries.push_back(pi(link.a, link.b));
  return m;
}

std::string emit_milp(const MilpInstance& instance) { return lp::write(build_milp(instance)); }

std::size_t expected_mu_count(const MilpInstance& instance) {
  std::size_t pairs = 0;
  for (const auto& vdc : instance.vdcs) pairs += vdc.vms.size() * (vdc.vms.size() - (vdc.vms.empty() ? 0 : 1));
  return pairs * 2 * instance.topology.links().size();
}

namespace {

struct FlatVm {
  std::size_t vdc = 0;
  std::size_t index = 0;
  ResourceVector demand;
};

struct FlatVlink {
  std::size_t vdc = 0;
  std::size_t index = 0;
  std::size_t s_flat = 0;
  std::size_t d_flat = 0;
  Mbps bandwidth = 0;
};

struct Route {
  std::vector<NodeId> nodes;
  std::vector<LinkId> links;
};

class BruteForce {
 public:
  BruteForce(const MilpInstance& instance, const BruteForceLimits& limits)
      : inst_(instance), topo_(instance.topology), limits_(limits) {
    for (std::size_t i = 0; i < inst_.vdcs.size(); ++i) {
      const auto& vdc = inst_.vdcs[i];
      const std::size_t base = vms_.size();
      for (std::size_t v = 0; v < vdc.vms.size(); ++v) vms_.push_back({i, v, vdc.vms[v].demand});
      for (std::size_t j = 0; j < vdc.vlinks.size(); ++j) {
        const auto& vl = vdc.vlinks[j];
        vlinks_.push_back({i, j, base + static_cast<std::size_t>(vdc.vm_index(vl.s)),
                           base + static_cast<std::size_t>(vdc.vm_index(vl.d)), vl.bandwidth});
      }
    }
    host_.assign(vms_.size(), -1);
    residual_.resize(topo_.server_count());
    for (const auto& s : topo_.servers()) residual_[static_cast<std::size_t>(s.id)] = s.capacity;
    cpu_.assign(topo_.server_count(), 0);
    hosted_.assign(topo_.server_count(), 0);
    load_.assign(topo_.links().size(), 0);
    used_.assign(topo_.links().size(), 0);
    choice_.assign(vlinks_.size(), 0);
    server_kw_.assign(topo_.server_count(), 0.0);
  }

  ExactSolution run() {
    ExactSolution out;
    place(0);
    out.placements_enumerated = enumerated_;
    out.feasible_placements = feasible_placements_;
    if (!found_) return out;
    out.feasible = true;
    for (std::size_t i = 0; i < inst_.vdcs.size(); ++i) {
      const auto& vdc = inst_.vdcs[i];
      Embedding e;
      e.vdc_id = vdc.id;
      for (std::size_t k = 0; k < vms_.size(); ++k) {
        if (vms_[k].vdc != i) continue;
        const auto& vm = vdc.vms[vms_[k].index];
        e.placements.push_back({vm.id, best_host_[k], vm.demand});
      }
      for (std::size_t j = 0; j < vlinks_.size(); ++j) {
        if (vlinks_[j].vdc != i) continue;
        const auto& vl = vdc.vlinks[vlinks_[j].index];
        const auto& route = routes(best_host_[vlinks_[j].s_flat], best_host_[vlinks_[j].d_flat])[best_choice_[j]];
        e.paths.push_back({vl, route.nodes, vl.bandwidth});
      }
      out.embeddings.push_back(std::move(e));
    }
    const auto metrics = evaluate_embeddings(inst_, out.embeddings);
    out.objective = metrics.objective;
    out.max_outlet_c = metrics.max_outlet_c;
    out.total_power_kw = metrics.total_power_kw;
    out.node_power_kw = metrics.node_power_kw;
    out.rack_outlet_c = metrics.rack_outlet_c;
    return out;
  }

 private:
  static constexpr double kEps = 1e-9;

  // Simple routes between two servers, in lexicographic node order, that
  // never transit another server.
  const std::vector<Route>& routes(NodeId a, NodeId b) {
    const auto key = static_cast<std::int64_t>(a) * static_cast<std::int64_t>(topo_.node_count()) + b;
    auto [it, inserted] = route_cache_.try_emplace(key);
    if (!inserted) return it->second;
    Route cur;
    cur.nodes.push_back(a);
    std::vector<bool> on_path(topo_.node_count(), false);
    on_path[static_cast<std::size_t>(a)] = true;
    extend(cur, on_path, b, it->second);
    return it->second;
  }

  void extend(Route& cur, std::vector<bool>& on_path, NodeId target, std::vector<Route>& out) {
    const NodeId at = cur.nodes.back();
    if (at == target) {
      out.push_back(cur);
      return;
    }
    if (static_cast<int>(cur.links.size()) >= limits_.max_path_hops) return;
    if (cur.nodes.size() > 1 && topo_.is_server(at)) return;
    for (const auto& adj : topo_.neighbors(at)) {
      if (on_path[static_cast<std::size_t>(adj.neighbor)]) continue;
      on_path[static_cast<std::size_t>(adj.neighbor)] = true;
      cur.nodes.push_back(adj.neighbor);
      cur.links.push_back(adj.link);
      extend(cur, on_path, target, out);
      cur.nodes.pop_back();
      cur.links.pop_back();
      on_path[static_cast<std::size_t>(adj.neighbor)] = false;
    }
  }

  void place(std::size_t k) {
    if (k == vms_.size()) {
      evaluate_placement();
      return;
    }
    const auto& vm = vms_[k];
    for (NodeId s = 0; s < static_cast<NodeId>(topo_.server_count()); ++s) {
      const auto si = static_cast<std::size_t>(s);
      if (!vm.demand.fits_in(residual_[si])) continue;
      bool clash = false;
      for (std::size_t j = 0; j < k; ++j) {
        if (vms_[j].vdc == vm.vdc && host_[j] == s) clash = true;
      }
      if (clash) continue;
      host_[k] = s;
      residual_[si] -= vm.demand;
      cpu_[si] += vm.demand.cpu;
      ++hosted_[si];
      place(k + 1);
      --hosted_[si];
      cpu_[si] -= vm.demand.cpu;
      residual_[si] += vm.demand;
      host_[k] = -1;
    }
  }

  void evaluate_placement() {
    ++enumerated_;
    const auto& pw = inst_.model.power;
    for (const auto& s : topo_.servers()) {
      const auto si = static_cast<std::size_t>(s.id);
      server_kw_[si] = hosted_[si] == 0 ? 0.0
                                        : pw.server_idle_kw + (pw.server_max_kw - pw.server_idle_kw) *
                                                                  static_cast<double>(cpu_[si]) /
                                                                  static_cast<double>(s.capacity.cpu);
    }
    if (!routable(0)) return;
    ++feasible_placements_;
    route(0);
  }

  bool fits(const Route& r, Mbps bw) const {
    for (LinkId l : r.links) {
      if (load_[static_cast<std::size_t>(l)] + bw > topo_.link(l).capacity) return false;
    }
    return true;
  }

  void apply(const Route& r, Mbps bw, int sign) {
    for (LinkId l : r.links) {
      load_[static_cast<std::size_t>(l)] += sign * bw;
      used_[static_cast<std::size_t>(l)] += sign;
    }
  }

  // First-fit search: does this placement admit any routing at all?
  bool routable(std::size_t j) {
    if (j == vlinks_.size()) return true;
    const auto& vl = vlinks_[j];
    for (const auto& r : routes(host_[vl.s_flat], host_[vl.d_flat])) {
      if (!fits(r, vl.bandwidth)) continue;
      apply(r, vl.bandwidth, +1);
      const bool ok = routable(j + 1);
      apply(r, vl.bandwidth, -1);
      if (ok) return true;
    }
    return false;
  }

  void route(std::size_t j) {
    // Adding links never lowers the objective, so a partial routing bounds
    // every completion from below.
    const double partial = objective();
    if (found_ && partial >= best_ - kEps) return;
    if (j == vlinks_.size()) {
      found_ = true;
      best_ = partial;
      best_host_ = host_;
      best_choice_ = choice_;
      return;
    }
    const auto& vl = vlinks_[j];
    const auto& options = routes(host_[vl.s_flat], host_[vl.d_flat]);
    for (std::size_t c = 0; c < options.size(); ++c) {
      if (!fits(options[c], vl.bandwidth)) continue;
      choice_[j] = c;
      apply(options[c], vl.bandwidth, +1);
      route(j + 1);
      apply(options[c], vl.bandwidth, -1);
    }
  }

  double objective() const {
    const auto& pw = inst_.model.power;
    std::vector<double> node_kw(topo_.node_count(), 0.0);
    std::copy(server_kw_.begin(), server_kw_.end(), node_kw.begin());
    std::vector<int> ports_e(topo_.node_count(), 0);
    std::vector<int> ports_o(topo_.node_count(), 0);
    for (std::size_t l = 0; l < used_.size(); ++l) {
      if (used_[l] == 0) continue;
      const auto& link = topo_.link(static_cast<LinkId>(l));
      const bool access = topo_.is_server(link.a) || topo_.is_server(link.b);
      for (NodeId end : {link.a, link.b}) {
        if (topo_.is_server(end)) continue;
        ++(access ? ports_e : ports_o)[static_cast<std::size_t>(end)];
      }
    }
    double total = 0.0;
    for (std::size_t n = 0; n < node_kw.size(); ++n) {
      if (n >= topo_.server_count() && ports_e[n] + ports_o[n] > 0) {
        node_kw[n] = pw.switch_idle_kw + ports_e[n] * pw.electronic_port_kw + ports_o[n] * pw.optical_port_kw;
      }
      total += node_kw[n];
    }
    double hottest = -std::numeric_limits<double>::infinity();
    for (const auto& rack : topo_.racks()) {
      double p = node_kw[static_cast<std::size_t>(rack.tor)];
      for (NodeId s : rack.servers) p += node_kw[static_cast<std::size_t>(s)];
      hottest = std::max(hottest, rack.inlet_c + p / inst_.model.thermo.rho_f_cp());
    }
    return hottest + inst_.alpha * total;
  }

  const MilpInstance& inst_;
  const DataCenterState& topo_;
  BruteForceLimits limits_;
  std::vector<FlatVm> vms_;
  std::vector<FlatVlink> vlinks_;
  std::vector<NodeId> host_;
  std::vector<ResourceVector> residual_;
  std::vector<std::int64_t> cpu_;
  std::vector<int> hosted_;
  std::vector<Mbps> load_;
  std::vector<int> used_;
  std::vector<std::size_t> choice_;
  std::vector<double> server_kw_;
  std::unordered_map<std::int64_t, std::vector<Route>> route_cache_;

  bool found_ = false;
  double best_ = 0.0;
  std::vector<NodeId> best_host_;
  std::vector<std::size_t> best_choice_;
  std::uint64_t enumerated_ = 0;
  std::uint64_t feasible_placements_ = 0;
};

}  // namespace

ExactSolution brute_force_optimal(const MilpInstance& instance, const BruteForceLimits& limits) {
  instance.validate();
  if (limits.max_path_hops < 1) throw InputError("brute force: max_path_hops must be >= 1");
  std::size_t n_vms = 0;
  for (const auto& vdc : instance.vdcs) n_vms += vdc.vms.size();
  const auto servers = static_cast<std::uint64_t>(instance.topology.server_count());
  std::uint64_t bound = 1;
  bool over = n_vms > limits.max_vms;
  for (std::size_t k = 0; k < n_vms && !over; ++k) {
    if (bound > limits.max_placements / std::max<std::uint64_t>(servers, 1)) over = true;
    bound *= servers;
  }
  if (over || bound > limits.max_placements) {
    throw SizeLimitError("brute force: " + std::to_string(n_vms) + " VMs over " + std::to_string(servers) +
                         " servers exceeds the enumeration budget (max_vms=" + std::to_string(limits.max_vms) +
                         ", max_placements=" + std::to_string(limits.max_placements) + ")");
  }
  return BruteForce(instance, limits).run();
}

}  // namespace tavdc
