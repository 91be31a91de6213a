#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "tavdc/error.hpp"
#include "tavdc/exactopt.hpp"

namespace tavdc {

namespace {

class FamilyTable {
 public:
  explicit FamilyTable(std::vector<std::string> order) {
    for (auto& name : order) {
      index_.emplace(name, rows_.size());
      rows_.push_back({std::move(name), 0, 0, {}});
    }
  }

  void check(const std::string& family, bool ok, const std::string& where) {
    auto& row = rows_.at(index_.at(family));
    ++row.checked;
    if (!ok) {
      if (row.violated == 0) row.first_violation = where;
      ++row.violated;
    }
  }

  std::vector<FamilyResult> take() { return std::move(rows_); }

 private:
  std::vector<FamilyResult> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

}  // namespace

bool ValidationReport::ok() const {
  return std::all_of(families.begin(), families.end(), [](const FamilyResult& f) { return f.pass(); });
}

const FamilyResult& ValidationReport::family(std::string_view name) const {
  for (const auto& f : families) {
    if (f.family == name) return f;
  }
  throw std::out_of_range("no constraint family " + std::string(name));
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& f : families) {
    os << f.family << ": " << (f.pass() ? "pass" : "FAIL") << " (" << f.checked << " checked";
    if (!f.pass()) os << ", " << f.violated << " violated, first " << f.first_violation;
    os << ")\n";
  }
  return os.str();
}

Candidate to_candidate(const ExactSolution& solution) {
  Candidate c;
  c.embeddings = solution.embeddings;
  c.max_outlet_c = solution.max_outlet_c;
  c.objective = solution.objective;
  c.node_power_kw = solution.node_power_kw;
  c.rack_outlet_c = solution.rack_outlet_c;
  return c;
}

ValidationReport validate_solution(const MilpInstance& instance, const Candidate& candidate, double tol) {
  instance.validate();
  const auto& topo = instance.topology;
  FamilyTable table({"3", "4", "5", "6", "7", "8", "9", "19", "20", "21", "22", "objective"});

  std::unordered_map<VdcId, std::size_t> vdc_index;
  for (std::size_t i = 0; i < instance.vdcs.size(); ++i) vdc_index.emplace(instance.vdcs[i].id, i);
  std::vector<const Embedding*> by_vdc(instance.vdcs.size(), nullptr);
  for (const auto& e : candidate.embeddings) {
    auto it = vdc_index.find(e.vdc_id);
    if (it == vdc_index.end()) throw InputError("candidate: unknown VDC " + std::to_string(e.vdc_id));
    if (by_vdc[it->second]) throw InputError("candidate: VDC " + std::to_string(e.vdc_id) + " embedded twice");
    by_vdc[it->second] = &e;
    const auto& vdc = instance.vdcs[it->second];
    for (const auto& pl : e.placements) {
      if (vdc.vm_index(pl.vm) < 0) throw InputError("candidate: VDC " + std::to_string(vdc.id) + " has no VM " + std::to_string(pl.vm));
      if (!topo.is_node(pl.server)) throw InputError("candidate: unknown node " + std::to_string(pl.server));
    }
    for (const auto& path : e.paths) {
      if (std::find(vdc.vlinks.begin(), vdc.vlinks.end(), path.vlink) == vdc.vlinks.end()) {
        throw InputError("candidate: VDC " + std::to_string(vdc.id) + " has no such virtual link");
      }
      for (NodeId n : path.nodes) {
        if (!topo.is_node(n)) throw InputError("candidate: unknown node " + std::to_string(n));
      }
    }
  }

  // Layout with broken paths and non-server placements removed, so the
  // recomputation below sees only well-formed elements.
  std::vector<Embedding> clean;
  std::vector<Mbps> link_load(topo.links().size(), 0);
  std::vector<ResourceVector> server_load(topo.server_count());
  for (std::size_t i = 0; i < instance.vdcs.size(); ++i) {
    const auto& vdc = instance.vdcs[i];
    const Embedding* e = by_vdc[i];
    const std::string tag = "vdc " + std::to_string(vdc.id);
    Embedding kept;
    kept.vdc_id = vdc.id;

    std::map<VmId, std::vector<NodeId>> hosts;
    if (e) {
      for (const auto& pl : e->placements) hosts[pl.vm].push_back(pl.server);
    }
    for (const auto& vm : vdc.vms) {
      const auto& h = hosts[vm.id];
      const bool one_server = h.size() == 1 && topo.is_server(h.front());
      table.check("3", one_server, tag + " vm " + std::to_string(vm.id));
    }
    if (e) {
      std::map<NodeId, int> per_server;
      for (const auto& pl : e->placements) {
        table.check("4", ++per_server[pl.server] == 1, tag + " server " + std::to_string(pl.server));
        if (!topo.is_server(pl.server)) continue;
        const auto& truth = vdc.vms[static_cast<std::size_t>(vdc.vm_index(pl.vm))].demand;
        table.check("5", pl.demand == truth, tag + " vm " + std::to_string(pl.vm) + " reserved demand differs");
        server_load[static_cast<std::size_t>(pl.server)] += truth;
        kept.placements.push_back(pl);
      }
    }
    auto host = [&hosts](VmId vm) -> NodeId {
      auto it = hosts.find(vm);
      return it != hosts.end() && it->second.size() == 1 ? it->second.front() : -1;
    };

    for (const auto& vl : vdc.vlinks) {
      const auto n = e ? std::count_if(e->paths.begin(), e->paths.end(), [&vl](const LinkPath& p) { return p.vlink == vl; }) : 0;
      table.check("6", n == 1, tag + " vlink " + std::to_string(vl.s) + "-" + std::to_string(vl.d) + " has " + std::to_string(n) + " routes");
    }
    if (!e) {
      clean.push_back(std::move(kept));
      continue;
    }
    for (const auto& path : e->paths) {
      const std::string where = tag + " vlink " + std::to_string(path.vlink.s) + "-" + std::to_string(path.vlink.d);
      const bool ends = !path.nodes.empty() && path.nodes.front() == host(path.vlink.s) &&
                        path.nodes.back() == host(path.vlink.d) && path.bandwidth == path.vlink.bandwidth;
      table.check("6", ends, where);
      bool contiguous = path.nodes.size() >= 2;
      for (std::size_t h = 0; h + 1 < path.nodes.size(); ++h) {
        if (!topo.link_between(path.nodes[h], path.nodes[h + 1])) contiguous = false;
        if (h > 0 && topo.is_server(path.nodes[h])) contiguous = false;
      }
      table.check("7", contiguous, where);
      table.check("8", true, where);
      if (!contiguous) continue;
      for (std::size_t h = 0; h + 1 < path.nodes.size(); ++h) {
        link_load[static_cast<std::size_t>(*topo.link_between(path.nodes[h], path.nodes[h + 1]))] += path.bandwidth;
      }
      kept.paths.push_back(path);
    }
    clean.push_back(std::move(kept));
  }

  for (const auto& s : topo.servers()) {
    table.check("5", server_load[static_cast<std::size_t>(s.id)].fits_in(s.capacity), "server " + std::to_string(s.id));
  }
  for (std::size_t l = 0; l < link_load.size(); ++l) {
    const auto& link = topo.link(static_cast<LinkId>(l));
    table.check("9", link_load[l] <= link.capacity, "link " + std::to_string(link.a) + "-" + std::to_string(link.b));
  }

  ValidationReport report;
  report.recomputed = evaluate_embeddings(instance, clean);
  const auto& m = report.recomputed;

  if (candidate.node_power_kw) {
    if (candidate.node_power_kw->size() != topo.node_count()) throw InputError("candidate: node power vector has wrong size");
    for (std::size_t n = 0; n < topo.node_count(); ++n) {
      const bool ok = close((*candidate.node_power_kw)[n], m.node_power_kw[n], tol);
      table.check(topo.is_server(static_cast<NodeId>(n)) ? "19" : "20", ok, "node " + std::to_string(n));
    }
  }
  if (candidate.rack_outlet_c) {
    if (candidate.rack_outlet_c->size() != m.rack_outlet_c.size()) throw InputError("candidate: rack outlet vector has wrong size");
    for (std::size_t k = 0; k < m.rack_outlet_c.size(); ++k) {
      table.check("21", close((*candidate.rack_outlet_c)[k], m.rack_outlet_c[k], tol), "rack " + std::to_string(k));
    }
  }
  const double t_reported = candidate.max_outlet_c.value_or(m.max_outlet_c);
  for (std::size_t k = 0; k < m.rack_outlet_c.size(); ++k) {
    table.check("22", t_reported >= m.rack_outlet_c[k] - tol * std::max(1.0, std::fabs(m.rack_outlet_c[k])),
                "rack " + std::to_string(k));
  }
  if (candidate.objective) {
    table.check("objective", close(*candidate.objective, t_reported + instance.alpha * m.total_power_kw, tol), "objective");
  }
  report.families = table.take();
  return report;
}

lp::Assignment to_assignment(const MilpInstance& instance, std::span<const Embedding> embeddings) {
  using namespace milp_names;
  const auto& topo = instance.topology;
  const auto m = evaluate_embeddings(instance, embeddings);
  lp::Assignment values;

  std::unordered_map<VdcId, const Embedding*> by_id;
  for (const auto& e : embeddings) by_id.emplace(e.vdc_id, &e);
  std::vector<bool> server_on(topo.server_count(), false);
  for (std::size_t i = 0; i < instance.vdcs.size(); ++i) {
    const auto& vdc = instance.vdcs[i];
    auto it = by_id.find(vdc.id);
    const Embedding* e = it == by_id.end() ? nullptr : it->second;
    for (const auto& vm : vdc.vms) {
      const NodeId h = e ? e->host_of(vm.id) : -1;
      for (NodeId n = 0; n < static_cast<NodeId>(topo.server_count()); ++n) values[delta(i, vm.id, n)] = h == n ? 1.0 : 0.0;
      if (h >= 0 && topo.is_server(h)) server_on[static_cast<std::size_t>(h)] = true;
    }
    if (!e) continue;
    for (const auto& path : e->paths) {
      for (std::size_t h = 0; h + 1 < path.nodes.size(); ++h) {
        const NodeId a = path.nodes[h];
        const NodeId b = path.nodes[h + 1];
        values[mu(i, path.vlink.s, path.vlink.d, a, b)] += static_cast<double>(path.bandwidth);
        values[mu(i, path.vlink.d, path.vlink.s, b, a)] += static_cast<double>(path.bandwidth);
      }
    }
  }
  for (const auto& s : topo.servers()) values[omega(s.id)] = server_on[static_cast<std::size_t>(s.id)] ? 1.0 : 0.0;
  for (const auto& sw : topo.switches()) {
    const auto k = static_cast<std::size_t>(sw.id);
    values[omega(sw.id)] = m.electronic_ports[k] + m.optical_ports[k] > 0 ? 1.0 : 0.0;
    values[q(sw.id)] = m.electronic_ports[k];
    values[sigma(sw.id)] = m.optical_ports[k];
  }
  for (std::size_t l = 0; l < topo.links().size(); ++l) {
    const auto& link = topo.link(static_cast<LinkId>(l));
    values[pi(link.a, link.b)] = m.link_used[l] ? 1.0 : 0.0;
  }
  for (std::size_t n = 0; n < topo.node_count(); ++n) values[p(static_cast<NodeId>(n))] = m.node_power_kw[n];
  for (std::size_t k = 0; k < m.rack_outlet_c.size(); ++k) values[tout(static_cast<RackId>(k))] = m.rack_outlet_c[k];
  values["T"] = m.max_outlet_c;
  // Not a model variable: the reported objective value, checked on its own.
  values[lp::Model{}.objective_name] = m.objective;
  return values;
}

ValidationReport validate_assignment(const MilpInstance& instance, const lp::Assignment& values, double tol) {
  const auto model = build_milp(instance);
  const auto ev = lp::evaluate(model, values, tol);
  std::vector<std::pair<std::string, lp::FamilyCheck>> rows(ev.families.begin(), ev.families.end());
  auto rank = [](const std::string& f) {
    const bool numeric = !f.empty() && std::all_of(f.begin(), f.end(), [](char c) { return c >= '0' && c <= '9'; });
    return numeric ? std::stoi(f) : 1000;
  };
  std::stable_sort(rows.begin(), rows.end(), [&rank](const auto& a, const auto& b) { return rank(a.first) < rank(b.first); });

  ValidationReport report;
  for (const auto& [name, check] : rows) report.families.push_back({name, check.checked, check.violated, check.first_violation});
  if (auto it = values.find(model.objective_name); it != values.end()) {
    report.families.push_back({"objective", 1, close(it->second, ev.objective, tol) ? 0u : 1u, "objective"});
  }
  report.recomputed.objective = ev.objective;
  if (auto it = values.find("T"); it != values.end()) report.recomputed.max_outlet_c = it->second;
  return report;
}

}  // namespace tavdc
