#include "tavdc/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "tavdc/error.hpp"

namespace tavdc {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// JSON has no infinity; thresholds may be unbounded.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename F>
void for_each_line(std::istream& is, F fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

json to_json(const VdcRequest& vdc) {
  json vms = json::array();
  for (const auto& vm : vdc.vms) {
    vms.push_back({{"id", vm.id}, {"cpu", vm.demand.cpu}, {"mem", vm.demand.mem}, {"disk", vm.demand.disk}});
  }
  json vlinks = json::array();
  for (const auto& vl : vdc.vlinks) vlinks.push_back({{"s", vl.s}, {"d", vl.d}, {"bw", vl.bandwidth}});
  return {{"id", vdc.id}, {"arrival", vdc.arrival_time}, {"holding", vdc.holding_time}, {"vms", vms}, {"vlinks", vlinks}};
}

VdcRequest vdc_from_json(const json& j) {
  VdcRequest vdc;
  vdc.id = j.at("id").get<VdcId>();
  vdc.arrival_time = j.value("arrival", 0.0);
  vdc.holding_time = j.value("holding", 0.0);
  for (const auto& vm : j.at("vms")) {
    vdc.vms.push_back({vm.at("id").get<VmId>(),
                       {vm.at("cpu").get<std::int64_t>(), vm.at("mem").get<std::int64_t>(), vm.at("disk").get<std::int64_t>()}});
  }
  for (const auto& vl : j.at("vlinks")) {
    vdc.vlinks.push_back({vl.at("s").get<VmId>(), vl.at("d").get<VmId>(), vl.at("bw").get<Mbps>()});
  }
  return vdc;
}

json to_json(const Embedding& e) {
  json placements = json::array();
  for (const auto& p : e.placements) {
    placements.push_back({{"vm", p.vm}, {"server", p.server}, {"cpu", p.demand.cpu}, {"mem", p.demand.mem}, {"disk", p.demand.disk}});
  }
  json paths = json::array();
  for (const auto& p : e.paths) {
    paths.push_back({{"s", p.vlink.s}, {"d", p.vlink.d}, {"bw", p.vlink.bandwidth}, {"reserved_mbps", p.bandwidth}, {"nodes", p.nodes}});
  }
  return {{"vdc_id", e.vdc_id}, {"placements", placements}, {"paths", paths}};
}

Embedding embedding_from_json(const json& j) {
  Embedding e;
  e.vdc_id = j.at("vdc_id").get<VdcId>();
  for (const auto& p : j.at("placements")) {
    e.placements.push_back({p.at("vm").get<VmId>(), p.at("server").get<NodeId>(),
                            {p.at("cpu").get<std::int64_t>(), p.at("mem").get<std::int64_t>(), p.at("disk").get<std::int64_t>()}});
  }
  for (const auto& p : j.at("paths")) {
    LinkPath lp;
    lp.vlink = {p.at("s").get<VmId>(), p.at("d").get<VmId>(), p.at("bw").get<Mbps>()};
    lp.bandwidth = p.at("reserved_mbps").get<Mbps>();
    lp.nodes = p.at("nodes").get<std::vector<NodeId>>();
    e.paths.push_back(std::move(lp));
  }
  return e;
}

void write_vdcs_jsonl(std::ostream& os, const std::vector<VdcRequest>& vdcs) {
  for (const auto& v : vdcs) os << to_json(v).dump() << '\n';
}

std::vector<VdcRequest> read_vdcs_jsonl(std::istream& is) {
  std::vector<VdcRequest> out;
  for_each_line(is, [&out](const json& j) { out.push_back(vdc_from_json(j)); });
  return out;
}

void write_embeddings_jsonl(std::ostream& os, const std::vector<Embedding>& embeddings) {
  for (const auto& e : embeddings) os << to_json(e).dump() << '\n';
}

std::vector<Embedding> read_embeddings_jsonl(std::istream& is) {
  std::vector<Embedding> out;
  for_each_line(is, [&out](const json& j) { out.push_back(embedding_from_json(j)); });
  return out;
}

void write_trace_jsonl(std::ostream& os, const EventTrace& trace) {
  for (const auto& v : trace.requests) {
    json j = to_json(v);
    j["type"] = "vdc";
    os << j.dump() << '\n';
  }
  for (const auto& ev : trace.events) {
    os << json{{"type", "event"}, {"t", ev.time}, {"kind", ev.kind == EventKind::arrive ? "arrive" : "depart"}, {"vdc", ev.vdc_id}}.dump()
       << '\n';
  }
}

EventTrace read_trace_jsonl(std::istream& is) {
  EventTrace trace;
  for_each_line(is, [&trace](const json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "vdc") {
      trace.requests.push_back(vdc_from_json(j));
    } else if (type == "event") {
      const auto kind = j.at("kind").get<std::string>();
      if (kind != "arrive" && kind != "depart") throw InputError("unknown event kind '" + kind + "'");
      trace.events.push_back({j.at("t").get<double>(), kind == "arrive" ? EventKind::arrive : EventKind::depart,
                              j.at("vdc").get<VdcId>()});
    } else {
      throw InputError("unknown record type '" + type + "'");
    }
  });
  trace.validate();
  return trace;
}

void write_nodes_csv(std::ostream& os, const DataCenterState& state) {
  os << "node_id,kind,rack_id,cpu,mem,disk,inlet_c\n";
  for (std::size_t n = 0; n < state.node_count(); ++n) {
    const auto id = static_cast<NodeId>(n);
    const auto rack = state.rack_of(id);
    os << id << ',' << to_string(state.kind(id)) << ',' << (rack ? std::to_string(*rack) : std::string());
    if (state.is_server(id)) {
      const auto& cap = state.server(id).capacity;
      os << ',' << cap.cpu << ',' << cap.mem << ',' << cap.disk;
    } else {
      os << ",,,";
    }
    os << ',' << (rack ? format_double(state.rack(*rack).inlet_c) : std::string()) << '\n';
  }
}

void write_links_csv(std::ostream& os, const DataCenterState& state) {
  os << "link_id,a,b,capacity_mbps,medium\n";
  for (std::size_t l = 0; l < state.links().size(); ++l) {
    const auto& link = state.links()[l];
    os << l << ',' << link.a << ',' << link.b << ',' << link.capacity << ',' << to_string(link.medium) << '\n';
  }
}

void write_racks_csv(std::ostream& os, const ThermalReport& report) {
  os << "rack_id,active,power_kw,t_in_c,t_out_c\n";
  for (const auto& r : report.racks) {
    os << r.rack << ',' << (r.active ? 1 : 0) << ',' << format_double(r.power_kw) << ',' << format_double(r.inlet_c)
       << ',' << format_double(r.outlet_c) << '\n';
  }
}

void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os << "lower_c,upper_c,racks\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    os << format_double(h.bin_lower(k)) << ',' << format_double(h.bin_upper(k)) << ',' << h.counts[k] << '\n';
  }
}

void write_series_csv(std::ostream& os, const std::vector<SeriesPoint>& series) {
  os << "t_h,max_out_c,min_out_c,max_active_out_c,min_active_out_c\n";
  for (const auto& p : series) {
    os << format_double(p.t) << ',' << format_double(p.max_outlet_c) << ',' << format_double(p.min_outlet_c) << ','
       << format_double(p.max_active_outlet_c) << ',' << format_double(p.min_active_outlet_c) << '\n';
  }
}

json topology_summary(const DataCenterState& state) {
  std::size_t counts[4] = {0, 0, 0, 0};
  for (std::size_t n = 0; n < state.node_count(); ++n) ++counts[static_cast<int>(state.kind(static_cast<NodeId>(n)))];
  std::size_t electronic = 0;
  for (const auto& l : state.links()) electronic += l.medium == LinkMedium::electronic ? 1 : 0;
  return {{"nodes", state.node_count()}, {"servers", counts[0]}, {"tor", counts[1]}, {"aggregation", counts[2]},
          {"core", counts[3]}, {"links", state.links().size()}, {"electronic_links", electronic},
          {"optical_links", state.links().size() - electronic}, {"racks", state.racks().size()}};
}

json to_json(const ThermalReport& report) {
  json racks = json::array();
  for (const auto& r : report.racks) {
    racks.push_back({{"rack_id", r.rack}, {"active", r.active}, {"power_kw", r.power_kw}, {"t_in_c", r.inlet_c}, {"t_out_c", r.outlet_c}});
  }
  return {{"racks", racks}, {"max_outlet_c", report.max_outlet_c}, {"total_it_power_kw", report.total_it_power_kw}};
}

json to_json(const Histogram& h) {
  json bins = json::array();
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    bins.push_back({{"lower_c", h.bin_lower(k)}, {"upper_c", h.bin_upper(k)}, {"racks", h.counts[k]}});
  }
  return {{"width_c", h.width_c}, {"bins", bins}};
}

json summary_json(const StaticReport& r) {
  json outcomes = json::array();
  for (const auto& o : r.outcomes) outcomes.push_back({{"vdc_id", o.id}, {"embedded", o.embedded}, {"failure", to_string(o.failure)}});
  return {{"algorithm", to_string(r.algorithm)},
          {"embedded", r.embedded},
          {"failed", r.failed},
          {"max_outlet_c", r.max_outlet_c},
          {"min_outlet_c", r.thermal.min_outlet_c()},
          {"max_active_outlet_c", r.thermal.max_active_outlet_c()},
          {"min_active_outlet_c", r.thermal.min_active_outlet_c()},
          {"active_spread_c", r.active_spread_c},
          {"total_it_power_kw", r.total_it_power_kw},
          {"histogram", to_json(r.histogram)},
          {"racks", to_json(r.thermal)["racks"]},
          {"outcomes", outcomes}};
}

json summary_json(const DynamicReport& r) {
  return {{"algorithm", to_string(r.algorithm)},
          {"threshold_c", number_or_null(r.threshold_c)},
          {"warmup", r.warmup},
          {"arrivals", r.arrivals},
          {"accepted", r.accepted},
          {"rejected", r.rejected()},
          {"rejected_resources", r.rejected_resources},
          {"rejected_temperature", r.rejected_temperature},
          {"measured_arrivals", r.measured_arrivals},
          {"measured_rejections", r.measured_rejections},
          {"rejection_ratio", r.rejection_ratio()},
          {"mean_power_kw", r.mean_power_kw},
          {"mean_gap_c", r.mean_gap_c},
          {"mean_active_gap_c", r.mean_active_gap_c},
          {"window_h", r.window_h},
          {"pristine_at_end", r.pristine_at_end}};
}

json to_json(const ExactSolution& s) {
  json embeddings = json::array();
  for (const auto& e : s.embeddings) embeddings.push_back(to_json(e));
  return {{"feasible", s.feasible},
          {"objective", s.objective},
          {"max_outlet_c", s.max_outlet_c},
          {"total_power_kw", s.total_power_kw},
          {"node_power_kw", s.node_power_kw},
          {"rack_outlet_c", s.rack_outlet_c},
          {"feasible_placements", s.feasible_placements},
          {"placements_enumerated", s.placements_enumerated},
          {"embeddings", embeddings}};
}

json to_json(const ValidationReport& r) {
  json families = json::array();
  for (const auto& f : r.families) {
    families.push_back({{"family", f.family}, {"pass", f.pass()}, {"checked", f.checked}, {"violated", f.violated},
                        {"first_violation", f.first_violation}});
  }
  return {{"ok", r.ok()}, {"objective", r.recomputed.objective}, {"max_outlet_c", r.recomputed.max_outlet_c},
          {"families", families}};
}

}  // namespace tavdc
