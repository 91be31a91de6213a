#include "tavdc/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tavdc/error.hpp"

namespace tavdc {

void ThermoConstants::validate() const {
  if (!(rho > 0.0 && airflow > 0.0 && cp > 0.0)) {
    throw ConfigError("thermal constants must be strictly positive");
  }
}

void PowerModel::validate() const {
  if (!(server_idle_kw >= 0.0 && server_max_kw >= server_idle_kw)) {
    throw ConfigError("power model: need server_max_kw >= server_idle_kw >= 0");
  }
  if (!(switch_idle_kw >= 0.0 && electronic_port_kw >= 0.0 && optical_port_kw >= 0.0)) {
    throw ConfigError("power model: switch and port powers must be non-negative");
  }
}

double server_power(const ServerState& server, const PowerModel& model) {
  const auto allocated = server.allocated_cpu();
  if (allocated < 0 || allocated > server.capacity.cpu) {
    throw StateError("server " + std::to_string(server.id) + ": allocated CPU outside [0, capacity]");
  }
  if (!server.active) return 0.0;
  const double utilization = static_cast<double>(allocated) / static_cast<double>(server.capacity.cpu);
  return model.server_idle_kw + (model.server_max_kw - model.server_idle_kw) * utilization;
}

double switch_power(const SwitchState& sw, const PowerModel& model) {
  if (!sw.active) return 0.0;
  return model.switch_idle_kw + sw.used_electronic_ports * model.electronic_port_kw +
         sw.used_optical_ports * model.optical_port_kw;
}

double rack_power(const Rack& rack, const DataCenterState& state, const PowerModel& model) {
  double p = 0.0;
  for (NodeId s : rack.servers) p += server_power(state.server(s), model);
  return p + switch_power(state.switch_node(rack.tor), model);
}

double outlet_temperature(double inlet_c, double rack_power_kw, const ThermoConstants& thermo) {
  return inlet_c + rack_power_kw / thermo.rho_f_cp();
}

double rack_outlet_temperature(const Rack& rack, const DataCenterState& state, const ThermalModel& model) {
  return outlet_temperature(rack.inlet_c, rack_power(rack, state, model.power), model.thermo);
}

double ThermalReport::max_active_outlet_c() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : racks) {
    if (r.active) m = std::max(m, r.outlet_c);
  }
  return std::isinf(m) ? max_outlet_c : m;
}

double ThermalReport::min_active_outlet_c() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : racks) {
    if (r.active) m = std::min(m, r.outlet_c);
  }
  return std::isinf(m) ? min_outlet_c() : m;
}

double ThermalReport::min_outlet_c() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : racks) m = std::min(m, r.outlet_c);
  return m;
}

ThermalReport thermal_report(const DataCenterState& state, const ThermalModel& model) {
  ThermalReport report;
  report.racks.reserve(state.racks().size());
  report.max_outlet_c = -std::numeric_limits<double>::infinity();
  for (const auto& rack : state.racks()) {
    RackThermal rt;
    rt.rack = rack.id;
    rt.inlet_c = rack.inlet_c;
    rt.power_kw = rack_power(rack, state, model.power);
    rt.outlet_c = outlet_temperature(rack.inlet_c, rt.power_kw, model.thermo);
    rt.active = state.switch_node(rack.tor).active ||
                std::any_of(rack.servers.begin(), rack.servers.end(),
                            [&state](NodeId s) { return state.server(s).active; });
    report.max_outlet_c = std::max(report.max_outlet_c, rt.outlet_c);
    report.racks.push_back(rt);
  }
  double total = 0.0;
  for (const auto& s : state.servers()) total += server_power(s, model.power);
  for (const auto& sw : state.switches()) total += switch_power(sw, model.power);
  report.total_it_power_kw = total;
  return report;
}

}  // namespace tavdc
