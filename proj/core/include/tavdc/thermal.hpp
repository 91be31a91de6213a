#pragma once

#include <vector>

#include "tavdc/topology.hpp"

namespace tavdc {

// Air properties converting rack power into a temperature rise.
struct ThermoConstants {
  double rho = 1.19;       // kg/m^3
  double airflow = 0.2454; // m^3/s
  double cp = 1.005;       // kJ/(kg*C)

  // kW per degree C.
  double rho_f_cp() const { return rho * airflow * cp; }
  void validate() const;
  bool operator==(const ThermoConstants&) const = default;
};

// All values in kW.
struct PowerModel {
  double server_idle_kw = 0.2;
  double server_max_kw = 0.5;
  double switch_idle_kw = 0.04;
  double electronic_port_kw = 0.01;
  double optical_port_kw = 0.08;

  void validate() const;
  bool operator==(const PowerModel&) const = default;
};

struct ThermalModel {
  PowerModel power;
  ThermoConstants thermo;
  bool operator==(const ThermalModel&) const = default;
};

// Inactive servers draw nothing; active ones idle power plus a term linear in
// the allocated CPU fraction.
double server_power(const ServerState& server, const PowerModel& model);

// Inactive switches draw nothing; active ones idle power plus per-port power.
double switch_power(const SwitchState& sw, const PowerModel& model);

// Servers of the rack plus its ToR switch.
double rack_power(const Rack& rack, const DataCenterState& state, const PowerModel& model);

double outlet_temperature(double inlet_c, double rack_power_kw, const ThermoConstants& thermo);

double rack_outlet_temperature(const Rack& rack, const DataCenterState& state, const ThermalModel& model);

struct RackThermal {
  RackId rack = 0;
  double power_kw = 0.0;
  double inlet_c = 0.0;
  double outlet_c = 0.0;
  // At least one server or the ToR is powered on.
  bool active = false;
};

struct ThermalReport {
  std::vector<RackThermal> racks;
  double max_outlet_c = 0.0;
  double total_it_power_kw = 0.0;

  // Extremes over active racks only; both fall back to the all-rack values
  // when no rack is active.
  double max_active_outlet_c() const;
  double min_active_outlet_c() const;
  double min_outlet_c() const;
};

// Aggregation and core switches count toward total power but belong to no
// rack, so they never affect an outlet temperature.
ThermalReport thermal_report(const DataCenterState& state, const ThermalModel& model);

}  // namespace tavdc
