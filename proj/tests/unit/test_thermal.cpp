#include <gtest/gtest.h>

#include "support.hpp"
#include "tavdc/embedding.hpp"
#include "tavdc/error.hpp"
#include "tavdc/thermal.hpp"

namespace tavdc {
namespace {

constexpr double kRhoFCp = 1.19 * 0.2454 * 1.005;

TEST(Thermal, ServerPowerIsIdlePlusLinearCpuTerm) {
  ServerState s;
  s.capacity = {100, 1000, 10000};
  s.residual = {50, 1000, 10000};
  s.active = true;
  EXPECT_DOUBLE_EQ(server_power(s, PowerModel{}), 0.35);
  s.residual.cpu = 100;
  EXPECT_DOUBLE_EQ(server_power(s, PowerModel{}), 0.2);
  s.residual.cpu = 0;
  EXPECT_DOUBLE_EQ(server_power(s, PowerModel{}), 0.5);
}

TEST(Thermal, InactiveEquipmentDrawsNothing) {
  ServerState s;
  s.capacity = s.residual = {100, 1000, 10000};
  EXPECT_EQ(server_power(s, PowerModel{}), 0.0);
  SwitchState sw;
  EXPECT_EQ(switch_power(sw, PowerModel{}), 0.0);
}

TEST(Thermal, OverAllocatedServerIsRejected) {
  ServerState s;
  s.capacity = {100, 1000, 10000};
  s.residual = {-1, 1000, 10000};
  s.active = true;
  EXPECT_THROW(server_power(s, PowerModel{}), StateError);
}

TEST(Thermal, SwitchPowerCountsPortsByMedium) {
  SwitchState sw;
  sw.active = true;
  sw.used_electronic_ports = 3;
  sw.used_optical_ports = 2;
  EXPECT_NEAR(switch_power(sw, PowerModel{}), 0.04 + 3 * 0.01 + 2 * 0.08, 1e-15);
  EXPECT_NEAR(switch_power(sw, PowerModel{}), 0.23, 1e-12);
}

TEST(Thermal, OutletRisePerKilowatt) {
  ThermoConstants k;
  EXPECT_NEAR(k.rho_f_cp(), 0.29348613, 1e-15);
  const double rise = outlet_temperature(0.0, 1.0, k);
  EXPECT_NEAR(rise * 0.2934861, 1.0, 1e-6);
  EXPECT_NEAR(rise, 1.0 / kRhoFCp, 1e-9 / kRhoFCp);
  EXPECT_DOUBLE_EQ(outlet_temperature(18.0, 0.0, k), 18.0);
}

TEST(Thermal, InvalidConstantsAreRejected) {
  ThermoConstants k;
  k.airflow = 0.0;
  EXPECT_THROW(k.validate(), ConfigError);
  PowerModel p;
  p.server_max_kw = 0.1;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Thermal, EmptyDataCenterSitsAtInletTemperature) {
  auto state = test::fixed_inlets(test::tiny_topology(), {17.0, 19.5});
  const auto report = thermal_report(state, ThermalModel{});
  EXPECT_EQ(report.total_it_power_kw, 0.0);
  EXPECT_EQ(report.max_outlet_c, 19.5);
  EXPECT_EQ(report.min_outlet_c(), 17.0);
  EXPECT_FALSE(report.racks[0].active);
}

TEST(Thermal, ReportMatchesHandComputation) {
  auto state = test::fixed_inlets(test::tiny_topology(), {17.0, 17.5});
  // The first VM heats rack 0 past rack 1, so the second lands in rack 1.
  const auto vdc = test::chain_vdc(0, {40, 40}, 10);
  const auto result = embed_temperature_aware(state, vdc, ThermalModel{});
  ASSERT_TRUE(result);
  const auto& e = *result.embedding;
  const auto report = thermal_report(state, ThermalModel{});

  // Server: 0.2 + 0.3 * 0.4. ToR: idle + one server port + one uplink.
  const double server = 0.2 + 0.3 * 0.4;
  const double tor = 0.04 + 0.01 + 0.08;
  const NodeId h0 = e.host_of(0), h1 = e.host_of(1);
  ASSERT_NE(state.server(h0).rack, state.server(h1).rack);
  const auto hops = static_cast<int>(e.paths[0].nodes.size()) - 1;
  ASSERT_EQ(hops, 4);  // server, ToR, agg, ToR, server
  for (const auto& r : report.racks) {
    EXPECT_NEAR(r.power_kw, server + tor, 1e-12);
    EXPECT_NEAR(r.outlet_c, r.inlet_c + (server + tor) / kRhoFCp, 1e-12);
    EXPECT_TRUE(r.active);
  }
  // The aggregation switch joining both ToRs has two optical ports.
  const double agg = 0.04 + 2 * 0.08;
  EXPECT_NEAR(report.total_it_power_kw, 2 * (server + tor) + agg, 1e-12);
}

}  // namespace
}  // namespace tavdc
