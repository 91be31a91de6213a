#include "tavdc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tavdc/error.hpp"

namespace tavdc {

int Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

Histogram outlet_histogram(const ThermalReport& report, double width_c) {
  if (!(width_c > 0.0)) throw InputError("histogram bin width must be positive");
  Histogram h;
  h.width_c = width_c;
  if (report.racks.empty()) return h;
  // Value x falls in bin ceil(x / w) - 1 on the absolute grid.
  auto grid_bin = [width_c](double x) { return static_cast<long>(std::ceil(x / width_c)) - 1; };
  long lo = grid_bin(report.racks.front().outlet_c);
  long hi = lo;
  for (const auto& r : report.racks) {
    lo = std::min(lo, grid_bin(r.outlet_c));
    hi = std::max(hi, grid_bin(r.outlet_c));
  }
  h.lower_c = static_cast<double>(lo) * width_c;
  h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& r : report.racks) ++h.counts[static_cast<std::size_t>(grid_bin(r.outlet_c) - lo)];
  return h;
}

StaticReport run_static(DataCenterState& state, const std::vector<VdcRequest>& vdcs, Algorithm algo,
                        const ThermalModel& model) {
  std::vector<std::size_t> order(vdcs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&vdcs](std::size_t a, std::size_t b) {
    if (vdcs[a].vms.size() != vdcs[b].vms.size()) return vdcs[a].vms.size() > vdcs[b].vms.size();
    return vdcs[a].id < vdcs[b].id;
  });

  StaticReport report;
  report.algorithm = algo;
  for (std::size_t idx : order) {
    const auto result = embed(state, vdcs[idx], algo, model);
    report.outcomes.push_back({vdcs[idx].id, result.embedding.has_value(), result.failure});
    ++(result ? report.embedded : report.failed);
  }
  report.thermal = thermal_report(state, model);
  report.max_outlet_c = report.thermal.max_outlet_c;
  report.total_it_power_kw = report.thermal.total_it_power_kw;
  report.active_spread_c = report.thermal.max_active_outlet_c() - report.thermal.min_active_outlet_c();
  report.histogram = outlet_histogram(report.thermal);
  return report;
}

const char* to_string(Admission a) {
  switch (a) {
    case Admission::accepted: return "accepted";
    case Admission::rejected_resources: return "rejected_resources";
    case Admission::rejected_temperature: return "rejected_temperature";
  }
  return "?";
}

Admission admit(DataCenterState& state, const VdcRequest& vdc, Algorithm algo, const ThermalModel& model,
                double threshold_c) {
  const auto result = embed(state, vdc, algo, model);
  if (!result) return Admission::rejected_resources;
  if (!std::isinf(threshold_c)) {
    for (const auto& rack : state.racks()) {
      if (rack_outlet_temperature(rack, state, model) > threshold_c) {
        release_vdc(state, vdc.id);
        return Admission::rejected_temperature;
      }
    }
  }
  return Admission::accepted;
}

double DynamicReport::rejection_ratio() const {
  return measured_arrivals == 0 ? 0.0 : static_cast<double>(measured_rejections) / static_cast<double>(measured_arrivals);
}

DynamicReport run_dynamic(DataCenterState& state, const EventTrace& trace, Algorithm algo, const ThermalModel& model,
                          const DynamicOptions& options) {
  trace.validate();
  const DataCenterState pristine = state;

  DynamicReport report;
  report.algorithm = algo;
  report.threshold_c = options.threshold_c;
  report.warmup = options.warmup;

  std::vector<bool> admitted(trace.requests.size(), false);
  bool measuring = false;
  double window_start = 0.0;
  double last_t = 0.0;
  SeriesPoint last{};
  double last_power = 0.0;
  double power_integral = 0.0;
  double gap_integral = 0.0;
  double active_gap_integral = 0.0;

  for (const auto& ev : trace.events) {
    if (measuring) {
      const double dt = ev.time - last_t;
      power_integral += last_power * dt;
      gap_integral += (last.max_outlet_c - last.min_outlet_c) * dt;
      active_gap_integral += (last.max_active_outlet_c - last.min_active_outlet_c) * dt;
    }
    const auto k = static_cast<std::size_t>(ev.vdc_id);
    if (ev.kind == EventKind::arrive) {
      const bool measured = report.arrivals >= options.warmup;
      if (measured && !measuring) {
        measuring = true;
        window_start = ev.time;
      }
      ++report.arrivals;
      const Admission a = admit(state, trace.requests[k], algo, model, options.threshold_c);
      if (a == Admission::accepted) {
        admitted[k] = true;
        ++report.accepted;
      } else {
        ++(a == Admission::rejected_resources ? report.rejected_resources : report.rejected_temperature);
      }
      if (measured) {
        ++report.measured_arrivals;
        if (a != Admission::accepted) ++report.measured_rejections;
      }
    } else if (admitted[k]) {
      release_vdc(state, ev.vdc_id);
      admitted[k] = false;
    }

    last_t = ev.time;
    if (!options.sample_thermal) continue;
    const auto thermal = thermal_report(state, model);
    last = {ev.time, thermal.max_outlet_c, thermal.min_outlet_c(), thermal.max_active_outlet_c(),
            thermal.min_active_outlet_c()};
    last_power = thermal.total_it_power_kw;
    if (options.record_series) report.series.push_back(last);
  }

  report.window_h = measuring ? last_t - window_start : 0.0;
  if (report.window_h > 0.0 && options.sample_thermal) {
    report.mean_power_kw = power_integral / report.window_h;
    report.mean_gap_c = gap_integral / report.window_h;
    report.mean_active_gap_c = active_gap_integral / report.window_h;
  }
  report.pristine_at_end = state == pristine;
  return report;
}

StaticReport replicate_static(const TopologyConfig& topology, const WorkloadParams& workload, std::size_t n_vdcs,
                              Algorithm algo, const ThermalModel& model, std::uint64_t seed) {
  Rng rng(seed);
  auto state = build_vl2(topology, rng);
  const auto vdcs = generate_static_batch(n_vdcs, workload, rng);
  return run_static(state, vdcs, algo, model);
}

DynamicReport replicate_dynamic(const TopologyConfig& topology, const WorkloadParams& workload,
                                const DynamicScenario& scenario, Algorithm algo, const ThermalModel& model,
                                std::uint64_t seed) {
  Rng rng(seed);
  auto state = build_vl2(topology, rng);
  const auto trace =
      generate_dynamic_trace(scenario.requests, scenario.lambda_per_hour, scenario.mean_holding_h, workload, rng);
  return run_dynamic(state, trace, algo, model, scenario.options);
}

}  // namespace tavdc
