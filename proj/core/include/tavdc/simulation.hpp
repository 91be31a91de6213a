#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "tavdc/embedding.hpp"
#include "tavdc/thermal.hpp"
#include "tavdc/topology.hpp"
#include "tavdc/workload.hpp"

namespace tavdc {

// Bin k covers (lower_c + k*width, lower_c + (k+1)*width]; lower_c is a
// multiple of width.
struct Histogram {
  double width_c = 0.5;
  double lower_c = 0.0;
  std::vector<int> counts;

  int total() const;
  double bin_lower(std::size_t k) const { return lower_c + static_cast<double>(k) * width_c; }
  double bin_upper(std::size_t k) const { return bin_lower(k + 1); }
};

Histogram outlet_histogram(const ThermalReport& report, double width_c = 0.5);

struct VdcOutcome {
  VdcId id = 0;
  bool embedded = false;
  EmbedFailure failure = EmbedFailure::none;
};

struct StaticReport {
  Algorithm algorithm = Algorithm::temperature_aware;
  // In embedding order.
  std::vector<VdcOutcome> outcomes;
  std::size_t embedded = 0;
  std::size_t failed = 0;
  ThermalReport thermal;
  double max_outlet_c = 0.0;
  double total_it_power_kw = 0.0;
  // Max minus min outlet over racks with powered equipment.
  double active_spread_c = 0.0;
  Histogram histogram;
};

// Embeds the batch largest-first (VM count descending, ties by id) and
// reports on the final state.
StaticReport run_static(DataCenterState& state, const std::vector<VdcRequest>& vdcs, Algorithm algo,
                        const ThermalModel& model);

enum class Admission { accepted, rejected_resources, rejected_temperature };
const char* to_string(Admission a);

// Embeds `vdc` and keeps it only if no rack outlet ends up strictly above
// `threshold_c`; otherwise the state is restored exactly.
Admission admit(DataCenterState& state, const VdcRequest& vdc, Algorithm algo, const ThermalModel& model,
                double threshold_c);

struct DynamicOptions {
  double threshold_c = 35.0;  // +infinity disables the temperature check
  // Leading arrivals excluded from the rejection ratio and the time averages.
  std::size_t warmup = 1000;
  bool record_series = true;
  // Sample rack temperatures and power after every event. Needed for the
  // series and the time averages; rejection counts do not depend on it.
  bool sample_thermal = true;
};

struct SeriesPoint {
  double t = 0.0;
  double max_outlet_c = 0.0;
  double min_outlet_c = 0.0;
  double max_active_outlet_c = 0.0;
  double min_active_outlet_c = 0.0;
};

struct DynamicReport {
  Algorithm algorithm = Algorithm::temperature_aware;
  double threshold_c = std::numeric_limits<double>::infinity();
  std::size_t warmup = 0;
  // Counts over the whole trace.
  std::size_t arrivals = 0;
  std::size_t accepted = 0;
  std::size_t rejected_resources = 0;
  std::size_t rejected_temperature = 0;
  // Counts over arrivals after the warm-up.
  std::size_t measured_arrivals = 0;
  std::size_t measured_rejections = 0;
  // Time averages over the measured window, from the first measured arrival
  // to the last event.
  double mean_power_kw = 0.0;
  double mean_active_gap_c = 0.0;
  double mean_gap_c = 0.0;
  double window_h = 0.0;
  // Sampled after every event.
  std::vector<SeriesPoint> series;
  bool pristine_at_end = false;

  std::size_t rejected() const { return rejected_resources + rejected_temperature; }
  // Measured rejections over measured arrivals; 0 when nothing was measured.
  double rejection_ratio() const;
};

// Throws InputError when the trace is malformed.
DynamicReport run_dynamic(DataCenterState& state, const EventTrace& trace, Algorithm algo, const ThermalModel& model,
                          const DynamicOptions& options = {});

// One replication: a single generator seeded with `seed` draws the rack
// inlet temperatures first and then the workload, so both algorithms see the
// same data center and requests for the same seed.
StaticReport replicate_static(const TopologyConfig& topology, const WorkloadParams& workload, std::size_t n_vdcs,
                              Algorithm algo, const ThermalModel& model, std::uint64_t seed);

struct DynamicScenario {
  double lambda_per_hour = 80.0;
  double mean_holding_h = 3.0;
  std::size_t requests = 100000;
  DynamicOptions options;
};

DynamicReport replicate_dynamic(const TopologyConfig& topology, const WorkloadParams& workload,
                                const DynamicScenario& scenario, Algorithm algo, const ThermalModel& model,
                                std::uint64_t seed);

}  // namespace tavdc
