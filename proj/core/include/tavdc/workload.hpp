#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tavdc/model.hpp"

namespace tavdc {

using Rng = std::mt19937_64;

// Inclusive integer range.
struct IntRange {
  std::int64_t min = 0;
  std::int64_t max = 0;
  bool operator==(const IntRange&) const = default;
};

struct WorkloadParams {
  int m_min = 2;
  int m_max = 6;
  IntRange cpu{5, 30};
  IntRange mem{0, 100};
  IntRange disk{0, 1000};
  IntRange bandwidth{10, 70};  // Mb/s

  static WorkloadParams case_a();
  static WorkloadParams case_b();

  void validate() const;
  bool operator==(const WorkloadParams&) const = default;
};

// Draws one VDC. The virtual topology is grown one VM at a time: each new VM
// links to between 1 and E distinct VMs already in the graph (E = current
// graph size), so the result is always connected.
VdcRequest generate_vdc(const WorkloadParams& params, Rng& rng, VdcId id);

std::vector<VdcRequest> generate_static_batch(std::size_t n, const WorkloadParams& params, Rng& rng);

enum class EventKind : std::uint8_t { arrive, depart };

struct TraceEvent {
  double time = 0.0;
  EventKind kind = EventKind::arrive;
  VdcId vdc_id = 0;
  bool operator==(const TraceEvent&) const = default;
};

// requests[k].id == k. Events are sorted by time; at equal times departures
// come first.
struct EventTrace {
  std::vector<VdcRequest> requests;
  std::vector<TraceEvent> events;

  // Throws InputError when ordering or ARRIVE/DEPART pairing is broken.
  void validate() const;
  bool operator==(const EventTrace&) const = default;
};

// Poisson arrivals at `lambda_per_hour`, exponential holding times with the
// given mean (hours).
EventTrace generate_dynamic_trace(std::size_t n_requests, double lambda_per_hour, double mean_holding_h,
                                  const WorkloadParams& params, Rng& rng);

// True when the VDC's virtual topology is connected (BFS).
bool is_connected(const VdcRequest& vdc);

}  // namespace tavdc
