#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace tavdc {

using NodeId = std::int32_t;
using LinkId = std::int32_t;
using RackId = std::int32_t;
using VmId = std::int32_t;
using VdcId = std::int64_t;

// Bandwidth is carried in whole Mb/s everywhere.
using Mbps = std::int64_t;

// CPU / memory / disk amounts in abstract integer units.
struct ResourceVector {
  std::int64_t cpu = 0;
  std::int64_t mem = 0;
  std::int64_t disk = 0;

  constexpr ResourceVector& operator+=(const ResourceVector& o) {
    cpu += o.cpu;
    mem += o.mem;
    disk += o.disk;
    return *this;
  }
  constexpr ResourceVector& operator-=(const ResourceVector& o) {
    cpu -= o.cpu;
    mem -= o.mem;
    disk -= o.disk;
    return *this;
  }
  friend constexpr ResourceVector operator+(ResourceVector a, const ResourceVector& b) { return a += b; }
  friend constexpr ResourceVector operator-(ResourceVector a, const ResourceVector& b) { return a -= b; }

  // True when every component of *this fits inside `limit`.
  constexpr bool fits_in(const ResourceVector& limit) const {
    return cpu <= limit.cpu && mem <= limit.mem && disk <= limit.disk;
  }
  constexpr bool non_negative() const { return cpu >= 0 && mem >= 0 && disk >= 0; }

  bool operator==(const ResourceVector&) const = default;
};

struct VmDemand {
  VmId id = 0;
  ResourceVector demand;
  bool operator==(const VmDemand&) const = default;
};

// Undirected virtual link between two VMs of the same VDC.
struct VirtualLink {
  VmId s = 0;
  VmId d = 0;
  Mbps bandwidth = 0;
  bool operator==(const VirtualLink&) const = default;
};

struct VdcRequest {
  VdcId id = 0;
  std::vector<VmDemand> vms;
  std::vector<VirtualLink> vlinks;
  // Only meaningful for dynamic traces (hours).
  double arrival_time = 0.0;
  double holding_time = 0.0;

  // Index of a VM inside `vms`, or -1.
  int vm_index(VmId vm) const;
  // Sum of bandwidth over the vlinks incident to `vm`.
  Mbps incident_bandwidth(VmId vm) const;

  bool operator==(const VdcRequest&) const = default;
};

struct VmPlacement {
  VmId vm = 0;
  NodeId server = 0;
  // Resources reserved on `server`, so a placement can be released on its own.
  ResourceVector demand;
  bool operator==(const VmPlacement&) const = default;
};

// Physical route of one virtual link. nodes.front() hosts vlink.s and
// nodes.back() hosts vlink.d; every hop carries `bandwidth` in both directions.
struct LinkPath {
  VirtualLink vlink;
  std::vector<NodeId> nodes;
  Mbps bandwidth = 0;
  bool operator==(const LinkPath&) const = default;
};

struct Embedding {
  VdcId vdc_id = 0;
  std::vector<VmPlacement> placements;
  std::vector<LinkPath> paths;

  // Server hosting `vm`, or -1.
  NodeId host_of(VmId vm) const;

  bool operator==(const Embedding&) const = default;
};

}  // namespace tavdc
