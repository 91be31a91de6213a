#include "tavdc/model.hpp"

namespace tavdc {

int VdcRequest::vm_index(VmId vm) const {
  for (std::size_t i = 0; i < vms.size(); ++i) {
    if (vms[i].id == vm) return static_cast<int>(i);
  }
  return -1;
}

Mbps VdcRequest::incident_bandwidth(VmId vm) const {
  Mbps total = 0;
  for (const auto& l : vlinks) {
    if (l.s == vm || l.d == vm) total += l.bandwidth;
  }
  return total;
}

NodeId Embedding::host_of(VmId vm) const {
  for (const auto& p : placements) {
    if (p.vm == vm) return p.server;
  }
  return -1;
}

}  // namespace tavdc
