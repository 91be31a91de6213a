#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tavdc/model.hpp"
#include "tavdc/routing.hpp"
#include "tavdc/thermal.hpp"
#include "tavdc/topology.hpp"

namespace tavdc {

enum class Algorithm { temperature_aware, load_balanced };

const char* to_string(Algorithm algo);
// Accepts "temperature_aware"/"ta" and "load_balanced"/"lb".
Algorithm parse_algorithm(const std::string& name);

enum class EmbedFailure { none, vm_mapping, link_mapping, injected };

const char* to_string(EmbedFailure failure);

struct EmbedOptions {
  // Fault injection for tests: the reservation with this zero-based index
  // fails as if resources were missing. Negative disables injection.
  long fail_at_reservation = -1;
};

struct EmbedResult {
  std::optional<Embedding> embedding;
  EmbedFailure failure = EmbedFailure::none;

  explicit operator bool() const { return embedding.has_value(); }
};

// Reservations made on behalf of one VDC. Unless commit() is called, the
// destructor withdraws them in reverse order, restoring the state exactly.
class Transaction {
 public:
  explicit Transaction(DataCenterState& state, long fail_at_reservation = -1);
  ~Transaction();
  Transaction(const Transaction&) = delete;
  Transaction& operator=(const Transaction&) = delete;

  DataCenterState& state() { return state_; }
  const DataCenterState& state() const { return state_; }

  // Both return false only for an injected fault; real shortages are
  // checked by callers beforehand and surface as StateError otherwise.
  bool reserve_server(NodeId server, const ResourceVector& amount);
  bool reserve_path(const Path& path, Mbps amount);

  void commit() { committed_ = true; }
  void rollback();
  bool fault_injected() const { return fault_injected_; }

 private:
  struct Op {
    bool is_link = false;
    std::int32_t target = 0;
    ResourceVector amount;
    Mbps mbps = 0;
  };
  bool tick();

  DataCenterState& state_;
  std::vector<Op> ops_;
  long fail_at_;
  long counter_ = 0;
  bool committed_ = false;
  bool fault_injected_ = false;
};

// VM stage of the temperature-aware algorithm. VMs go in descending CPU
// order; each lands in the coolest rack that has an eligible server, on the
// eligible server with the least remaining CPU. Eligible means enough
// CPU/memory/disk, an access link with residual >= the VM's total vlink
// bandwidth, and no other VM of the same VDC. Rack temperatures are
// recomputed after every placement.
std::optional<std::vector<VmPlacement>> map_vms_temperature_aware(Transaction& tx, const VdcRequest& vdc,
                                                                  const ThermalModel& model);

// VM stage of the load-balanced baseline: same VM order and eligibility, each
// VM goes to the eligible server with the lowest allocated CPU (ties by id).
std::optional<std::vector<VmPlacement>> map_vms_least_load(Transaction& tx, const VdcRequest& vdc);

// True when `server` can host `vm` of `vdc` given the servers already taken
// by this VDC.
bool server_eligible(const DataCenterState& state, NodeId server, const VdcRequest& vdc, const VmDemand& vm,
                     const std::vector<NodeId>& taken);

EmbedResult embed_temperature_aware(DataCenterState& state, const VdcRequest& vdc, const ThermalModel& model,
                                    const EmbedOptions& options = {});
EmbedResult embed_load_balanced(DataCenterState& state, const VdcRequest& vdc, const EmbedOptions& options = {});
EmbedResult embed(DataCenterState& state, const VdcRequest& vdc, Algorithm algo, const ThermalModel& model,
                  const EmbedOptions& options = {});

// Returns every resource held by a committed embedding. Throws StateError if
// the embedding is not the one registered for its VDC.
void release_vdc(DataCenterState& state, const Embedding& embedding);
void release_vdc(DataCenterState& state, VdcId vdc_id);

// Structural checks of one embedding against its request and the physical
// graph: one server per VM, anti-colocation, contiguous paths between the
// right hosts carrying the full demand. Returns one message per violation.
std::vector<std::string> verify_embedding(const DataCenterState& state, const VdcRequest& vdc,
                                          const Embedding& embedding);

}  // namespace tavdc
