#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tavdc/lp_format.hpp"
#include "tavdc/model.hpp"
#include "tavdc/thermal.hpp"
#include "tavdc/topology.hpp"

namespace tavdc {

// A static embedding problem: every VDC of the batch must be placed on an
// otherwise empty data center.
struct MilpInstance {
  DataCenterState topology;
  std::vector<VdcRequest> vdcs;
  double alpha = 0.1;
  // Big-M for the link-usage indicators; 0 selects the largest link capacity.
  Mbps big_m = 0;
  ThermalModel model;

  Mbps effective_big_m() const;
  // Throws InputError when the instance is not well formed.
  void validate() const;
};

// Values of the objective terms for a complete set of embeddings, computed
// from first principles. This is the single canonical evaluator: any two
// identical layouts yield bit-identical numbers.
struct SolutionMetrics {
  double objective = 0.0;
  double max_outlet_c = 0.0;
  double total_power_kw = 0.0;
  std::vector<double> node_power_kw;  // indexed by node id
  std::vector<double> rack_outlet_c;  // indexed by rack id
  std::vector<bool> link_used;        // indexed by link id
  std::vector<int> electronic_ports;  // indexed by node id
  std::vector<int> optical_ports;     // indexed by node id
};

// Throws InputError if an embedding names an unknown node or a hop that is
// not a physical link. Feasibility is not checked here.
SolutionMetrics evaluate_embeddings(const MilpInstance& instance, std::span<const Embedding> embeddings);

lp::Model build_milp(const MilpInstance& instance);
std::string emit_milp(const MilpInstance& instance);
// Closed form for the number of flow variables: every ordered VM pair of a
// VDC times every directed physical adjacency.
std::size_t expected_mu_count(const MilpInstance& instance);

struct ExactSolution {
  bool feasible = false;
  double objective = 0.0;
  double max_outlet_c = 0.0;
  double total_power_kw = 0.0;
  std::vector<double> node_power_kw;
  std::vector<double> rack_outlet_c;
  // Same order as the instance's VDCs.
  std::vector<Embedding> embeddings;
  // Placements satisfying the server constraints that also admit a routing.
  std::uint64_t feasible_placements = 0;
  std::uint64_t placements_enumerated = 0;
};

struct BruteForceLimits {
  int max_path_hops = 6;
  std::uint64_t max_placements = 2'000'000;
  std::size_t max_vms = 8;
};

// Exhaustive optimum of the static problem with unsplittable routes of at
// most `max_path_hops` links. Among optimal layouts the first one in
// lexicographic placement order wins, then the first route combination.
// Throws SizeLimitError when the enumeration would exceed the limits.
ExactSolution brute_force_optimal(const MilpInstance& instance, const BruteForceLimits& limits = {});

struct FamilyResult {
  std::string family;
  std::size_t checked = 0;
  std::size_t violated = 0;
  std::string first_violation;

  bool pass() const { return violated == 0; }
};

struct ValidationReport {
  std::vector<FamilyResult> families;
  SolutionMetrics recomputed;

  bool ok() const;
  // Throws std::out_of_range for an unknown family.
  const FamilyResult& family(std::string_view name) const;
  std::string summary() const;
};

// A solution to check. Reported values are compared against a
// recomputation when present.
struct Candidate {
  std::vector<Embedding> embeddings;
  std::optional<double> max_outlet_c;
  std::optional<double> objective;
  std::optional<std::vector<double>> node_power_kw;
  std::optional<std::vector<double>> rack_outlet_c;
};

Candidate to_candidate(const ExactSolution& solution);

// Checks families 3-9 directly on the layout, 19-21 against reported values,
// 22 against the reported maximum and "objective" against the reported
// objective. Throws InputError for a malformed candidate (unknown VDC, VM or
// node).
ValidationReport validate_solution(const MilpInstance& instance, const Candidate& candidate, double tol = 1e-6);

// Variable values of the emitted model implied by a layout.
lp::Assignment to_assignment(const MilpInstance& instance, std::span<const Embedding> embeddings);

// Plugs variable values into the emitted model and reports each constraint
// family, plus "objective" when the assignment carries T.
ValidationReport validate_assignment(const MilpInstance& instance, const lp::Assignment& values,
                                     double tol = 1e-6);

// Variable naming shared by the emitter and to_assignment.
namespace milp_names {
std::string delta(std::size_t i, VmId v, NodeId n);
std::string mu(std::size_t i, VmId s, VmId d, NodeId m, NodeId n);
std::string omega(NodeId n);
std::string pi(NodeId a, NodeId b);
std::string q(NodeId n);
std::string sigma(NodeId n);
std::string p(NodeId n);
std::string tout(RackId k);
}  // namespace milp_names

}  // namespace tavdc
