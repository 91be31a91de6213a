#pragma once

#include <optional>
#include <vector>

#include "tavdc/topology.hpp"

namespace tavdc {

// Cost assigned to a link that carries no traffic yet. Utilization costs
// live in (0, 1], so any route made only of used links beats any route that
// touches an unused one, as long as routes stay under 100 hops.
inline constexpr double kUnusedLinkCost = 100.0;

using Path = std::vector<NodeId>;

// Minimum-cost route for the temperature-aware embedder. Links whose residual
// is below `demand` are pruned; a used link costs its utilization and an
// unused one kUnusedLinkCost. Ties go to fewer hops, then to the
// lexicographically smallest node sequence. Costs are evaluated on an exact
// integer scale so ties are detected exactly.
std::optional<Path> find_path(const DataCenterState& state, NodeId src, NodeId dst, Mbps demand);

// Least-load routing for the baseline: among routes whose links all have
// residual >= demand, maximize the minimum residual, then fewer hops, then
// lexicographically smallest node sequence.
std::optional<Path> find_widest_path(const DataCenterState& state, NodeId src, NodeId dst, Mbps demand);

// Cost of a route under the find_path cost function (floating point, for
// reporting and tests). Throws InputError if the path is not contiguous.
double path_cost(const DataCenterState& state, const Path& path);

// Smallest residual along a route.
Mbps path_bottleneck(const DataCenterState& state, const Path& path);

}  // namespace tavdc
