#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "axon/prefix_graph.hpp"

namespace axon {

/// Bounds for topology search. Zero means "unbounded" for max_depth and
/// max_fanout; a zero node_budget selects the default policy (unlimited for
/// width <= 8, a fixed expansion budget beyond). The optional wall-clock
/// budget is off by default because it makes results machine-dependent.
struct SearchConstraints {
  int width = 0;
  int max_depth = 0;
  int max_fanout = 0;
  uint64_t node_budget = 0;
  int64_t time_budget_ms = 0;
};

struct SearchResult {
  PrefixGraph graph;
  bool optimal = false;           // guaranteed minimal among all valid graphs
  bool budget_exhausted = false;  // best-so-far returned
  uint64_t steps = 0;
};

/// Summary handed to the streaming enumeration callback. build() materializes
/// the graph only when asked, so folding over millions of topologies stays
/// cheap.
struct TopologySummary {
  int size = 0;
  int depth = 0;
  std::function<PrefixGraph()> build;
};

/// Finds a minimal-node prefix topology meeting the depth/fanout constraints.
/// Depth-first over output columns, choosing split points with shared sub-span
/// reuse; exact for width <= 8, best-effort under the expansion budget beyond.
/// Ties are broken by smaller max fanout, then smaller level sum, then
/// lexicographic span order, so identical constraints always return the same
/// graph.
///
/// Throws InfeasibleConstraints when max_depth < ceil(log2 width).
SearchResult search_min_size(const SearchConstraints& constraints);

/// Streams every distinct valid topology under the constraints in
/// deterministic order. Return false from the callback to stop early.
/// Throws WidthTooLarge for width > 12.
void for_each_topology(const SearchConstraints& constraints,
                       const std::function<bool(const TopologySummary&)>& visit);

/// Materializing wrapper around for_each_topology. With no limit and
/// width <= 8 this is the complete set.
std::vector<PrefixGraph> enumerate_topologies(const SearchConstraints& constraints,
                                              std::optional<size_t> limit = std::nullopt);

}  // namespace axon
