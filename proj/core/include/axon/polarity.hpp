#pragma once

#include <cstdint>
#include <vector>

#include "axon/logic_graph.hpp"

namespace axon {

/// A complete polarity decision: per logic node, whether its net carries the
/// complemented signal, plus the edges that need an explicit inverter because
/// both ends ended up at the same polarity.
struct PolarityAssignment {
  std::vector<uint8_t> negated;     // per logic node
  std::vector<int> inverted_edges;  // indices into LogicGraph::edges
  std::vector<int> cluster_choice;  // chosen resolution ordinal per cluster
};

/// A connected group of mismatched edges that must be resolved jointly:
/// flipping a member node toggles every edge at that node, so their
/// resolutions interact. Feasible resolutions are flip masks over `nodes`
/// (bit j flips nodes[j]) that leak no mismatch into a different cluster.
struct MismatchCluster {
  std::vector<int> edges;          // baseline-mismatched edge indices
  std::vector<int> nodes;          // flippable members, ascending id
  std::vector<uint32_t> feasible;  // lexicographically ascending flip masks
  bool truncated = false;          // enumeration bound hit
};

/// Level-parity polarity baseline (odd levels positive, even negative), with
/// xor-kind nodes resolved by consumer demand since their duals are free.
std::vector<uint8_t> baseline_polarity(const LogicGraph& logic);

bool edge_mismatched(const LogicGraph& logic, const std::vector<uint8_t>& negated,
                     const LogicEdge& e);

/// The full inverter-insertion candidate space: independent clusters whose
/// per-cluster resolutions multiply. Candidates are addressed by a mixed-radix
/// index over the cluster resolution lists so a capped exploration never has
/// to materialize the whole set.
class InverterEnumeration {
 public:
  InverterEnumeration(const LogicGraph& logic, size_t max_per_cluster);

  const std::vector<uint8_t>& baseline() const { return baseline_; }
  const std::vector<MismatchCluster>& clusters() const { return clusters_; }
  bool truncated() const { return truncated_; }

  /// Product of per-cluster resolution counts (saturating).
  unsigned long long total() const { return total_; }

  PolarityAssignment assignment(unsigned long long index) const;
  std::vector<PolarityAssignment> all(size_t limit) const;

 private:
  const LogicGraph& logic_;
  std::vector<uint8_t> baseline_;
  std::vector<MismatchCluster> clusters_;
  unsigned long long total_ = 1;
  bool truncated_ = false;
};

/// Runs baseline assignment, mismatch marking, clustering and per-cluster
/// resolution enumeration. `max_per_cluster` bounds the resolutions kept for
/// one cluster (default 2^12); hitting it flags the cluster as truncated
/// rather than failing.
InverterEnumeration enumerate_inverter_candidates(const LogicGraph& logic,
                                                  size_t max_per_cluster = 4096);

}  // namespace axon
