#pragma once

#include <cstdint>
#include <vector>

#include "axon/cell_library.hpp"
#include "axon/prefix_graph.hpp"

namespace axon {

/// Pre-mapping arrival model: per-kind constant stage delays (FO1) taken from
/// the cell model. Leaves cost one NAND2 parasitic, combines one AOI21
/// parasitic; a first-level Ling pair is a single AOI22 straight off the
/// operand ports, which is where the pseudo-carry wins its level.
struct ArrivalEstimate {
  std::vector<double> arrival;           // per node id
  double critical = 0.0;                 // max output-column arrival
  std::vector<uint8_t> on_critical_path; // per node id: slack == 0
};

ArrivalEstimate arrival_estimate(const PrefixGraph& graph, const CellLibrary& lib);

/// Output-column arrival including the carry-recovery stage at Ling outputs.
double output_arrival(const PrefixGraph& graph, const CellLibrary& lib, int column);

/// Converts every zero-slack node whose hi-child chain permits it (a
/// pseudo-carry node needs a leaf or pseudo-carry hi child) to Ling kind.
/// Non-critical nodes are left untouched. The result validates and is
/// functionally equivalent to the input.
PrefixGraph hybridize(const PrefixGraph& graph, const CellLibrary& lib);

/// Node ids converted to Ling kind (the conversion record of a hybrid graph).
std::vector<NodeId> converted_nodes(const PrefixGraph& graph);

/// True-carry recovery for a Ling node: G over the node's span equals the
/// OR-form propagate of the top bit ANDed with the pseudo-carry.
/// Throws KindMismatch when the node is not Ling.
struct CarryRecovery {
  int rho_bit = -1;
  NodeId node = kNoNode;
};
CarryRecovery ling_to_carry(const PrefixGraph& graph, NodeId id);

/// 64-lane bit-parallel evaluation of the graph semantics: every node's group
/// signal (generate for prefix kind, pseudo-carry for Ling kind), the column
/// carries, sums and carry-out. This path is independent of technology
/// mapping and is the reference the mapped netlists are checked against.
struct LaneInputs {
  std::vector<uint64_t> a;  // per bit, 64 lanes
  std::vector<uint64_t> b;
  uint64_t cin = 0;
};

struct LaneSignals {
  std::vector<uint64_t> node_value;  // per node id
  std::vector<uint64_t> carry;       // carry[i] = carry into bit i; carry[0] = cin
  std::vector<uint64_t> sum;         // per bit
  uint64_t cout = 0;
};

LaneSignals eval_signals(const PrefixGraph& graph, const LaneInputs& in);

}  // namespace axon
