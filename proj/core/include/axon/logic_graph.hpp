#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "axon/cell_library.hpp"
#include "axon/prefix_graph.hpp"

namespace axon {

/// Gate-intent nodes the mapper works on. Each maps to exactly one cell
/// instance; polarity decides which of the inverting duals.
enum class LogicKind : uint8_t {
  LeafG,    // per-bit generate; bit 0 folds the carry-in (AOI22 over pi_0, cin, a0, b0)
  LeafP,    // xor-form propagate from the operand ports; polarity-free dual
  LeafRho,  // or-form propagate, shared construction from LeafP and LeafG
  GroupP,   // AND of two narrower propagates; flavor 'x' (xor-form) or 'o' (or-form)
  Combine,  // group generate / pseudo-carry merge: AOI21/OAI21, or NAND2/NOR2 without P
  LingPair, // first-level pseudo-carry over two bits, one AOI22 straight off the ports
  Recover,  // true carry at a Ling output column: rho AND pseudo-carry
  SumXor,   // sum bit; output polarity pinned positive by the port
};

const char* to_string(LogicKind kind);

struct LogicNode {
  int id = -1;
  LogicKind kind = LogicKind::LeafG;
  int bit = -1;                 // leaves, LingPair top bit, sum bit
  Span span{0, 0};              // GroupP / Combine / Recover
  char flavor = 0;              // GroupP only: 'x' or 'o'
  NodeId graph_node = kNoNode;  // provenance into the prefix graph
  std::vector<int> in;          // logic-node inputs in semantic order (see mapping)
  int plevel = 0;               // polarity level for the alternating baseline
};

/// Directed signal edge u -> v feeding input slot `pin` of v. v == -1 is the
/// carry-out port sink. Edges into XOR-kind consumers absorb polarity and are
/// not sensitive.
struct LogicEdge {
  int from = -1;
  int to = -1;
  int pin = -1;
  bool sensitive = true;
};

/// The (hybrid) prefix graph lowered to gate intents, with the propagate
/// network instantiated demand-driven: group propagates exist only where a
/// parent requires them, mirroring the generate tree's decomposition where one
/// exists.
struct LogicGraph {
  int width = 0;
  PrefixGraph source;
  std::vector<LogicNode> nodes;
  std::vector<LogicEdge> edges;           // all internal edges + the cout edge
  std::vector<int> carry_source;          // per column c: node producing carry into bit c+1
  std::vector<int> sum_node;              // per bit
  std::vector<int> leaf_g, leaf_p, leaf_rho;  // per bit; -1 when not demanded
  int ling_node_count = 0;

  const LogicNode& node(int id) const { return nodes.at(static_cast<size_t>(id)); }
  bool is_xor_kind(int id) const {
    LogicKind k = node(id).kind;
    return k == LogicKind::LeafP || k == LogicKind::SumXor;
  }

  /// Instantiated group-propagate spans (flavor, span), sorted.
  std::vector<std::pair<char, Span>> group_p_spans() const;

  /// Consumer count per node; demand-driven minimality means every GroupP,
  /// LeafRho and LeafP node has at least one consumer.
  std::vector<int> consumer_counts() const;
};

/// Lowers a validated (hybrid) prefix graph: demand analysis from the output
/// columns decides which leaf propagates, or-form propagates and group
/// propagates exist. This is the P-network construction step.
LogicGraph build_p_network(const PrefixGraph& graph);

}  // namespace axon
