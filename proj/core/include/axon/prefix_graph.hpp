#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "axon/error.hpp"

namespace axon {

using NodeId = int32_t;
inline constexpr NodeId kNoNode = -1;

/// Closed bit interval [hi:lo], 0-based, hi >= lo. A leaf covers a single
/// column (hi == lo).
struct Span {
  int hi = 0;
  int lo = 0;

  int length() const { return hi - lo + 1; }
  bool is_leaf() const { return hi == lo; }
  bool operator==(const Span& o) const { return hi == o.hi && lo == o.lo; }
  bool operator!=(const Span& o) const { return !(*this == o); }
};

enum class NodeKind : uint8_t { Leaf, Prefix, Ling };

const char* to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(const std::string& s);

/// One vertex of the carry network. A Prefix node combines its children's
/// group signals into the group generate over its span; a Ling node produces
/// the pseudo-carry over its span instead. Children always abut: the hi child
/// covers [hi:k+1] and the lo child [k:lo] for some split k.
struct PrefixNode {
  NodeId id = kNoNode;
  Span span;
  NodeKind kind = NodeKind::Leaf;
  NodeId hi_child = kNoNode;
  NodeId lo_child = kNoNode;
  int level = 0;

  bool is_leaf() const { return kind == NodeKind::Leaf; }
};

/// DAG of prefix/Ling nodes over `width` bit columns. Column outputs are the
/// nodes producing the carry signals: outputs[i] has span [i:0] and feeds the
/// sum of bit i+1 (outputs[width-1] is the carry-out). The carry-in is folded
/// into bit 0's generate, so no [i:0] group-propagate is ever required.
///
/// Graphs are immutable once canonicalized; all queries are const.
class PrefixGraph {
 public:
  PrefixGraph() = default;
  explicit PrefixGraph(int width) : width_(width) {}

  int width() const { return width_; }
  const std::vector<PrefixNode>& nodes() const { return nodes_; }
  const PrefixNode& node(NodeId id) const { return nodes_.at(static_cast<size_t>(id)); }
  const std::vector<NodeId>& outputs() const { return outputs_; }

  /// Node producing span [column:0]; the carry into bit column+1.
  NodeId output(int column) const { return outputs_.at(static_cast<size_t>(column)); }

  /// Builder API. add_node computes the level from the children and reuses an
  /// existing node when an identical (span, children) vertex already exists.
  NodeId add_leaf(int bit);
  NodeId add_node(NodeKind kind, NodeId hi_child, NodeId lo_child);
  void set_output(int column, NodeId id);
  PrefixNode& mutable_node(NodeId id) { return nodes_.at(static_cast<size_t>(id)); }

  /// Looks up a node by span. Returns the lowest-level node when several
  /// produce the same interval.
  NodeId find_span(Span span) const;

  /// Drops nodes unreachable from the outputs and renumbers ids densely in
  /// (level, lo, hi) order. Generators call this before returning, which makes
  /// serialized graphs byte-stable.
  void canonicalize();

  /// Prefix-node consumer count per node (sum taps excluded).
  std::vector<int> fanouts() const;

  bool operator==(const PrefixGraph& o) const {
    return width_ == o.width_ && outputs_ == o.outputs_ && equal_nodes(o);
  }

 private:
  bool equal_nodes(const PrefixGraph& o) const;

  int width_ = 0;
  std::vector<PrefixNode> nodes_;
  std::vector<NodeId> outputs_;
  std::unordered_map<uint64_t, NodeId> span_index_;
};

enum class ViolationKind {
  SpanMismatch,
  MissingOutput,
  Cycle,
  LevelInconsistency,
  DeadNode,
  KindMismatch,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  NodeId node = kNoNode;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Checks every structural invariant: contiguous child spans, acyclicity,
/// level consistency, one output per column, reachability, and the Ling rule
/// that a pseudo-carry node's hi child is a leaf or another Ling node.
/// Never throws; all problems are reported as violations.
ValidationReport validate(const PrefixGraph& graph);

struct GraphMetrics {
  int size = 0;        // non-leaf node count
  int depth = 0;       // max level
  int max_fanout = 0;  // max prefix-node consumers of any node
};

GraphMetrics metrics(const PrefixGraph& graph);

/// JSON document {width, nodes:[{id, hi, lo, kind, hi_child, lo_child}],
/// outputs:[id], adapters:[...]}. Field names are a stable interchange format.
std::string graph_to_json(const PrefixGraph& graph);
PrefixGraph graph_from_json(const std::string& text);

}  // namespace axon
