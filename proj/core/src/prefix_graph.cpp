#include "axon/prefix_graph.hpp"

#include <algorithm>
#include <queue>

#include <nlohmann/json.hpp>

namespace axon {

using json = nlohmann::ordered_json;

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedWidth: return "UnsupportedWidth";
    case ErrorCode::InfeasibleConstraints: return "InfeasibleConstraints";
    case ErrorCode::WidthTooLarge: return "WidthTooLarge";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::UnmappableNode: return "UnmappableNode";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::DanglingNet: return "DanglingNet";
    case ErrorCode::XState: return "XState";
    case ErrorCode::UnmappedCell: return "UnmappedCell";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownCell: return "UnknownCell";
    case ErrorCode::MultipleDrivers: return "MultipleDrivers";
    case ErrorCode::EmptyDesignSpace: return "EmptyDesignSpace";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Leaf: return "leaf";
    case NodeKind::Prefix: return "prefix";
    case NodeKind::Ling: return "ling";
  }
  return "?";
}

std::optional<NodeKind> node_kind_from_string(const std::string& s) {
  if (s == "leaf") return NodeKind::Leaf;
  if (s == "prefix") return NodeKind::Prefix;
  if (s == "ling") return NodeKind::Ling;
  return std::nullopt;
}

namespace {
uint64_t span_key(Span s) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(s.hi)) << 32) |
         static_cast<uint32_t>(s.lo);
}
}  // namespace

NodeId PrefixGraph::add_leaf(int bit) {
  if (bit < 0 || bit >= width_) throw Error(ErrorCode::Internal, "leaf bit out of range");
  Span s{bit, bit};
  if (NodeId existing = find_span(s); existing != kNoNode && node(existing).is_leaf())
    return existing;
  PrefixNode n;
  n.id = static_cast<NodeId>(nodes_.size());
  n.span = s;
  n.kind = NodeKind::Leaf;
  n.level = 0;
  nodes_.push_back(n);
  span_index_.emplace(span_key(s), n.id);
  return n.id;
}

NodeId PrefixGraph::add_node(NodeKind kind, NodeId hi_child, NodeId lo_child) {
  const PrefixNode& hi = node(hi_child);
  const PrefixNode& lo = node(lo_child);
  if (hi.span.lo != lo.span.hi + 1)
    throw Error(ErrorCode::Internal, "children spans do not abut");
  Span s{hi.span.hi, lo.span.lo};
  if (auto it = span_index_.find(span_key(s)); it != span_index_.end()) {
    const PrefixNode& existing = node(it->second);
    if (existing.hi_child == hi_child && existing.lo_child == lo_child &&
        existing.kind == kind)
      return it->second;
  }
  PrefixNode n;
  n.id = static_cast<NodeId>(nodes_.size());
  n.span = s;
  n.kind = kind;
  n.hi_child = hi_child;
  n.lo_child = lo_child;
  n.level = 1 + std::max(hi.level, lo.level);
  nodes_.push_back(n);
  span_index_.emplace(span_key(s), n.id);
  return n.id;
}

void PrefixGraph::set_output(int column, NodeId id) {
  if (outputs_.size() < static_cast<size_t>(width_)) outputs_.resize(width_, kNoNode);
  outputs_.at(static_cast<size_t>(column)) = id;
}

NodeId PrefixGraph::find_span(Span span) const {
  auto it = span_index_.find(span_key(span));
  return it == span_index_.end() ? kNoNode : it->second;
}

void PrefixGraph::canonicalize() {
  // Keep only nodes reachable from an output, then renumber in (level, lo, hi)
  // order so equal structures serialize identically.
  std::vector<char> keep(nodes_.size(), 0);
  std::vector<NodeId> stack;
  for (NodeId out : outputs_)
    if (out != kNoNode) stack.push_back(out);
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (id == kNoNode || keep[static_cast<size_t>(id)]) continue;
    keep[static_cast<size_t>(id)] = 1;
    const PrefixNode& n = node(id);
    if (!n.is_leaf()) {
      stack.push_back(n.hi_child);
      stack.push_back(n.lo_child);
    }
  }
  // All leaves stay: they are the (g, p) generators of every column.
  std::vector<NodeId> order;
  order.reserve(nodes_.size());
  for (const PrefixNode& n : nodes_)
    if (n.is_leaf() || keep[static_cast<size_t>(n.id)]) order.push_back(n.id);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    const PrefixNode& na = node(a);
    const PrefixNode& nb = node(b);
    if (na.level != nb.level) return na.level < nb.level;
    if (na.span.lo != nb.span.lo) return na.span.lo < nb.span.lo;
    return na.span.hi < nb.span.hi;
  });
  std::vector<NodeId> remap(nodes_.size(), kNoNode);
  for (size_t i = 0; i < order.size(); ++i) remap[static_cast<size_t>(order[i])] = static_cast<NodeId>(i);
  std::vector<PrefixNode> out;
  out.reserve(order.size());
  for (NodeId old_id : order) {
    PrefixNode n = node(old_id);
    n.id = remap[static_cast<size_t>(old_id)];
    if (!n.is_leaf()) {
      n.hi_child = remap[static_cast<size_t>(n.hi_child)];
      n.lo_child = remap[static_cast<size_t>(n.lo_child)];
    }
    out.push_back(n);
  }
  for (NodeId& o : outputs_) o = remap[static_cast<size_t>(o)];
  nodes_ = std::move(out);
  span_index_.clear();
  for (const PrefixNode& n : nodes_) span_index_.emplace(span_key(n.span), n.id);
  // Re-register lowest-level node per span (emplace keeps the first inserted,
  // and nodes_ is sorted by level already).
}

std::vector<int> PrefixGraph::fanouts() const {
  std::vector<int> fo(nodes_.size(), 0);
  for (const PrefixNode& n : nodes_) {
    if (n.is_leaf()) continue;
    fo[static_cast<size_t>(n.hi_child)]++;
    fo[static_cast<size_t>(n.lo_child)]++;
  }
  return fo;
}

bool PrefixGraph::equal_nodes(const PrefixGraph& o) const {
  if (nodes_.size() != o.nodes_.size()) return false;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const PrefixNode& a = nodes_[i];
    const PrefixNode& b = o.nodes_[i];
    if (!(a.span == b.span) || a.kind != b.kind || a.hi_child != b.hi_child ||
        a.lo_child != b.lo_child || a.level != b.level)
      return false;
  }
  return true;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::SpanMismatch: return "SpanMismatch";
    case ViolationKind::MissingOutput: return "MissingOutput";
    case ViolationKind::Cycle: return "Cycle";
    case ViolationKind::LevelInconsistency: return "LevelInconsistency";
    case ViolationKind::DeadNode: return "DeadNode";
    case ViolationKind::KindMismatch: return "KindMismatch";
  }
  return "?";
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::string out;
  for (const Violation& v : violations) {
    out += axon::to_string(v.kind);
    out += " (node ";
    out += std::to_string(v.node);
    out += "): ";
    out += v.message;
    out += "\n";
  }
  return out;
}

ValidationReport validate(const PrefixGraph& graph) {
  ValidationReport report;
  auto add = [&](ViolationKind k, NodeId id, std::string msg) {
    report.violations.push_back({k, id, std::move(msg)});
  };
  const auto& nodes = graph.nodes();
  const int n = graph.width();

  for (const PrefixNode& node : nodes) {
    if (node.span.lo < 0 || node.span.hi >= n || node.span.lo > node.span.hi)
      add(ViolationKind::SpanMismatch, node.id, "span outside [0, width)");
    if (node.is_leaf()) {
      if (!node.span.is_leaf())
        add(ViolationKind::SpanMismatch, node.id, "leaf with multi-column span");
      if (node.level != 0)
        add(ViolationKind::LevelInconsistency, node.id, "leaf level must be 0");
      continue;
    }
    if (node.hi_child == kNoNode || node.lo_child == kNoNode ||
        node.hi_child >= static_cast<NodeId>(nodes.size()) ||
        node.lo_child >= static_cast<NodeId>(nodes.size()) || node.hi_child < 0 ||
        node.lo_child < 0) {
      add(ViolationKind::SpanMismatch, node.id, "missing child");
      continue;
    }
    const PrefixNode& hi = graph.node(node.hi_child);
    const PrefixNode& lo = graph.node(node.lo_child);
    if (hi.span.hi != node.span.hi || lo.span.lo != node.span.lo ||
        hi.span.lo != lo.span.hi + 1)
      add(ViolationKind::SpanMismatch, node.id,
          "children must cover [" + std::to_string(node.span.hi) + ":" +
              std::to_string(node.span.lo) + "] and abut");
    if (node.level != 1 + std::max(hi.level, lo.level))
      add(ViolationKind::LevelInconsistency, node.id, "level != 1 + max(children)");
    if (node.kind == NodeKind::Ling && !hi.is_leaf() && hi.kind != NodeKind::Ling)
      add(ViolationKind::KindMismatch, node.id,
          "ling node requires a leaf or ling hi child");
  }

  // Cycle check: children must strictly precede in a DFS; detect back edges.
  {
    enum { White, Grey, Black };
    std::vector<uint8_t> color(nodes.size(), White);
    bool cycle = false;
    // Iterative DFS with an explicit stack of (node, phase).
    for (const PrefixNode& start : nodes) {
      if (color[static_cast<size_t>(start.id)] != White) continue;
      std::vector<std::pair<NodeId, int>> stack{{start.id, 0}};
      while (!stack.empty() && !cycle) {
        auto& [id, phase] = stack.back();
        const PrefixNode& cur = graph.node(id);
        if (phase == 0) {
          color[static_cast<size_t>(id)] = Grey;
          phase = 1;
          if (!cur.is_leaf()) {
            for (NodeId c : {cur.hi_child, cur.lo_child}) {
              if (c < 0 || c >= static_cast<NodeId>(nodes.size())) continue;
              if (color[static_cast<size_t>(c)] == Grey) {
                add(ViolationKind::Cycle, id, "back edge to node " + std::to_string(c));
                cycle = true;
              } else if (color[static_cast<size_t>(c)] == White) {
                stack.emplace_back(c, 0);
              }
            }
          }
        } else {
          color[static_cast<size_t>(id)] = Black;
          stack.pop_back();
        }
      }
      if (cycle) break;
    }
  }

  // Output columns.
  if (static_cast<int>(graph.outputs().size()) != n) {
    add(ViolationKind::MissingOutput, kNoNode, "outputs list must have width entries");
  } else {
    for (int c = 0; c < n; ++c) {
      NodeId id = graph.outputs()[static_cast<size_t>(c)];
      if (id == kNoNode || id < 0 || id >= static_cast<NodeId>(nodes.size())) {
        add(ViolationKind::MissingOutput, kNoNode,
            "no node produces [" + std::to_string(c) + ":0]");
        continue;
      }
      Span want{c, 0};
      if (graph.node(id).span != want)
        add(ViolationKind::MissingOutput, id,
            "output " + std::to_string(c) + " does not cover [" + std::to_string(c) + ":0]");
    }
  }

  // Dead internal nodes (leaves exempt).
  {
    std::vector<char> reach(nodes.size(), 0);
    std::vector<NodeId> stack;
    for (NodeId out : graph.outputs())
      if (out != kNoNode && out >= 0 && out < static_cast<NodeId>(nodes.size()))
        stack.push_back(out);
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      if (reach[static_cast<size_t>(id)]) continue;
      reach[static_cast<size_t>(id)] = 1;
      const PrefixNode& cur = graph.node(id);
      if (!cur.is_leaf()) {
        if (cur.hi_child >= 0 && cur.hi_child < static_cast<NodeId>(nodes.size()))
          stack.push_back(cur.hi_child);
        if (cur.lo_child >= 0 && cur.lo_child < static_cast<NodeId>(nodes.size()))
          stack.push_back(cur.lo_child);
      }
    }
    for (const PrefixNode& node : nodes)
      if (!node.is_leaf() && !reach[static_cast<size_t>(node.id)])
        add(ViolationKind::DeadNode, node.id, "unreachable from any output");
  }

  return report;
}

GraphMetrics metrics(const PrefixGraph& graph) {
  GraphMetrics m;
  for (const PrefixNode& n : graph.nodes()) {
    if (n.is_leaf()) continue;
    m.size++;
    m.depth = std::max(m.depth, n.level);
  }
  for (int fo : graph.fanouts()) m.max_fanout = std::max(m.max_fanout, fo);
  return m;
}

std::string graph_to_json(const PrefixGraph& graph) {
  json doc;
  doc["width"] = graph.width();
  doc["nodes"] = json::array();
  for (const PrefixNode& n : graph.nodes()) {
    json jn;
    jn["id"] = n.id;
    jn["hi"] = n.span.hi;
    jn["lo"] = n.span.lo;
    jn["kind"] = to_string(n.kind);
    if (n.is_leaf()) {
      jn["hi_child"] = nullptr;
      jn["lo_child"] = nullptr;
    } else {
      jn["hi_child"] = n.hi_child;
      jn["lo_child"] = n.lo_child;
    }
    doc["nodes"].push_back(jn);
  }
  doc["outputs"] = graph.outputs();
  // Boundary adapters between the two node algebras, derived from kinds:
  // a prefix parent absorbing a ling lo child recovers a group generate
  // (g_over_h); a ling parent over a prefix lo child extends the pseudo-carry
  // (h_over_g).
  json adapters = json::array();
  for (const PrefixNode& n : graph.nodes()) {
    if (n.is_leaf()) continue;
    const PrefixNode& lo = graph.node(n.lo_child);
    if (lo.is_leaf()) continue;
    if (n.kind == NodeKind::Prefix && lo.kind == NodeKind::Ling)
      adapters.push_back({{"node", n.id}, {"form", "g_over_h"}});
    else if (n.kind == NodeKind::Ling && lo.kind == NodeKind::Prefix)
      adapters.push_back({{"node", n.id}, {"form", "h_over_g"}});
  }
  doc["adapters"] = adapters;
  return doc.dump(2) + "\n";
}

PrefixGraph graph_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SyntaxError, std::string("graph json: ") + e.what());
  }
  if (!doc.contains("width") || !doc.contains("nodes") || !doc.contains("outputs"))
    throw Error(ErrorCode::SyntaxError, "graph json requires width, nodes, outputs");
  PrefixGraph g(doc["width"].get<int>());
  struct Raw {
    NodeId id;
    Span span;
    NodeKind kind;
    NodeId hi_child, lo_child;
  };
  std::vector<Raw> raw;
  for (const json& jn : doc["nodes"]) {
    Raw r;
    r.id = jn.at("id").get<NodeId>();
    r.span = Span{jn.at("hi").get<int>(), jn.at("lo").get<int>()};
    auto kind = node_kind_from_string(jn.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::SyntaxError, "unknown node kind");
    r.kind = *kind;
    r.hi_child = jn.at("hi_child").is_null() ? kNoNode : jn.at("hi_child").get<NodeId>();
    r.lo_child = jn.at("lo_child").is_null() ? kNoNode : jn.at("lo_child").get<NodeId>();
    raw.push_back(r);
  }
  // Insert leaves first, then non-leaves in child-before-parent order.
  std::vector<NodeId> remap(raw.size(), kNoNode);
  for (const Raw& r : raw)
    if (r.kind == NodeKind::Leaf) {
      if (static_cast<size_t>(r.id) >= raw.size())
        throw Error(ErrorCode::SyntaxError, "node id out of range");
      remap[static_cast<size_t>(r.id)] = g.add_leaf(r.span.lo);
    }
  bool progress = true;
  size_t placed = 0;
  std::vector<char> done(raw.size(), 0);
  for (const Raw& r : raw)
    if (r.kind == NodeKind::Leaf) done[static_cast<size_t>(r.id)] = 1, ++placed;
  while (progress) {
    progress = false;
    for (const Raw& r : raw) {
      if (r.kind == NodeKind::Leaf || done[static_cast<size_t>(r.id)]) continue;
      if (r.hi_child < 0 || r.lo_child < 0 ||
          static_cast<size_t>(r.hi_child) >= raw.size() ||
          static_cast<size_t>(r.lo_child) >= raw.size())
        throw Error(ErrorCode::SyntaxError, "child id out of range");
      if (!done[static_cast<size_t>(r.hi_child)] || !done[static_cast<size_t>(r.lo_child)])
        continue;
      remap[static_cast<size_t>(r.id)] =
          g.add_node(r.kind, remap[static_cast<size_t>(r.hi_child)],
                     remap[static_cast<size_t>(r.lo_child)]);
      done[static_cast<size_t>(r.id)] = 1;
      ++placed;
      progress = true;
    }
  }
  if (placed != raw.size())
    throw Error(ErrorCode::SyntaxError, "node list contains a cycle or dangling child");
  const auto& outs = doc["outputs"];
  if (static_cast<int>(outs.size()) != g.width())
    throw Error(ErrorCode::SyntaxError, "outputs list must have width entries");
  int column = 0;
  for (const json& jo : outs) {
    NodeId id = jo.get<NodeId>();
    if (id < 0 || static_cast<size_t>(id) >= raw.size())
      throw Error(ErrorCode::SyntaxError, "output id out of range");
    g.set_output(column++, remap[static_cast<size_t>(id)]);
  }
  g.canonicalize();
  return g;
}

}  // namespace axon
