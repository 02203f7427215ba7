#include "axon/logic_graph.hpp"

#include <algorithm>

namespace axon {

const char* to_string(LogicKind kind) {
  switch (kind) {
    case LogicKind::LeafG: return "leaf_g";
    case LogicKind::LeafP: return "leaf_p";
    case LogicKind::LeafRho: return "leaf_rho";
    case LogicKind::GroupP: return "group_p";
    case LogicKind::Combine: return "combine";
    case LogicKind::LingPair: return "ling_pair";
    case LogicKind::Recover: return "recover";
    case LogicKind::SumXor: return "sum_xor";
  }
  return "?";
}

namespace {

class Builder {
 public:
  Builder(const PrefixGraph& graph) : g_(graph) {
    out_.width = graph.width();
    out_.source = graph;
    out_.leaf_g.assign(static_cast<size_t>(out_.width), -1);
    out_.leaf_p.assign(static_cast<size_t>(out_.width), -1);
    out_.leaf_rho.assign(static_cast<size_t>(out_.width), -1);
    combine_of_.assign(graph.nodes().size(), -1);
    // Spans available for group-propagate decomposition, per top column.
    span_lo_.assign(static_cast<size_t>(out_.width), {});
    for (const PrefixNode& n : graph.nodes())
      if (!n.is_leaf())
        span_lo_[static_cast<size_t>(n.span.hi)].push_back(
            {n.span.lo, g_.node(n.lo_child).span.hi});
    for (auto& v : span_lo_) std::sort(v.begin(), v.end());
  }

  LogicGraph build() {
    // Combines in topological (canonical id) order.
    for (const PrefixNode& n : g_.nodes())
      if (!n.is_leaf()) combine_of_[static_cast<size_t>(n.id)] = make_combine(n);

    // Column carries; Ling outputs recover the true carry through rho.
    out_.carry_source.assign(static_cast<size_t>(out_.width), -1);
    for (int c = 0; c < out_.width; ++c) {
      const PrefixNode& producer = g_.node(g_.output(c));
      int src = producer.is_leaf() ? leaf_g(producer.span.lo)
                                   : combine_of_[static_cast<size_t>(producer.id)];
      if (producer.kind == NodeKind::Ling) {
        int rho = leaf_rho(c);
        int rec = add_node(LogicKind::Recover, -1, Span{c, 0}, 0, producer.id, {rho, src});
        src = rec;
      }
      out_.carry_source[static_cast<size_t>(c)] = src;
    }

    // Sum bits. Bit 0 XORs the raw propagate with the carry-in port.
    out_.sum_node.assign(static_cast<size_t>(out_.width), -1);
    for (int i = 0; i < out_.width; ++i) {
      std::vector<int> in;
      in.push_back(leaf_p(i));
      if (i > 0) in.push_back(out_.carry_source[static_cast<size_t>(i - 1)]);
      out_.sum_node[static_cast<size_t>(i)] =
          add_node(LogicKind::SumXor, i, Span{i, i}, 0, kNoNode, in);
    }

    finish_edges();
    compute_plevels();
    for (const PrefixNode& n : g_.nodes())
      if (n.kind == NodeKind::Ling) out_.ling_node_count++;
    return std::move(out_);
  }

 private:
  int add_node(LogicKind kind, int bit, Span span, char flavor, NodeId origin,
               std::vector<int> in) {
    LogicNode n;
    n.id = static_cast<int>(out_.nodes.size());
    n.kind = kind;
    n.bit = bit;
    n.span = span;
    n.flavor = flavor;
    n.graph_node = origin;
    n.in = std::move(in);
    out_.nodes.push_back(std::move(n));
    return out_.nodes.back().id;
  }

  int leaf_p(int bit) {
    int& slot = out_.leaf_p[static_cast<size_t>(bit)];
    if (slot < 0) slot = add_node(LogicKind::LeafP, bit, Span{bit, bit}, 0, kNoNode, {});
    return slot;
  }

  int leaf_g(int bit) {
    int& slot = out_.leaf_g[static_cast<size_t>(bit)];
    if (slot < 0) {
      // Bit 0 folds cin through the majority identity g0' = g0 + rho0*cin;
      // the mapper expands it into a small port-fed template.
      slot = add_node(LogicKind::LeafG, bit, Span{bit, bit}, 0, kNoNode, {});
    }
    return slot;
  }

  // Or-form propagate straight off the operand ports: one NOR2, the same
  // transistor count as any shared construction and none of the xor-form
  // leaf's latency on the pseudo-carry paths.
  int leaf_rho(int bit) {
    if (bit < 1) throw Error(ErrorCode::Internal, "or-form propagate demanded at bit 0");
    int& slot = out_.leaf_rho[static_cast<size_t>(bit)];
    if (slot < 0)
      slot = add_node(LogicKind::LeafRho, bit, Span{bit, bit}, 0, kNoNode, {});
    return slot;
  }

  // Demand-driven group propagate over `span` in the given flavor. Reuses the
  // generate tree's split where a node with the same span exists; otherwise
  // peels the longest node span below the same top column.
  int group_p(char flavor, Span span) {
    if (span.hi < span.lo) throw Error(ErrorCode::Internal, "empty propagate span");
    if (span.is_leaf()) return flavor == 'x' ? leaf_p(span.lo) : leaf_rho(span.lo);
    auto key = std::make_pair(flavor, (span.hi << 16) | span.lo);
    if (auto it = p_memo_.find(key); it != p_memo_.end()) return it->second;
    int k = split_hint(span);
    int hi_part = group_p(flavor, Span{span.hi, k + 1});
    int lo_part = group_p(flavor, Span{k, span.lo});
    int id = add_node(LogicKind::GroupP, -1, span, flavor, kNoNode, {hi_part, lo_part});
    p_memo_.emplace(key, id);
    return id;
  }

  int split_hint(Span span) const {
    const auto& spans = span_lo_[static_cast<size_t>(span.hi)];
    // Exact span match first, then the longest strictly-contained chunk.
    for (const auto& [lo, split] : spans)
      if (lo == span.lo) return split;
    for (const auto& [lo, split] : spans)
      if (lo > span.lo) return lo - 1;  // chunk [hi:lo], remainder [lo-1:span.lo]
    return span.hi - 1;
  }

  int make_combine(const PrefixNode& n) {
    const PrefixNode& hi = g_.node(n.hi_child);
    const PrefixNode& lo = g_.node(n.lo_child);
    const int k = lo.span.hi;
    const bool lo_ling = lo.kind == NodeKind::Ling;

    // First-level pseudo-carry away from the carry-in fold: a single AOI22 on
    // the raw operand bits.
    if (n.kind == NodeKind::Ling && hi.is_leaf() && lo.is_leaf() && n.span.lo >= 1)
      return add_node(LogicKind::LingPair, n.span.hi, n.span, 0, n.id, {});

    int hi_in = hi.is_leaf() ? leaf_g(hi.span.lo) : combine_of_[static_cast<size_t>(hi.id)];
    int lo_in = lo.is_leaf() ? leaf_g(lo.span.lo) : combine_of_[static_cast<size_t>(lo.id)];

    Span p_span{0, 0};
    char p_flavor = 0;
    bool has_p = true;
    if (n.kind == NodeKind::Prefix) {
      if (lo_ling) {
        p_flavor = 'o';
        p_span = Span{n.span.hi, k};
      } else {
        p_flavor = 'x';
        p_span = Span{n.span.hi, k + 1};
      }
    } else {
      // Ling combines consume or-form propagates down to the lo child's top
      // bit; the xor-form fallback only covers spans that would touch the
      // folded bit 0.
      if (k >= 1) {
        p_flavor = 'o';
        p_span = Span{n.span.hi - 1, k};
      } else if (k + 1 <= n.span.hi - 1) {
        p_flavor = 'x';
        p_span = Span{n.span.hi - 1, k + 1};
      } else {
        has_p = false;  // hi child is the top leaf over the folded pair
      }
    }
    std::vector<int> in;
    if (has_p) in.push_back(group_p(p_flavor, p_span));
    in.push_back(lo_in);
    in.push_back(hi_in);
    // A prefix parent over a pseudo-carry hi child recovers the true carry in
    // the same cell: G = rho_top * H_hi + P * lo, one AOI22.
    if (n.kind == NodeKind::Prefix && !hi.is_leaf() && hi.kind == NodeKind::Ling)
      in.push_back(leaf_rho(n.span.hi));
    return add_node(LogicKind::Combine, -1, n.span, 0, n.id, std::move(in));
  }

  void finish_edges() {
    for (const LogicNode& n : out_.nodes) {
      bool absorbing = n.kind == LogicKind::LeafP || n.kind == LogicKind::SumXor;
      for (size_t pin = 0; pin < n.in.size(); ++pin)
        out_.edges.push_back({n.in[pin], n.id, static_cast<int>(pin), !absorbing});
    }
    // Carry-out port sink; sums are pinned positive via their own node.
    out_.edges.push_back(
        {out_.carry_source[static_cast<size_t>(out_.width - 1)], -1, 0, true});
  }

  void compute_plevels() {
    for (LogicNode& n : out_.nodes) {
      switch (n.kind) {
        case LogicKind::LeafG:
        case LogicKind::LeafP:
        case LogicKind::LeafRho:
        case LogicKind::LingPair:
          n.plevel = 0;
          break;
        default: {
          int lvl = 0;
          for (int in : n.in) lvl = std::max(lvl, out_.nodes[static_cast<size_t>(in)].plevel);
          n.plevel = lvl + 1;
          break;
        }
      }
    }
  }

  const PrefixGraph& g_;
  LogicGraph out_;
  std::vector<int> combine_of_;
  std::vector<std::vector<std::pair<int, int>>> span_lo_;  // per hi column: (lo, split k)
  std::map<std::pair<char, int>, int> p_memo_;
};

}  // namespace

std::vector<std::pair<char, Span>> LogicGraph::group_p_spans() const {
  std::vector<std::pair<char, Span>> out;
  for (const LogicNode& n : nodes)
    if (n.kind == LogicKind::GroupP) out.push_back({n.flavor, n.span});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second.hi != b.second.hi) return a.second.hi < b.second.hi;
    return a.second.lo < b.second.lo;
  });
  return out;
}

std::vector<int> LogicGraph::consumer_counts() const {
  std::vector<int> counts(nodes.size(), 0);
  for (const LogicEdge& e : edges)
    if (e.from >= 0 && e.to >= 0) counts[static_cast<size_t>(e.from)]++;
  // The cout sink also consumes.
  for (const LogicEdge& e : edges)
    if (e.to < 0 && e.from >= 0) counts[static_cast<size_t>(e.from)]++;
  return counts;
}

LogicGraph build_p_network(const PrefixGraph& graph) {
  ValidationReport report = validate(graph);
  if (!report.ok())
    throw Error(ErrorCode::Internal, "build_p_network on invalid graph:\n" + report.to_string());
  return Builder(graph).build();
}

}  // namespace axon
