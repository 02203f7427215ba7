#include <doctest.h>

#include <set>

#include "axon/prefix_graph.hpp"
#include "axon/topologies.hpp"

using namespace axon;

namespace {

// Span algebra oracle: walk one output's derivation and check the leaf union
// reconstructs the interval exactly.
bool covers_exactly(const PrefixGraph& g, NodeId id, int hi, int lo) {
  const PrefixNode& n = g.node(id);
  if (n.is_leaf()) return hi == lo && n.span.lo == lo;
  return covers_exactly(g, n.hi_child, hi, g.node(n.lo_child).span.hi + 1) &&
         covers_exactly(g, n.lo_child, g.node(n.lo_child).span.hi, lo);
}

}  // namespace

TEST_CASE("kogge-stone structure matches closed forms") {
  PrefixGraph g = make_classical(Architecture::KoggeStone, 16);
  CHECK(validate(g).ok());
  GraphMetrics m = metrics(g);
  // n*log2(n) - n + 1 nodes, ceil(log2 n) depth. Completed low columns are
  // reused by one boundary column per later level, so the lsb leaf fans out
  // log2(n) times.
  CHECK(m.size == 49);
  CHECK(m.depth == 4);
  CHECK(m.max_fanout == 4);

  for (int n = 2; n <= 64; ++n) {
    PrefixGraph gn = make_classical(Architecture::KoggeStone, n);
    int want_depth = 0;
    while ((1 << want_depth) < n) ++want_depth;
    CHECK(metrics(gn).depth == want_depth);
  }
}

TEST_CASE("brent-kung structure matches closed forms") {
  PrefixGraph g = make_classical(Architecture::BrentKung, 16);
  CHECK(validate(g).ok());
  GraphMetrics m = metrics(g);
  // 2n - 2 - log2(n) nodes, 2*log2(n) - 2 depth.
  CHECK(m.size == 26);
  CHECK(m.depth == 6);

  for (int n = 8; n <= 64; n *= 2) {
    GraphMetrics mb = metrics(make_classical(Architecture::BrentKung, n));
    GraphMetrics mk = metrics(make_classical(Architecture::KoggeStone, n));
    CHECK(mb.size < mk.size);
  }
}

TEST_CASE("sklansky fanout grows with width") {
  PrefixGraph g = make_classical(Architecture::Sklansky, 16);
  CHECK(validate(g).ok());
  CHECK(metrics(g).max_fanout == 8);
}

TEST_CASE("all generators validate across widths including non-powers of two") {
  for (Architecture arch : {Architecture::KoggeStone, Architecture::BrentKung,
                            Architecture::Sklansky, Architecture::HanCarlson}) {
    for (int n : {1, 2, 3, 4, 5, 7, 8, 12, 16, 23, 31, 32}) {
      PrefixGraph g = make_classical(arch, n);
      INFO(to_string(arch) << " width " << n);
      CHECK(validate(g).ok());
      CHECK(g.width() == n);
      for (int c = 0; c < n; ++c) {
        const PrefixNode& out = g.node(g.output(c));
        CHECK(out.span.hi == c);
        CHECK(out.span.lo == 0);
        CHECK(covers_exactly(g, out.id, c, 0));
      }
    }
  }
}

TEST_CASE("width one and zero") {
  PrefixGraph g = make_classical(Architecture::KoggeStone, 1);
  GraphMetrics m = metrics(g);
  CHECK(m.size == 0);
  CHECK(m.depth == 0);
  CHECK(m.max_fanout == 0);
  CHECK_THROWS_AS(make_classical(Architecture::KoggeStone, 0), Error);
}

TEST_CASE("metrics is pure") {
  PrefixGraph g = make_classical(Architecture::HanCarlson, 16);
  GraphMetrics a = metrics(g);
  GraphMetrics b = metrics(g);
  CHECK(a.size == b.size);
  CHECK(a.depth == b.depth);
  CHECK(a.max_fanout == b.max_fanout);
}

TEST_CASE("validate flags structural damage") {
  // Children must abut and cover the span: a node relabeled [5:2] over
  // children [5:4] and [2:0] has a hole at 3 and overshoots 2.
  PrefixGraph g(6);
  std::vector<NodeId> leaves;
  for (int i = 0; i < 6; ++i) leaves.push_back(g.add_leaf(i));
  NodeId n54 = g.add_node(NodeKind::Prefix, leaves[5], leaves[4]);
  NodeId n10 = g.add_node(NodeKind::Prefix, leaves[1], leaves[0]);
  NodeId n20 = g.add_node(NodeKind::Prefix, leaves[2], n10);
  NodeId n32 = g.add_node(NodeKind::Prefix, leaves[3], leaves[2]);
  NodeId bad = g.add_node(NodeKind::Prefix, n54, n32);  // [5:2], valid so far
  g.mutable_node(bad).lo_child = n20;                   // children no longer abut
  for (int c = 0; c < 6; ++c) g.set_output(c, c == 2 ? n20 : (c == 1 ? n10 : leaves[0]));
  ValidationReport rep = validate(g);
  CHECK(!rep.ok());
  bool has_span = false, has_missing = false;
  for (const Violation& v : rep.violations) {
    if (v.kind == ViolationKind::SpanMismatch) has_span = true;
    if (v.kind == ViolationKind::MissingOutput) has_missing = true;
  }
  CHECK(has_span);
  CHECK(has_missing);
}

TEST_CASE("missing output column is reported") {
  PrefixGraph g(4);
  for (int i = 0; i < 4; ++i) g.add_leaf(i);
  NodeId n10 = g.add_node(NodeKind::Prefix, g.find_span({1, 1}), g.find_span({0, 0}));
  NodeId n20 = g.add_node(NodeKind::Prefix, g.find_span({2, 2}), n10);
  g.set_output(0, g.find_span({0, 0}));
  g.set_output(1, n10);
  g.set_output(2, n20);
  g.set_output(3, n20);  // wrong span for [3:0]
  ValidationReport rep = validate(g);
  CHECK(!rep.ok());
  bool has_missing = false;
  for (const Violation& v : rep.violations)
    if (v.kind == ViolationKind::MissingOutput) has_missing = true;
  CHECK(has_missing);
}

TEST_CASE("generator output is valid by construction") {
  CHECK(validate(make_classical(Architecture::KoggeStone, 8)).ok());
}

TEST_CASE("json round trip is byte-stable") {
  for (Architecture arch : {Architecture::KoggeStone, Architecture::BrentKung}) {
    PrefixGraph g = make_classical(arch, 12);
    std::string j1 = graph_to_json(g);
    PrefixGraph h = graph_from_json(j1);
    CHECK(h == g);
    CHECK(graph_to_json(h) == j1);
  }
}

TEST_CASE("node ids are dense and level-ordered") {
  PrefixGraph g = make_classical(Architecture::BrentKung, 16);
  for (size_t i = 0; i < g.nodes().size(); ++i) {
    CHECK(g.nodes()[i].id == static_cast<NodeId>(i));
    if (i > 0) {
      const PrefixNode& prev = g.nodes()[i - 1];
      const PrefixNode& cur = g.nodes()[i];
      bool ordered = prev.level < cur.level ||
                     (prev.level == cur.level &&
                      (prev.span.lo < cur.span.lo ||
                       (prev.span.lo == cur.span.lo && prev.span.hi < cur.span.hi)));
      CHECK(ordered);
    }
  }
}
