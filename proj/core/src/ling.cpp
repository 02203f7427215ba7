#include "axon/ling.hpp"

#include <algorithm>
#include <limits>

#include "axon/logic_graph.hpp"
#include "axon/mapping.hpp"
#include "axon/polarity.hpp"
#include "axon/timing.hpp"

namespace axon {

namespace {

struct StageDelays {
  double leaf;      // slowest per-bit signal a first-level combine waits for
  double combine;   // AOI/OAI merge stage
  double ling_pair; // AOI22 straight off the ports
  double two_input; // NAND/NOR merge stage
  double recover;   // true-carry recovery at a Ling output column
  double p_leaf_xor;
  double p_leaf_or;
  double p_combine;
};

StageDelays stages(const CellLibrary& lib) {
  const double fo1 = lib.fo1_delay();
  return {
      lib.cell("XOR2").p_par / fo1,
      lib.cell("AOI21").p_par / fo1,
      lib.cell("AOI22").p_par / fo1,
      lib.cell("NOR2").p_par / fo1,
      lib.cell("NAND2").p_par / fo1,
      lib.cell("XOR2").p_par / fo1,
      lib.cell("NOR2").p_par / fo1,
      lib.cell("NAND2").p_par / fo1,
  };
}

int ceil_log2(int x) {
  int d = 0;
  while ((1 << d) < x) ++d;
  return d;
}

// A first-level Ling pair maps to one AOI22 on the raw operand bits unless it
// touches the carry-in fold at bit 0, where it degrades to a two-input merge
// of the leaf generates.
bool is_ling_port_pair(const PrefixGraph& g, const PrefixNode& n) {
  return n.kind == NodeKind::Ling && g.node(n.hi_child).is_leaf() &&
         g.node(n.lo_child).is_leaf() && n.span.lo >= 1;
}

bool is_two_input(const PrefixGraph& g, const PrefixNode& n) {
  // Ling node with the top leaf as hi child and a non-ling lo part: plain
  // or-merge, no propagate input.
  if (n.kind != NodeKind::Ling) return false;
  const PrefixNode& hi = g.node(n.hi_child);
  const PrefixNode& lo = g.node(n.lo_child);
  if (!hi.is_leaf()) return false;
  return lo.kind != NodeKind::Ling;
}

double node_stage(const PrefixGraph& g, const PrefixNode& n, const StageDelays& d) {
  if (n.is_leaf()) return d.leaf;
  if (is_ling_port_pair(g, n)) return d.ling_pair;
  if (is_two_input(g, n)) return d.two_input;
  return d.combine;
}

// Arrival of the group propagate a combine waits for: leaf cost of its flavor
// plus one merge stage per doubling.
double p_wait(const PrefixGraph& g, const PrefixNode& n, const StageDelays& d) {
  if (n.is_leaf() || is_ling_port_pair(g, n) || is_two_input(g, n)) return 0.0;
  const PrefixNode& lo = g.node(n.lo_child);
  const int k = lo.span.hi;
  const bool lo_ling = lo.kind == NodeKind::Ling;
  int hi_bound, lo_bound;
  bool or_form;
  if (n.kind == NodeKind::Prefix) {
    hi_bound = n.span.hi;
    lo_bound = lo_ling ? k : k + 1;
    or_form = lo_ling;
  } else {
    hi_bound = n.span.hi - 1;
    lo_bound = k >= 1 ? k : k + 1;
    or_form = k >= 1;
  }
  if (hi_bound < lo_bound) return 0.0;
  int len = hi_bound - lo_bound + 1;
  double leaf = or_form ? d.p_leaf_or : d.p_leaf_xor;
  return leaf + ceil_log2(len) * d.p_combine;
}

}  // namespace

ArrivalEstimate arrival_estimate(const PrefixGraph& graph, const CellLibrary& lib) {
  const StageDelays d = stages(lib);
  ArrivalEstimate est;
  est.arrival.resize(graph.nodes().size(), 0.0);
  // Canonical ids are level-sorted, so a forward pass is topological.
  for (const PrefixNode& n : graph.nodes()) {
    double in = 0.0;
    if (!n.is_leaf() && !is_ling_port_pair(graph, n)) {
      in = std::max(est.arrival[static_cast<size_t>(n.hi_child)],
                    est.arrival[static_cast<size_t>(n.lo_child)]);
      in = std::max(in, p_wait(graph, n, d));
    }
    est.arrival[static_cast<size_t>(n.id)] = in + node_stage(graph, n, d);
  }
  // Ling output columns pay the true-carry recovery before the sum xor.
  double critical = 0.0;
  for (NodeId out : graph.outputs()) {
    const PrefixNode& o = graph.node(out);
    double t = est.arrival[static_cast<size_t>(out)] +
               (o.kind == NodeKind::Ling ? d.recover : 0.0);
    critical = std::max(critical, t);
  }
  est.critical = critical;

  // Backward pass: required times; zero slack marks the critical path(s).
  std::vector<double> required(graph.nodes().size(), est.critical + 1.0);
  for (NodeId out : graph.outputs()) {
    const PrefixNode& o = graph.node(out);
    double req = est.critical - (o.kind == NodeKind::Ling ? d.recover : 0.0);
    required[static_cast<size_t>(out)] = std::min(required[static_cast<size_t>(out)], req);
  }
  for (auto it = graph.nodes().rbegin(); it != graph.nodes().rend(); ++it) {
    const PrefixNode& n = *it;
    if (n.is_leaf() || is_ling_port_pair(graph, n)) continue;
    double child_req = required[static_cast<size_t>(n.id)] - node_stage(graph, n, d);
    for (NodeId c : {n.hi_child, n.lo_child})
      required[static_cast<size_t>(c)] = std::min(required[static_cast<size_t>(c)], child_req);
  }
  est.on_critical_path.resize(graph.nodes().size(), 0);
  for (const PrefixNode& n : graph.nodes())
    if (required[static_cast<size_t>(n.id)] - est.arrival[static_cast<size_t>(n.id)] < 1e-9)
      est.on_critical_path[static_cast<size_t>(n.id)] = 1;
  return est;
}

double output_arrival(const PrefixGraph& graph, const CellLibrary& lib, int column) {
  const StageDelays d = stages(lib);
  ArrivalEstimate est = arrival_estimate(graph, lib);
  const PrefixNode& out = graph.node(graph.output(column));
  double t = est.arrival[static_cast<size_t>(out.id)];
  if (out.kind == NodeKind::Ling) t += d.recover;
  return t;
}

namespace {

// Proxy for a graph's achievable speed: best sized delay over the head of the
// cost-ordered inverter enumeration.
double enumerated_top_delay(const PrefixGraph& g, const CellLibrary& lib, int samples) {
  LogicGraph logic = build_p_network(g);
  InverterEnumeration enumeration(logic, 256);
  unsigned long long count =
      std::min<unsigned long long>(enumeration.total(), static_cast<unsigned long long>(samples));
  double best = std::numeric_limits<double>::infinity();
  for (unsigned long long i = 0; i < count; ++i) {
    GateNetlist nl = size_gates(map_cells(logic, enumeration.assignment(i), lib), lib);
    best = std::min(best, sta(nl, lib).delay);
  }
  return best;
}

// One conversion round on the mapped coarse model. Critical prefix nodes
// convert; with `spine_closure` their hi spines convert too (a pseudo-carry
// needs a pseudo-carry hi chain, so lo-critical nodes are otherwise stuck).
bool convert_critical_round(PrefixGraph& current, const CellLibrary& lib, bool spine_closure) {
  LogicGraph logic = build_p_network(current);
  InverterEnumeration enumeration(logic, 256);
  GateNetlist mapped = map_cells(logic, enumeration.assignment(0), lib);
  TimingReport timing = sta(mapped, lib);
  std::vector<uint8_t> critical(current.nodes().size(), 0);
  for (const Instance& inst : mapped.instances) {
    if (inst.provenance < 0) continue;
    if (timing.instance_slack[static_cast<size_t>(inst.id)] > 1e-9) continue;
    NodeId origin = logic.node(inst.provenance).graph_node;
    if (origin != kNoNode) critical[static_cast<size_t>(origin)] = 1;
  }
  bool changed = false;
  for (const PrefixNode& n : current.nodes()) {
    if (n.is_leaf() || n.kind == NodeKind::Ling) continue;
    if (!critical[static_cast<size_t>(n.id)]) continue;
    const PrefixNode& hi = current.node(n.hi_child);
    bool eligible = hi.is_leaf() || hi.kind == NodeKind::Ling;
    if (!eligible && !spine_closure) continue;
    NodeId walk = n.id;
    while (walk != kNoNode) {
      PrefixNode& node = current.mutable_node(walk);
      if (node.is_leaf() || node.kind == NodeKind::Ling) break;
      node.kind = NodeKind::Ling;
      changed = true;
      walk = node.hi_child;
    }
  }
  return changed;
}

}  // namespace

PrefixGraph hybridize(const PrefixGraph& graph, const CellLibrary& lib) {
  // Conversion rounds along the coarse-model critical path produce a family
  // of hybrids of increasing Ling extent; keep whichever the fast model likes
  // best. Earlier snapshots win ties, so no node converts without a measured
  // payoff.
  const int samples = 24;
  PrefixGraph best = graph;
  double best_delay = enumerated_top_delay(graph, lib, samples);
  PrefixGraph current = graph;
  auto consider = [&](const PrefixGraph& g) {
    double d = enumerated_top_delay(g, lib, samples);
    if (d < best_delay - 1e-9) {
      best_delay = d;
      best = g;
    }
  };
  for (int round = 0; round < 32; ++round) {
    if (!convert_critical_round(current, lib, false)) break;
    consider(current);
  }
  for (int round = 0; round < 32; ++round) {
    if (!convert_critical_round(current, lib, true)) break;
    consider(current);
  }
  return best;
}

std::vector<NodeId> converted_nodes(const PrefixGraph& graph) {
  std::vector<NodeId> out;
  for (const PrefixNode& n : graph.nodes())
    if (n.kind == NodeKind::Ling) out.push_back(n.id);
  return out;
}

CarryRecovery ling_to_carry(const PrefixGraph& graph, NodeId id) {
  const PrefixNode& n = graph.node(id);
  if (n.kind != NodeKind::Ling)
    throw Error(ErrorCode::KindMismatch, "ling_to_carry requires a ling node");
  return {n.span.hi, id};
}

LaneSignals eval_signals(const PrefixGraph& graph, const LaneInputs& in) {
  const int n = graph.width();
  std::vector<uint64_t> g(static_cast<size_t>(n)), p_xor(static_cast<size_t>(n)),
      p_or(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    g[static_cast<size_t>(i)] = in.a[static_cast<size_t>(i)] & in.b[static_cast<size_t>(i)];
    p_xor[static_cast<size_t>(i)] = in.a[static_cast<size_t>(i)] ^ in.b[static_cast<size_t>(i)];
    p_or[static_cast<size_t>(i)] = in.a[static_cast<size_t>(i)] | in.b[static_cast<size_t>(i)];
  }
  // Carry-in folds into bit 0's generate.
  const uint64_t g0 = g[0] | (p_xor[0] & in.cin);

  auto and_over = [&](const std::vector<uint64_t>& v, int hi, int lo) {
    uint64_t acc = ~0ull;
    for (int i = lo; i <= hi; ++i) acc &= v[static_cast<size_t>(i)];
    return acc;
  };

  LaneSignals out;
  out.node_value.resize(graph.nodes().size(), 0);
  for (const PrefixNode& node : graph.nodes()) {
    uint64_t val;
    if (node.is_leaf()) {
      val = node.span.lo == 0 ? g0 : g[static_cast<size_t>(node.span.lo)];
    } else {
      const PrefixNode& hi = graph.node(node.hi_child);
      const PrefixNode& lo = graph.node(node.lo_child);
      const uint64_t hiv = out.node_value[static_cast<size_t>(node.hi_child)];
      const uint64_t lov = out.node_value[static_cast<size_t>(node.lo_child)];
      const int k = lo.span.hi;  // children abut at k, k+1
      const bool lo_is_ling = lo.kind == NodeKind::Ling;
      if (node.kind == NodeKind::Prefix) {
        // G = G_hi + P * X_lo; the propagate span stretches down to the lo
        // child's top bit (in OR form) when the lo child is a pseudo-carry.
        // A pseudo-carry hi child first recovers its true carry through the
        // top bit's or-form propagate.
        uint64_t hi_eff = (!hi.is_leaf() && hi.kind == NodeKind::Ling)
                              ? (p_or[static_cast<size_t>(node.span.hi)] & hiv)
                              : hiv;
        uint64_t p = lo_is_ling ? and_over(p_or, node.span.hi, k)
                                : and_over(p_xor, node.span.hi, k + 1);
        val = hi_eff | (p & lov);
      } else {
        // H = H_hi + P * X_lo with the propagate chain starting one below the
        // top bit, in OR form down to the lo child's top bit; the xor-form
        // fallback only covers spans that would touch the folded bit 0.
        uint64_t p;
        if (k >= 1)
          p = and_over(p_or, node.span.hi - 1, k);
        else
          p = k + 1 <= node.span.hi - 1 ? and_over(p_xor, node.span.hi - 1, k + 1) : ~0ull;
        val = hiv | (p & lov);
      }
    }
    out.node_value[static_cast<size_t>(node.id)] = val;
  }

  out.carry.resize(static_cast<size_t>(n) + 1, 0);
  out.carry[0] = in.cin;
  for (int c = 0; c < n; ++c) {
    const PrefixNode& producer = graph.node(graph.output(c));
    uint64_t v = out.node_value[static_cast<size_t>(producer.id)];
    if (producer.kind == NodeKind::Ling) v &= p_or[static_cast<size_t>(c)];
    out.carry[static_cast<size_t>(c) + 1] = v;
  }
  out.sum.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out.sum[static_cast<size_t>(i)] = p_xor[static_cast<size_t>(i)] ^ out.carry[static_cast<size_t>(i)];
  out.cout = out.carry[static_cast<size_t>(n)];
  return out;
}

}  // namespace axon
