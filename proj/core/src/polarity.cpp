#include "axon/polarity.hpp"

#include <algorithm>
#include <numeric>

namespace axon {

std::vector<uint8_t> baseline_polarity(const LogicGraph& logic) {
  std::vector<uint8_t> neg(logic.nodes.size(), 0);
  for (const LogicNode& n : logic.nodes) {
    switch (n.kind) {
      case LogicKind::SumXor:
        neg[static_cast<size_t>(n.id)] = 0;  // pinned by the output port
        break;
      case LogicKind::LeafP:
        neg[static_cast<size_t>(n.id)] = 1;  // provisional; demand pass below
        break;
      default:
        neg[static_cast<size_t>(n.id)] = (n.plevel % 2 == 0) ? 1 : 0;
        break;
    }
  }
  // Xor-kind producers have cost-free duals: give each leaf propagate the
  // polarity its sensitive consumers expect when they agree.
  std::vector<int> want(logic.nodes.size(), -1);
  for (const LogicEdge& e : logic.edges) {
    if (!e.sensitive || e.to < 0) continue;
    if (logic.node(e.from).kind != LogicKind::LeafP) continue;
    int expected = neg[static_cast<size_t>(e.to)] ? 0 : 1;
    int& w = want[static_cast<size_t>(e.from)];
    if (w == -1)
      w = expected;
    else if (w != expected)
      w = -2;  // conflict: keep the parity default
  }
  for (const LogicNode& n : logic.nodes)
    if (n.kind == LogicKind::LeafP && want[static_cast<size_t>(n.id)] >= 0)
      neg[static_cast<size_t>(n.id)] = static_cast<uint8_t>(want[static_cast<size_t>(n.id)]);
  return neg;
}

bool edge_mismatched(const LogicGraph& logic, const std::vector<uint8_t>& negated,
                     const LogicEdge& e) {
  (void)logic;
  if (!e.sensitive) return false;
  if (e.to < 0) return negated[static_cast<size_t>(e.from)] == 1;  // ports are positive
  return negated[static_cast<size_t>(e.from)] == negated[static_cast<size_t>(e.to)];
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

}  // namespace

InverterEnumeration::InverterEnumeration(const LogicGraph& logic, size_t max_per_cluster)
    : logic_(logic) {
  baseline_ = baseline_polarity(logic);

  std::vector<int> mismatched;
  for (size_t i = 0; i < logic.edges.size(); ++i)
    if (edge_mismatched(logic, baseline_, logic.edges[i])) mismatched.push_back(static_cast<int>(i));

  // Group mismatches sharing a node: resolving one affects the other.
  UnionFind uf(mismatched.size());
  {
    std::vector<int> first_edge_at(logic.nodes.size(), -1);
    for (size_t mi = 0; mi < mismatched.size(); ++mi) {
      const LogicEdge& e = logic.edges[static_cast<size_t>(mismatched[mi])];
      for (int endpoint : {e.from, e.to}) {
        if (endpoint < 0) continue;
        int& slot = first_edge_at[static_cast<size_t>(endpoint)];
        if (slot == -1)
          slot = static_cast<int>(mi);
        else
          uf.unite(slot, static_cast<int>(mi));
      }
    }
  }
  std::vector<std::vector<int>> groups;
  {
    std::vector<int> root_to_group(mismatched.size(), -1);
    for (size_t mi = 0; mi < mismatched.size(); ++mi) {
      int r = uf.find(static_cast<int>(mi));
      if (root_to_group[static_cast<size_t>(r)] == -1) {
        root_to_group[static_cast<size_t>(r)] = static_cast<int>(groups.size());
        groups.emplace_back();
      }
      groups[static_cast<size_t>(root_to_group[static_cast<size_t>(r)])].push_back(mismatched[mi]);
    }
  }

  // Flippable members per cluster; sum nodes stay pinned.
  std::vector<int> node_cluster(logic.nodes.size(), -1);
  for (size_t ci = 0; ci < groups.size(); ++ci) {
    MismatchCluster cluster;
    cluster.edges = groups[ci];
    for (int ei : cluster.edges) {
      const LogicEdge& e = logic.edges[static_cast<size_t>(ei)];
      for (int endpoint : {e.from, e.to})
        if (endpoint >= 0 && logic.node(endpoint).kind != LogicKind::SumXor)
          cluster.nodes.push_back(endpoint);
    }
    std::sort(cluster.nodes.begin(), cluster.nodes.end());
    cluster.nodes.erase(std::unique(cluster.nodes.begin(), cluster.nodes.end()),
                        cluster.nodes.end());
    clusters_.push_back(std::move(cluster));
  }
  std::sort(clusters_.begin(), clusters_.end(),
            [](const MismatchCluster& a, const MismatchCluster& b) {
              return a.nodes.front() < b.nodes.front();
            });
  for (size_t ci = 0; ci < clusters_.size(); ++ci)
    for (int node : clusters_[ci].nodes) node_cluster[static_cast<size_t>(node)] = static_cast<int>(ci);

  // Incidence lists restricted to sensitive edges.
  std::vector<std::vector<int>> incident(logic.nodes.size());
  for (size_t i = 0; i < logic.edges.size(); ++i) {
    const LogicEdge& e = logic.edges[i];
    if (!e.sensitive) continue;
    if (e.from >= 0) incident[static_cast<size_t>(e.from)].push_back(static_cast<int>(i));
    if (e.to >= 0) incident[static_cast<size_t>(e.to)].push_back(static_cast<int>(i));
  }

  // Enumerate per-cluster flip masks. A mask is feasible when every mismatch it
  // produces stays inside this cluster or lands on free territory (a port or a
  // node no cluster owns); leaking one into another cluster would couple their
  // resolutions.
  std::vector<uint8_t> scratch = baseline_;
  for (size_t ci = 0; ci < clusters_.size(); ++ci) {
    MismatchCluster& cluster = clusters_[ci];
    const size_t m = cluster.nodes.size();
    const uint64_t scan_cap = 1ull << std::min<size_t>(m, 20);
    if (m >= 20) cluster.truncated = true;
    std::vector<int> touched;
    for (int node : cluster.nodes)
      for (int ei : incident[static_cast<size_t>(node)]) touched.push_back(ei);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    std::vector<std::pair<int, uint32_t>> ranked;
    for (uint64_t mask = 0; mask < scan_cap; ++mask) {
      for (size_t j = 0; j < m; ++j)
        if (mask & (1ull << j))
          scratch[static_cast<size_t>(cluster.nodes[j])] ^= 1;
      bool feasible = true;
      for (int ei : touched) {
        const LogicEdge& e = logic.edges[static_cast<size_t>(ei)];
        if (!edge_mismatched(logic, scratch, e)) continue;
        for (int endpoint : {e.from, e.to}) {
          if (endpoint < 0) continue;
          int owner = node_cluster[static_cast<size_t>(endpoint)];
          if (owner != -1 && owner != static_cast<int>(ci)) {
            feasible = false;
            break;
          }
        }
        if (!feasible) break;
      }
      if (feasible) {
        // Rank resolutions by the inverter count they imply (residual edges
        // plus port inverters of flipped duals) so capped exploration walks
        // the cheap corner of the space first.
        int cost = 0;
        for (int ei : touched)
          if (edge_mismatched(logic, scratch, logic.edges[static_cast<size_t>(ei)])) ++cost;
        for (size_t j = 0; j < m; ++j) {
          const LogicNode& n = logic.node(cluster.nodes[j]);
          bool negated = scratch[static_cast<size_t>(cluster.nodes[j])] != 0;
          switch (n.kind) {
            case LogicKind::LeafG:
              cost += n.bit == 0 ? (negated ? 2 : 1) : (negated ? 0 : 2);
              break;
            case LogicKind::LeafRho: cost += negated ? 0 : 2; break;
            case LogicKind::LingPair: cost += negated ? 0 : 4; break;
            default: break;
          }
        }
        ranked.push_back({cost, static_cast<uint32_t>(mask)});
      }
      for (size_t j = 0; j < m; ++j)
        if (mask & (1ull << j))
          scratch[static_cast<size_t>(cluster.nodes[j])] ^= 1;
      if (ranked.size() >= max_per_cluster) {
        if (mask + 1 < scan_cap) cluster.truncated = true;
        break;
      }
    }
    if (ranked.empty())
      throw Error(ErrorCode::Internal, "cluster without feasible resolution");
    std::sort(ranked.begin(), ranked.end());
    for (const auto& [cost, mask] : ranked) cluster.feasible.push_back(mask);
    if (cluster.truncated) truncated_ = true;
    unsigned long long count = cluster.feasible.size();
    if (total_ > std::numeric_limits<unsigned long long>::max() / count)
      total_ = std::numeric_limits<unsigned long long>::max();
    else
      total_ *= count;
  }
}

PolarityAssignment InverterEnumeration::assignment(unsigned long long index) const {
  PolarityAssignment out;
  out.negated = baseline_;
  out.cluster_choice.resize(clusters_.size(), 0);
  unsigned long long rest = index;
  for (size_t ci = 0; ci < clusters_.size(); ++ci) {
    const MismatchCluster& cluster = clusters_[ci];
    unsigned long long count = cluster.feasible.size();
    unsigned long long digit = rest % count;
    rest /= count;
    out.cluster_choice[ci] = static_cast<int>(digit);
    uint32_t mask = cluster.feasible[static_cast<size_t>(digit)];
    for (size_t j = 0; j < cluster.nodes.size(); ++j)
      if (mask & (1u << j)) out.negated[static_cast<size_t>(cluster.nodes[j])] ^= 1;
  }
  for (size_t i = 0; i < logic_.edges.size(); ++i)
    if (edge_mismatched(logic_, out.negated, logic_.edges[i]))
      out.inverted_edges.push_back(static_cast<int>(i));
  return out;
}

std::vector<PolarityAssignment> InverterEnumeration::all(size_t limit) const {
  std::vector<PolarityAssignment> out;
  unsigned long long n = std::min<unsigned long long>(total_, limit);
  out.reserve(static_cast<size_t>(n));
  for (unsigned long long i = 0; i < n; ++i) out.push_back(assignment(i));
  return out;
}

InverterEnumeration enumerate_inverter_candidates(const LogicGraph& logic,
                                                  size_t max_per_cluster) {
  return InverterEnumeration(logic, max_per_cluster);
}

}  // namespace axon
