#include "axon/topologies.hpp"

#include <algorithm>
#include <vector>

namespace axon {

const char* to_string(Architecture arch) {
  switch (arch) {
    case Architecture::KoggeStone: return "kogge-stone";
    case Architecture::BrentKung: return "brent-kung";
    case Architecture::Sklansky: return "sklansky";
    case Architecture::HanCarlson: return "han-carlson";
  }
  return "?";
}

std::optional<Architecture> architecture_from_string(const std::string& name) {
  if (name == "ks" || name == "kogge-stone") return Architecture::KoggeStone;
  if (name == "bk" || name == "brent-kung") return Architecture::BrentKung;
  if (name == "sk" || name == "sklansky") return Architecture::Sklansky;
  if (name == "hc" || name == "han-carlson") return Architecture::HanCarlson;
  return std::nullopt;
}

namespace {

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Column-state builder: cur[i] is the node currently producing the widest
// span [i:j] of column i. Generators only ever extend columns downward.
struct Columns {
  PrefixGraph g;
  std::vector<NodeId> cur;

  explicit Columns(int n) : g(n), cur(static_cast<size_t>(n)) {
    for (int i = 0; i < n; ++i) cur[static_cast<size_t>(i)] = g.add_leaf(i);
  }

  int lo(int i) const { return g.node(cur[static_cast<size_t>(i)]).span.lo; }
  bool complete(int i) const { return lo(i) == 0; }

  // Combines column i with the producer of the abutting lower span.
  void combine(int i, NodeId lower) {
    cur[static_cast<size_t>(i)] =
        g.add_node(NodeKind::Prefix, cur[static_cast<size_t>(i)], lower);
  }

  PrefixGraph finish(int width) {
    for (int c = 0; c < width; ++c) g.set_output(c, cur[static_cast<size_t>(c)]);
    g.canonicalize();
    return std::move(g);
  }
};

PrefixGraph kogge_stone(int n) {
  Columns cols(n);
  for (int dist = 1; dist < n; dist <<= 1)
    for (int i = n - 1; i >= dist; --i)
      if (!cols.complete(i)) cols.combine(i, cols.cur[static_cast<size_t>(i - dist)]);
  return cols.finish(n);
}

PrefixGraph brent_kung(int n) {
  const int full = next_pow2(n);
  Columns cols(full);
  // Forward tree.
  for (int d = 1; (1 << d) <= full; ++d)
    for (int i = (1 << d) - 1; i < full; i += (1 << d))
      cols.combine(i, cols.cur[static_cast<size_t>(i - (1 << (d - 1)))]);
  // Backward tree; the d == 1 row is the distance-1 merge finishing the even
  // columns.
  for (int d = 31 - __builtin_clz(static_cast<unsigned>(full)) - 1; d >= 1; --d)
    for (int i = (1 << d) + (1 << (d - 1)) - 1; i < full; i += (1 << d))
      if (!cols.complete(i)) cols.combine(i, cols.cur[static_cast<size_t>(i - (1 << (d - 1)))]);
  return cols.finish(n);
}

PrefixGraph sklansky(int n) {
  const int full = next_pow2(n);
  Columns cols(full);
  for (int d = 0; (1 << d) < full; ++d)
    for (int i = 0; i < full; ++i)
      if (i & (1 << d)) {
        int anchor = (i >> d << d) - 1;  // root of the block below
        if (!cols.complete(i)) cols.combine(i, cols.cur[static_cast<size_t>(anchor)]);
      }
  return cols.finish(n);
}

PrefixGraph han_carlson(int n) {
  const int full = next_pow2(n);
  Columns cols(full);
  // Kogge-Stone over the odd columns.
  for (int i = 1; i < full; i += 2) cols.combine(i, cols.cur[static_cast<size_t>(i - 1)]);
  for (int dist = 2; dist < full; dist <<= 1)
    for (int i = full - 1; i >= dist + 1; i -= 2)
      if (!cols.complete(i)) cols.combine(i, cols.cur[static_cast<size_t>(i - dist)]);
  // Even columns pick up the neighbouring odd result in one final level.
  for (int i = 2; i < full; i += 2)
    if (!cols.complete(i)) cols.combine(i, cols.cur[static_cast<size_t>(i - 1)]);
  return cols.finish(n);
}

// Rebuilds the graph keeping only what the first `width` outputs reach.
PrefixGraph prune_to_width(const PrefixGraph& src, int width) {
  if (src.width() == width) return src;
  PrefixGraph g(width);
  std::vector<NodeId> remap(src.nodes().size(), kNoNode);
  // Child-before-parent holds because ids are canonical (sorted by level).
  for (const PrefixNode& n : src.nodes()) {
    if (n.span.hi >= width) continue;
    if (n.is_leaf()) {
      remap[static_cast<size_t>(n.id)] = g.add_leaf(n.span.lo);
    } else {
      NodeId hi = remap[static_cast<size_t>(n.hi_child)];
      NodeId lo = remap[static_cast<size_t>(n.lo_child)];
      if (hi == kNoNode || lo == kNoNode) continue;
      remap[static_cast<size_t>(n.id)] = g.add_node(n.kind, hi, lo);
    }
  }
  for (int c = 0; c < width; ++c) {
    NodeId out = remap[static_cast<size_t>(src.output(c))];
    if (out == kNoNode) throw Error(ErrorCode::Internal, "pruning lost an output column");
    g.set_output(c, out);
  }
  g.canonicalize();
  return g;
}

}  // namespace

PrefixGraph make_classical(Architecture arch, int width) {
  if (width <= 0) throw Error(ErrorCode::UnsupportedWidth, "width must be >= 1");
  if (width == 1) {
    PrefixGraph g(1);
    g.set_output(0, g.add_leaf(0));
    g.canonicalize();
    return g;
  }
  const int full = next_pow2(width);
  PrefixGraph g;
  switch (arch) {
    case Architecture::KoggeStone: g = kogge_stone(full); break;
    case Architecture::BrentKung: g = brent_kung(full); break;
    case Architecture::Sklansky: g = sklansky(full); break;
    case Architecture::HanCarlson: g = han_carlson(full); break;
  }
  return prune_to_width(g, width);
}

}  // namespace axon
