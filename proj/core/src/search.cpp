#include "axon/search.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>

namespace axon {

namespace {

int ceil_log2(int x) {
  int d = 0;
  while ((1 << d) < x) ++d;
  return d;
}

// DFS core shared by the enumerator and the min-size search. Spans live in a
// dense triangular table; realized spans carry their chosen split, level and
// consumer count so reuse and fanout bounds are O(1).
class SpanSearch {
 public:
  SpanSearch(const SearchConstraints& c)
      : n_(c.width),
        max_depth_(c.max_depth > 0 ? c.max_depth : std::max(1, c.width - 1)),
        max_fanout_(c.max_fanout),
        table_(static_cast<size_t>(n_ * (n_ + 1) / 2)) {
    for (int i = 0; i < n_; ++i) {
      Cell& cell = at(i, i);
      cell.realized = true;
      cell.level = 0;
    }
    deadline_ = std::chrono::steady_clock::time_point::max();
    if (c.time_budget_ms > 0)
      deadline_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(c.time_budget_ms);
    budget_ = c.node_budget;
  }

  // Visits every complete split assignment. `accept` may prune on partial
  // size; `emit` sees the complete state.
  void run(const std::function<bool()>& partial_ok, const std::function<bool()>& emit) {
    partial_ok_ = partial_ok;
    emit_ = emit;
    stopped_ = false;
    budget_exhausted_ = false;
    column(1);
  }

  int node_count() const { return node_count_; }
  int current_column() const { return current_column_; }
  int width() const { return n_; }
  bool budget_exhausted() const { return budget_exhausted_; }
  uint64_t steps() const { return steps_; }

  int depth_of_outputs() const {
    int d = 0;
    for (int i = 1; i < n_; ++i) d = std::max(d, at_const(i, 0).level);
    return d;
  }

  int current_max_fanout() const {
    int f = 0;
    for (const Cell& cell : table_)
      if (cell.realized) f = std::max(f, cell.consumers);
    return f;
  }

  int level_sum() const {
    int s = 0;
    for (const Cell& cell : table_)
      if (cell.realized) s += cell.level;
    return s;
  }

  // Current realized spans as a sorted (hi, lo, split) list; the lexicographic
  // identity of the topology.
  std::vector<std::array<int, 3>> span_list() const {
    std::vector<std::array<int, 3>> out;
    for (int hi = 0; hi < n_; ++hi)
      for (int lo = 0; lo < hi; ++lo) {
        const Cell& cell = at_const(hi, lo);
        if (cell.realized) out.push_back({hi, lo, cell.split});
      }
    return out;
  }

  PrefixGraph build_graph() const {
    PrefixGraph g(n_);
    // Realize by increasing length so children exist first.
    std::vector<NodeId> ids(table_.size(), kNoNode);
    for (int i = 0; i < n_; ++i) ids[index(i, i)] = g.add_leaf(i);
    for (int len = 2; len <= n_; ++len)
      for (int hi = len - 1; hi < n_; ++hi) {
        int lo = hi - len + 1;
        const Cell& cell = at_const(hi, lo);
        if (!cell.realized) continue;
        NodeId hi_id = ids[index(hi, cell.split + 1)];
        NodeId lo_id = ids[index(cell.split, lo)];
        ids[index(hi, lo)] = g.add_node(NodeKind::Prefix, hi_id, lo_id);
      }
    for (int c = 0; c < n_; ++c) g.set_output(c, ids[index(c, 0)]);
    g.canonicalize();
    return g;
  }

 private:
  struct Cell {
    bool realized = false;
    int split = -1;
    int level = 0;
    int consumers = 0;
  };

  size_t index(int hi, int lo) const {
    return static_cast<size_t>(hi * (hi + 1) / 2 + lo);
  }
  Cell& at(int hi, int lo) { return table_[index(hi, lo)]; }
  const Cell& at_const(int hi, int lo) const { return table_[index(hi, lo)]; }

  bool tick() {
    if (stopped_) return false;
    ++steps_;
    if (budget_ && steps_ > budget_) {
      stopped_ = true;
      budget_exhausted_ = true;
      return false;
    }
    if ((steps_ & 0xFFFF) == 0 && std::chrono::steady_clock::now() > deadline_) {
      stopped_ = true;
      budget_exhausted_ = true;
      return false;
    }
    return true;
  }

  void column(int i) {
    if (stopped_) return;
    if (i == n_) {
      if (!emit_()) stopped_ = true;
      return;
    }
    current_column_ = i;
    realize(i, 0, max_depth_, [this, i] { column(i + 1); });
    current_column_ = i;
  }

  bool consume(int hi, int lo) {
    Cell& cell = at(hi, lo);
    if (max_fanout_ > 0 && cell.consumers >= max_fanout_) return false;
    cell.consumers++;
    return true;
  }
  void unconsume(int hi, int lo) { at(hi, lo).consumers--; }

  // Realizes span [hi:lo] within a level budget, then calls `cont`. Explores
  // every split, balanced first so the initial descent reaches a valid graph
  // quickly even under tight depth bounds. Reused spans only type-check their
  // level.
  void realize(int hi, int lo, int budget, const std::function<void()>& cont) {
    if (!tick()) return;
    Cell& cell = at(hi, lo);
    if (cell.realized) {
      if (cell.level <= budget) cont();
      return;
    }
    if (budget < ceil_log2(hi - lo + 1)) return;
    if (!partial_ok_()) return;
    std::vector<int> splits;
    splits.reserve(static_cast<size_t>(hi - lo));
    const int mid = std::clamp((hi + lo - 1) / 2, lo, hi - 1);
    splits.push_back(mid);
    for (int d = 1; mid + d <= hi - 1 || mid - d >= lo; ++d) {
      if (mid + d <= hi - 1) splits.push_back(mid + d);
      if (mid - d >= lo) splits.push_back(mid - d);
    }
    for (int k : splits) {
      if (stopped_) break;
      realize(hi, k + 1, budget - 1, [this, hi, lo, k, budget, &cont] {
        realize(k, lo, budget - 1, [this, hi, lo, k, &cont] {
          if (!consume(hi, k + 1)) return;
          if (!consume(k, lo)) {
            unconsume(hi, k + 1);
            return;
          }
          Cell& self = at(hi, lo);
          self.realized = true;
          self.split = k;
          self.level = 1 + std::max(at(hi, k + 1).level, at(k, lo).level);
          ++node_count_;
          cont();
          --node_count_;
          self.realized = false;
          self.split = -1;
          self.level = 0;
          unconsume(k, lo);
          unconsume(hi, k + 1);
        });
      });
    }
  }

  int n_;
  int current_column_ = 1;
  int max_depth_;
  int max_fanout_;
  std::vector<Cell> table_;
  int node_count_ = 0;
  uint64_t steps_ = 0;
  uint64_t budget_ = 0;
  std::chrono::steady_clock::time_point deadline_;
  bool stopped_ = false;
  bool budget_exhausted_ = false;
  std::function<bool()> partial_ok_;
  std::function<bool()> emit_;
};

PrefixGraph single_bit_graph() {
  PrefixGraph g(1);
  g.set_output(0, g.add_leaf(0));
  g.canonicalize();
  return g;
}

void check_feasible(const SearchConstraints& c) {
  if (c.width <= 0) throw Error(ErrorCode::UnsupportedWidth, "width must be >= 1");
  if (c.max_depth > 0 && c.max_depth < ceil_log2(c.width))
    throw Error(ErrorCode::InfeasibleConstraints,
                "max_depth " + std::to_string(c.max_depth) + " < ceil(log2 " +
                    std::to_string(c.width) + ")");
  if (c.max_fanout > 0 && c.max_fanout < 2)
    throw Error(ErrorCode::InfeasibleConstraints, "max_fanout must be >= 2 when bounded");
}

}  // namespace

SearchResult search_min_size(const SearchConstraints& constraints) {
  check_feasible(constraints);
  SearchResult result;
  if (constraints.width == 1) {
    result.graph = single_bit_graph();
    result.optimal = true;
    return result;
  }
  SearchConstraints c = constraints;
  if (c.node_budget == 0 && c.width > 8) c.node_budget = 2'000'000;

  SpanSearch search(c);
  const int n = c.width;
  int best_size = std::numeric_limits<int>::max();
  int best_fanout = 0;
  int best_level_sum = 0;
  std::vector<std::array<int, 3>> best_spans;
  bool found = false;

  search.run(
      [&] {
        // Every still-missing output column costs at least one more node.
        int lower_bound = search.node_count() + (n - search.current_column());
        return lower_bound <= best_size;
      },
      [&] {
        int size = search.node_count();
        if (size > best_size) return true;
        int fanout = search.current_max_fanout();
        int lsum = search.level_sum();
        auto spans = search.span_list();
        bool better = !found;
        if (!better) {
          if (size != best_size)
            better = size < best_size;
          else if (fanout != best_fanout)
            better = fanout < best_fanout;
          else if (lsum != best_level_sum)
            better = lsum < best_level_sum;
          else
            better = spans < best_spans;
        }
        if (better) {
          found = true;
          best_size = size;
          best_fanout = fanout;
          best_level_sum = lsum;
          best_spans = std::move(spans);
        }
        return true;
      });

  if (!found)
    throw Error(ErrorCode::InfeasibleConstraints,
                "no valid topology found within the search budget");

  // Rebuild the winner from its span list.
  PrefixGraph g(n);
  std::vector<NodeId> ids(static_cast<size_t>(n * (n + 1) / 2), kNoNode);
  auto idx = [&](int hi, int lo) { return static_cast<size_t>(hi * (hi + 1) / 2 + lo); };
  for (int i = 0; i < n; ++i) ids[idx(i, i)] = g.add_leaf(i);
  std::sort(best_spans.begin(), best_spans.end(),
            [](const auto& a, const auto& b) { return (a[0] - a[1]) < (b[0] - b[1]); });
  for (const auto& s : best_spans) {
    NodeId hi_id = ids[idx(s[0], s[2] + 1)];
    NodeId lo_id = ids[idx(s[2], s[1])];
    ids[idx(s[0], s[1])] = g.add_node(NodeKind::Prefix, hi_id, lo_id);
  }
  for (int cidx = 0; cidx < n; ++cidx) g.set_output(cidx, ids[idx(cidx, 0)]);
  g.canonicalize();

  result.graph = std::move(g);
  result.budget_exhausted = search.budget_exhausted();
  result.optimal = n <= 8 && !result.budget_exhausted;
  result.steps = search.steps();
  return result;
}

void for_each_topology(const SearchConstraints& constraints,
                       const std::function<bool(const TopologySummary&)>& visit) {
  if (constraints.width > 12)
    throw Error(ErrorCode::WidthTooLarge, "enumeration is limited to width <= 12");
  check_feasible(constraints);
  if (constraints.width == 1) {
    TopologySummary s;
    s.size = 0;
    s.depth = 0;
    s.build = [] { return single_bit_graph(); };
    visit(s);
    return;
  }
  SpanSearch search(constraints);
  search.run([] { return true; },
             [&] {
               TopologySummary s;
               s.size = search.node_count();
               s.depth = search.depth_of_outputs();
               s.build = [&search] { return search.build_graph(); };
               return visit(s);
             });
}

std::vector<PrefixGraph> enumerate_topologies(const SearchConstraints& constraints,
                                              std::optional<size_t> limit) {
  std::vector<PrefixGraph> out;
  for_each_topology(constraints, [&](const TopologySummary& s) {
    if (limit && out.size() >= *limit) return false;
    out.push_back(s.build());
    return !limit || out.size() < *limit;
  });
  return out;
}

}  // namespace axon
