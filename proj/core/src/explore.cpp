#include "axon/explore.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "axon/simulate.hpp"
#include "axon/topologies.hpp"
#include "axon/verilog.hpp"

namespace axon {

using json = nlohmann::ordered_json;

namespace {

void parallel_for(int threads, size_t count, const std::function<void(size_t)>& fn) {
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || count < 2) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int spawn = std::min<int>(threads, static_cast<int>(count));
  pool.reserve(static_cast<size_t>(spawn));
  for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::pair<std::string, PrefixGraph>> seed_topologies(const ExploreConfig& cfg) {
  std::vector<std::pair<std::string, PrefixGraph>> seeds;
  auto admit = [&](const std::string& name, PrefixGraph g) {
    GraphMetrics m = metrics(g);
    if (cfg.depth > 0 && m.depth > cfg.depth) return;
    if (cfg.fanout > 0 && m.max_fanout > cfg.fanout) return;
    for (const auto& [n, existing] : seeds)
      if (existing == g) return;
    seeds.emplace_back(name, std::move(g));
  };
  if (cfg.seeds == SeedPolicy::All) {
    admit("kogge-stone", make_classical(Architecture::KoggeStone, cfg.width));
    admit("brent-kung", make_classical(Architecture::BrentKung, cfg.width));
    admit("sklansky", make_classical(Architecture::Sklansky, cfg.width));
    admit("han-carlson", make_classical(Architecture::HanCarlson, cfg.width));
  }
  SearchConstraints sc;
  sc.width = cfg.width;
  sc.max_depth = cfg.depth;
  sc.max_fanout = cfg.fanout;
  sc.node_budget = cfg.search_budget;
  SearchResult found = search_min_size(sc);
  admit("searched", std::move(found.graph));
  return seeds;
}

}  // namespace

GateNetlist CandidateSet::netlist(int id, const CellLibrary& lib, bool sized) const {
  const CandidateInfo& info = candidate(id);
  const ExploreVariant& variant = *variants.at(static_cast<size_t>(info.variant));
  PolarityAssignment assign = variant.enumeration->assignment(info.assignment_index);
  GateNetlist nl = map_cells(variant.logic, assign, lib);
  if (sized) nl = size_gates(nl, lib);
  return nl;
}

std::string CandidateSet::scatter_csv() const {
  std::string out = "id,area_transistors,delay_fo1,n_inverters,n_ling,on_frontier,selected\n";
  char line[160];
  for (const CandidateInfo& c : candidates) {
    std::snprintf(line, sizeof line, "%d,%lld,%.3f,%d,%d,%d,%d\n", c.id, c.point.area,
                  c.point.delay, c.point.inverters, c.point.ling_nodes, c.on_frontier ? 1 : 0,
                  c.selected ? 1 : 0);
    out += line;
  }
  return out;
}

CandidateSet explore(const ExploreConfig& config, const CellLibrary& lib) {
  if (config.width < 1) throw Error(ErrorCode::UnsupportedWidth, "width must be >= 1");
  CandidateSet set;
  set.config = config;

  for (auto& [name, graph] : seed_topologies(config)) {
    auto prefix_variant = std::make_unique<ExploreVariant>();
    prefix_variant->topology = name;
    prefix_variant->hybrid = false;
    prefix_variant->graph = graph;
    prefix_variant->logic = build_p_network(prefix_variant->graph);
    prefix_variant->enumeration.emplace(prefix_variant->logic, config.max_per_cluster);
    set.variants.push_back(std::move(prefix_variant));

    if (config.hybrid) {
      PrefixGraph hy = hybridize(graph, lib);
      if (!converted_nodes(hy).empty()) {
        auto hybrid_variant = std::make_unique<ExploreVariant>();
        hybrid_variant->topology = name;
        hybrid_variant->hybrid = true;
        hybrid_variant->graph = std::move(hy);
        hybrid_variant->logic = build_p_network(hybrid_variant->graph);
        hybrid_variant->enumeration.emplace(hybrid_variant->logic, config.max_per_cluster);
        set.variants.push_back(std::move(hybrid_variant));
      }
    }
  }
  if (set.variants.empty()) throw Error(ErrorCode::EmptyDesignSpace, "no seed topology survived");

  // Round-robin across variants over the cost-ordered head of each
  // enumeration: the cap keeps topology diversity and the deterministic walk
  // keeps reruns byte-identical.
  struct Task {
    int variant;
    unsigned long long index;
  };
  std::vector<Task> tasks;
  {
    std::vector<unsigned long long> cursor(set.variants.size(), 0);
    bool progress = true;
    while (progress && tasks.size() < config.candidate_cap) {
      progress = false;
      for (size_t v = 0; v < set.variants.size() && tasks.size() < config.candidate_cap; ++v) {
        if (cursor[v] >= set.variants[v]->enumeration->total()) continue;
        tasks.push_back({static_cast<int>(v), cursor[v]++});
        progress = true;
      }
    }
  }
  if (tasks.empty()) throw Error(ErrorCode::EmptyDesignSpace, "no candidate generated");

  set.candidates.resize(tasks.size());
  parallel_for(config.threads, tasks.size(), [&](size_t i) {
    const Task& task = tasks[i];
    const ExploreVariant& variant = *set.variants[static_cast<size_t>(task.variant)];
    PolarityAssignment assign = variant.enumeration->assignment(task.index);
    GateNetlist mapped = map_cells(variant.logic, assign, lib);
    {
      BatchSimulator sim(mapped, lib);
      if (!quick_equiv(sim, config.seed ^ (0x9e3779b97f4a7c15ull * (i + 1)), 64))
        throw Error(ErrorCode::Internal,
                    "candidate failed sampled equivalence before inclusion");
    }
    GateNetlist sized = size_gates(mapped, lib);
    CandidateInfo info;
    info.id = static_cast<int>(i);
    info.variant = task.variant;
    info.assignment_index = task.index;
    info.point = evaluate(sized, lib, variant.logic.ling_node_count, static_cast<int>(i));
    set.candidates[i] = std::move(info);
  });

  std::vector<EvalPoint> points;
  points.reserve(set.candidates.size());
  for (const CandidateInfo& c : set.candidates) points.push_back(c.point);
  set.frontier = pareto(points);
  for (int id : set.frontier) set.candidates[static_cast<size_t>(id)].on_frontier = true;
  set.selected = select_topk(points, set.frontier, config.top_k);
  for (int id : set.selected) set.candidates[static_cast<size_t>(id)].selected = true;
  return set;
}

std::vector<int> pareto(const std::vector<EvalPoint>& points) {
  std::vector<int> order(points.size());
  for (size_t i = 0; i < points.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const EvalPoint& a = points[static_cast<size_t>(x)];
    const EvalPoint& b = points[static_cast<size_t>(y)];
    if (a.delay != b.delay) return a.delay < b.delay;
    if (a.area != b.area) return a.area < b.area;
    return x < y;
  });
  // Sweep by ascending delay. Within one delay group only the minimum-area
  // points survive, and only if no earlier group already reached that area.
  std::vector<int> frontier;
  long long best_before = std::numeric_limits<long long>::max();
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    long long group_min = std::numeric_limits<long long>::max();
    while (j < order.size() && points[static_cast<size_t>(order[j])].delay ==
                                   points[static_cast<size_t>(order[i])].delay) {
      group_min = std::min(group_min, points[static_cast<size_t>(order[j])].area);
      ++j;
    }
    if (group_min < best_before)
      for (size_t k = i; k < j; ++k)
        if (points[static_cast<size_t>(order[k])].area == group_min)
          frontier.push_back(order[k]);
    best_before = std::min(best_before, group_min);
    i = j;
  }
  return frontier;
}

std::vector<int> select_topk(const std::vector<EvalPoint>& points,
                             const std::vector<int>& frontier, int k) {
  k = std::clamp(k, 5, 20);
  std::vector<int> ranked = frontier;
  std::sort(ranked.begin(), ranked.end(), [&](int x, int y) {
    double ax = static_cast<double>(points[static_cast<size_t>(x)].area) *
                points[static_cast<size_t>(x)].delay;
    double ay = static_cast<double>(points[static_cast<size_t>(y)].area) *
                points[static_cast<size_t>(y)].delay;
    if (ax != ay) return ax < ay;
    return x < y;
  });
  if (ranked.size() > static_cast<size_t>(k)) ranked.resize(static_cast<size_t>(k));
  return ranked;
}

std::vector<std::string> export_reports(const CandidateSet& set, const CellLibrary& lib,
                                        const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, dir + ": " + ec.message());
  std::vector<std::string> written;
  auto write = [&](const std::string& name, const std::string& content) {
    std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << content;
    written.push_back(path);
  };

  auto t0 = std::chrono::steady_clock::now();
  write("scatter.csv", set.scatter_csv());
  for (int id : set.selected) {
    GateNetlist nl = set.netlist(id, lib, true);
    write("cand_" + std::to_string(id) + ".v", emit_verilog(nl));
  }
  auto wall_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
          .count();

  json manifest;
  manifest["format"] = 1;
  manifest["config"] = {{"width", set.config.width},     {"depth", set.config.depth},
                        {"fanout", set.config.fanout},   {"hybrid", set.config.hybrid},
                        {"top_k", set.config.top_k},     {"candidate_cap", set.config.candidate_cap},
                        {"seed", set.config.seed},       {"threads", set.config.threads}};
  json variants = json::array();
  for (const auto& v : set.variants)
    variants.push_back({{"topology", v->topology},
                        {"hybrid", v->hybrid},
                        {"candidates", v->enumeration->total()},
                        {"clusters", v->enumeration->clusters().size()}});
  manifest["variants"] = variants;
  manifest["counts"] = {{"candidates", set.candidates.size()},
                        {"frontier", set.frontier.size()},
                        {"selected", set.selected.size()}};
  manifest["export_wall_ms"] = wall_ms;
  write("manifest.json", manifest.dump(2) + "\n");
  return written;
}

}  // namespace axon
