#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "axon/ling.hpp"
#include "axon/logic_graph.hpp"
#include "axon/mapping.hpp"
#include "axon/polarity.hpp"
#include "axon/search.hpp"
#include "axon/timing.hpp"

namespace axon {

enum class SeedPolicy { All, SearchedOnly };

struct ExploreConfig {
  int width = 0;
  int depth = 0;    // 0 = unbounded
  int fanout = 0;   // 0 = unbounded
  bool hybrid = false;
  SeedPolicy seeds = SeedPolicy::All;
  int top_k = 12;   // clamped to [5, 20]
  uint64_t candidate_cap = 50000;
  uint64_t seed = 1;
  int threads = 1;  // 0 = hardware concurrency
  size_t max_per_cluster = 4096;
  uint64_t search_budget = 0;
};

/// One topology entering candidate generation: a seed graph, optionally
/// hybridized, lowered and enumerated. Owns the logic graph the enumeration
/// refers into.
struct ExploreVariant {
  std::string topology;
  bool hybrid = false;
  PrefixGraph graph;
  LogicGraph logic;
  std::optional<InverterEnumeration> enumeration;
};

struct CandidateInfo {
  int id = -1;
  int variant = -1;
  unsigned long long assignment_index = 0;
  EvalPoint point;
  bool on_frontier = false;
  bool selected = false;
};

/// The explored design space. Netlists are regenerated on demand from
/// (variant, assignment index) so a 50k-candidate run does not hold 50k
/// netlists in memory.
class CandidateSet {
 public:
  ExploreConfig config;
  std::vector<std::unique_ptr<ExploreVariant>> variants;
  std::vector<CandidateInfo> candidates;
  std::vector<int> frontier;  // candidate ids, ordered by (delay, area, id)
  std::vector<int> selected;  // candidate ids, ADP-ranked

  const CandidateInfo& candidate(int id) const { return candidates.at(static_cast<size_t>(id)); }

  /// Rebuilds a candidate's netlist deterministically; sized = after gate
  /// sizing (the pipeline's product), unsized = straight out of map_cells.
  GateNetlist netlist(int id, const CellLibrary& lib, bool sized = true) const;

  std::string scatter_csv() const;
};

/// Runs topology search + classical seeds, optional hybridization, P-network
/// construction, inverter enumeration, mapping, sizing and evaluation for
/// every candidate up to the cap (round-robin across variants, deterministic).
/// Every candidate passes a sampled equivalence screen before inclusion.
CandidateSet explore(const ExploreConfig& config, const CellLibrary& lib);

/// Non-dominated subset of `points` (area/delay, lower is better), returned as
/// indices ordered by (delay, area, index).
std::vector<int> pareto(const std::vector<EvalPoint>& points);

/// Top-k frontier points by ascending area-delay product; ties break by index.
/// k is clamped to [5, 20] and to the frontier size.
std::vector<int> select_topk(const std::vector<EvalPoint>& points,
                             const std::vector<int>& frontier, int k);

/// Writes scatter.csv, one Verilog file per selected candidate and a JSON run
/// manifest into `dir`. Returns the file paths written.
std::vector<std::string> export_reports(const CandidateSet& set, const CellLibrary& lib,
                                        const std::string& dir);

}  // namespace axon
