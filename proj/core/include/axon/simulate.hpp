#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "axon/cell_library.hpp"
#include "axon/netlist.hpp"

namespace axon {

/// One stimulus/response pair against reference integer addition.
struct SimVector {
  uint64_t a = 0;
  uint64_t b = 0;
  bool cin = false;
  uint64_t expected_sum = 0;
  bool expected_cout = false;
  uint64_t got_sum = 0;
  bool got_cout = false;
};

struct EquivVerdict {
  enum class Mode { Exhaustive, Randomized };
  Mode mode = Mode::Exhaustive;
  uint64_t vectors_tested = 0;
  std::vector<SimVector> mismatches;  // first 10 kept
  bool pass = false;
  std::string summary() const;
};

/// Levelized truth-table evaluation of one stimulus.
/// Throws XState if any net is undriven.
struct SimOutput {
  uint64_t sum = 0;
  bool cout = false;
};
SimOutput simulate(const GateNetlist& netlist, const CellLibrary& lib, uint64_t a, uint64_t b,
                   bool cin);

/// 64-lane compiled simulator for bulk checks.
class BatchSimulator {
 public:
  BatchSimulator(const GateNetlist& netlist, const CellLibrary& lib);

  /// a_bits/b_bits: per operand bit, one 64-lane word. Returns per-sum-bit
  /// words plus the carry-out word.
  void run(const std::vector<uint64_t>& a_bits, const std::vector<uint64_t>& b_bits,
           uint64_t cin, std::vector<uint64_t>& sum_bits, uint64_t& cout) const;

  int width() const { return width_; }

 private:
  enum class Op : uint8_t { Inv, Nand2, Nor2, And2, Or2, Xor2, Xnor2, Aoi21, Oai21, Aoi22, Oai22, Table };
  struct Step {
    Op op;
    uint16_t table;
    uint8_t arity;
    int in[4];
    int out;
  };
  int width_ = 0;
  size_t net_count_ = 0;
  std::vector<int> a_net_, b_net_;
  int cin_net_ = -1;
  std::vector<int> sum_net_;
  int cout_net_ = -1;
  std::vector<Step> steps_;
};

/// Equivalence against integer addition: exhaustive for width <= 10, otherwise
/// 10^5 seeded random vectors plus a fixed corner suite (all zeros/ones,
/// alternating patterns, single-bit walks, carry-chain maximizers, both cin
/// values).
EquivVerdict check_equiv(const GateNetlist& netlist, const CellLibrary& lib,
                         uint64_t seed = 0x5eed);

/// Sampling-level screen used inside exploration: corners plus `samples`
/// random vectors.
bool quick_equiv(const BatchSimulator& sim, uint64_t seed, int samples);

}  // namespace axon
