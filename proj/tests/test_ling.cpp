#include <doctest.h>

#include <random>

#include "axon/ling.hpp"
#include "axon/prefix_graph.hpp"
#include "axon/topologies.hpp"

using namespace axon;

namespace {

uint64_t mask_of(int n) { return n >= 64 ? ~0ull : ((1ull << n) - 1); }

PrefixGraph all_ling(PrefixGraph g) {
  for (const PrefixNode& n : g.nodes())
    if (!n.is_leaf()) g.mutable_node(n.id).kind = NodeKind::Ling;
  return g;
}

// Random kind assignment repaired to the pseudo-carry chain rule: a Ling node
// needs a leaf or Ling hi child.
PrefixGraph random_kinds(PrefixGraph g, uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (const PrefixNode& n : g.nodes()) {
    if (n.is_leaf()) continue;
    bool want_ling = rng() & 1;
    const PrefixNode& hi = g.node(n.hi_child);
    bool hi_ok = hi.is_leaf() || hi.kind == NodeKind::Ling;
    g.mutable_node(n.id).kind = (want_ling && hi_ok) ? NodeKind::Ling : NodeKind::Prefix;
  }
  return g;
}

// Exhaustive check of the graph semantics against integer addition.
bool equivalent_to_addition(const PrefixGraph& g) {
  const int n = g.width();
  for (uint64_t cin = 0; cin < 2; ++cin)
    for (uint64_t a = 0; a <= mask_of(n); ++a)
      for (uint64_t b0 = 0; b0 <= mask_of(n); b0 += 64) {
        LaneInputs in;
        in.a.assign(static_cast<size_t>(n), 0);
        in.b.assign(static_cast<size_t>(n), 0);
        in.cin = cin ? ~0ull : 0;
        int lanes = static_cast<int>(std::min<uint64_t>(64, mask_of(n) - b0 + 1));
        for (int lane = 0; lane < lanes; ++lane)
          for (int i = 0; i < n; ++i) {
            in.a[static_cast<size_t>(i)] |= ((a >> i) & 1) << lane;
            in.b[static_cast<size_t>(i)] |= (((b0 + static_cast<uint64_t>(lane)) >> i) & 1) << lane;
          }
        LaneSignals sig = eval_signals(g, in);
        for (int lane = 0; lane < lanes; ++lane) {
          uint64_t b = b0 + static_cast<uint64_t>(lane);
          uint64_t ref = a + b + cin;
          uint64_t got = 0;
          for (int i = 0; i < n; ++i) got |= ((sig.sum[static_cast<size_t>(i)] >> lane) & 1) << i;
          if (got != (ref & mask_of(n))) return false;
          if (((sig.cout >> lane) & 1) != ((ref >> n) & 1)) return false;
        }
      }
  return true;
}

}  // namespace

TEST_CASE("pseudo-carry identity: H over [i:0] equals carry_out(i) OR carry_out(i-1)") {
  for (int n = 2; n <= 6; ++n) {
    PrefixGraph g = all_ling(make_classical(Architecture::KoggeStone, n));
    REQUIRE(validate(g).ok());
    for (uint64_t cin = 0; cin < 2; ++cin)
      for (uint64_t a = 0; a <= mask_of(n); ++a)
        for (uint64_t b = 0; b <= mask_of(n); ++b) {
          LaneInputs in;
          in.a.assign(static_cast<size_t>(n), 0);
          in.b.assign(static_cast<size_t>(n), 0);
          for (int i = 0; i < n; ++i) {
            in.a[static_cast<size_t>(i)] = (a >> i) & 1;
            in.b[static_cast<size_t>(i)] = (b >> i) & 1;
          }
          in.cin = cin;
          LaneSignals sig = eval_signals(g, in);
          // Ripple reference: carry_out(i) is bit i+1 of the truncated sum.
          for (int i = 1; i < n; ++i) {
            uint64_t keep = (1ull << (i + 1)) - 1;
            uint64_t co_i = (((a & keep) + (b & keep) + cin) >> (i + 1)) & 1;
            uint64_t keep1 = (1ull << i) - 1;
            uint64_t co_prev = (((a & keep1) + (b & keep1) + cin) >> i) & 1;
            uint64_t h = sig.node_value[static_cast<size_t>(g.output(i))] & 1;
            REQUIRE(h == (co_i | co_prev));
          }
        }
  }
}

TEST_CASE("pseudo-carry expansion matches the flattened or-form sum of products") {
  for (int n = 2; n <= 5; ++n) {
    PrefixGraph g = all_ling(make_classical(Architecture::KoggeStone, n));
    for (uint64_t cin = 0; cin < 2; ++cin)
      for (uint64_t a = 0; a <= mask_of(n); ++a)
        for (uint64_t b = 0; b <= mask_of(n); ++b) {
          LaneInputs in;
          in.a.assign(static_cast<size_t>(n), 0);
          in.b.assign(static_cast<size_t>(n), 0);
          for (int i = 0; i < n; ++i) {
            in.a[static_cast<size_t>(i)] = (a >> i) & 1;
            in.b[static_cast<size_t>(i)] = (b >> i) & 1;
          }
          in.cin = cin;
          LaneSignals sig = eval_signals(g, in);
          auto gbit = [&](int i) -> uint64_t {
            uint64_t gi = ((a >> i) & 1) & ((b >> i) & 1);
            if (i == 0) gi |= (((a ^ b) & 1)) & cin;  // folded carry-in
            return gi;
          };
          auto rho = [&](int i) -> uint64_t { return ((a >> i) | (b >> i)) & 1; };
          for (int i = 1; i < n; ++i) {
            // H_{i:0} = g_i + g_{i-1} + p_{i-1} g_{i-2} + ... + p_{i-1}..p_1 g_0
            uint64_t expect = gbit(i) | gbit(i - 1);
            uint64_t chain = 1;
            for (int j = i - 2; j >= 0; --j) {
              chain &= rho(j + 1);
              expect |= chain & gbit(j);
            }
            uint64_t h = sig.node_value[static_cast<size_t>(g.output(i))] & 1;
            REQUIRE(h == expect);
          }
        }
  }
}

TEST_CASE("resolved general recursion is exact for every kind mix up to width 8") {
  for (int n : {2, 3, 4, 5, 6, 7, 8}) {
    for (Architecture arch : {Architecture::KoggeStone, Architecture::BrentKung,
                              Architecture::Sklansky, Architecture::HanCarlson}) {
      PrefixGraph base = make_classical(arch, n);
      CHECK(equivalent_to_addition(base));
      CHECK(equivalent_to_addition(all_ling(base)));
      for (uint64_t seed = 1; seed <= 3; ++seed) {
        PrefixGraph mixed = random_kinds(base, seed * 77 + static_cast<uint64_t>(n));
        REQUIRE(validate(mixed).ok());
        CHECK(equivalent_to_addition(mixed));
      }
    }
  }
}

TEST_CASE("true-carry recovery over a two-bit pseudo-carry") {
  // rho_1 * (g_1 + g_0) == g_1 + p_1 * g_0 over all 16 operand rows (cin = 0).
  for (unsigned row = 0; row < 16; ++row) {
    unsigned a1 = row & 1, b1 = (row >> 1) & 1, a0 = (row >> 2) & 1, b0 = (row >> 3) & 1;
    unsigned lhs = (a1 | b1) & ((a1 & b1) | (a0 & b0));
    unsigned rhs = (a1 & b1) | ((a1 ^ b1) & (a0 & b0));
    CHECK(lhs == rhs);
  }
  PrefixGraph g = all_ling(make_classical(Architecture::KoggeStone, 2));
  CarryRecovery rec = ling_to_carry(g, g.output(1));
  CHECK(rec.rho_bit == 1);
  CHECK_THROWS_AS(ling_to_carry(g, g.output(0)), Error);  // leaf is not ling

  PrefixGraph plain = make_classical(Architecture::KoggeStone, 4);
  CHECK_THROWS_AS(ling_to_carry(plain, plain.output(3)), Error);
}

TEST_CASE("arrival estimate composes per-kind stage delays") {
  CellLibrary lib = CellLibrary::generic();
  PrefixGraph g2 = make_classical(Architecture::KoggeStone, 2);
  ArrivalEstimate est = arrival_estimate(g2, lib);
  // leaf stage (the xor-form propagate) + one AOI21 combine stage, in FO1.
  CHECK(est.critical == doctest::Approx(2.0 + 1.5));

  PrefixGraph ks = make_classical(Architecture::KoggeStone, 16);
  ArrivalEstimate eks = arrival_estimate(ks, lib);
  for (const PrefixNode& n : ks.nodes())
    if (!n.is_leaf())
      CHECK(eks.arrival[static_cast<size_t>(n.id)] == doctest::Approx(2.0 + 1.5 * n.level));
  CHECK(eks.critical == doctest::Approx(2.0 + 1.5 * 4));

  // First-level pseudo-carry beats the first-level prefix combine.
  PrefixGraph hy = all_ling(make_classical(Architecture::KoggeStone, 4));
  ArrivalEstimate ehy = arrival_estimate(hy, lib);
  for (const PrefixNode& n : hy.nodes())
    if (n.level == 1 && n.span.lo >= 1)
      CHECK(ehy.arrival[static_cast<size_t>(n.id)] == doctest::Approx(2.0));
  CHECK(2.0 < 2.0 + 1.5);

  // Monotone: arrival never below any child's arrival.
  for (const PrefixNode& n : ks.nodes())
    if (!n.is_leaf()) {
      CHECK(eks.arrival[static_cast<size_t>(n.id)] >=
            eks.arrival[static_cast<size_t>(n.hi_child)]);
      CHECK(eks.arrival[static_cast<size_t>(n.id)] >=
            eks.arrival[static_cast<size_t>(n.lo_child)]);
    }
}

TEST_CASE("hybridize converts along critical paths and never hurts the model") {
  CellLibrary lib = CellLibrary::generic();

  // Degenerate width: conversion happens only when the single node benefits;
  // structure is preserved either way.
  PrefixGraph g2 = make_classical(Architecture::KoggeStone, 2);
  PrefixGraph h2 = hybridize(g2, lib);
  CHECK(h2.nodes().size() == g2.nodes().size());
  CHECK(converted_nodes(h2).size() <= 1);
  CHECK(validate(h2).ok());
  CHECK(equivalent_to_addition(h2));

  for (int n : {4, 8, 16}) {
    PrefixGraph g = make_classical(Architecture::KoggeStone, n);
    PrefixGraph h = hybridize(g, lib);
    REQUIRE(validate(h).ok());
    if (n <= 8) CHECK(equivalent_to_addition(h));
  }

  for (Architecture arch : {Architecture::BrentKung, Architecture::Sklansky}) {
    PrefixGraph g = make_classical(arch, 8);
    PrefixGraph h = hybridize(g, lib);
    REQUIRE(validate(h).ok());
    CHECK(equivalent_to_addition(h));
  }
}
