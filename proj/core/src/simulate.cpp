#include "axon/simulate.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace axon {

std::string EquivVerdict::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << " ("
     << (mode == Mode::Exhaustive ? "exhaustive" : "randomized") << ", " << vectors_tested
     << " vectors";
  if (!mismatches.empty()) {
    os << ", first mismatch: a=0x" << std::hex << mismatches[0].a << " b=0x" << mismatches[0].b
       << std::dec << " cin=" << mismatches[0].cin << " got sum=0x" << std::hex
       << mismatches[0].got_sum << " want 0x" << mismatches[0].expected_sum << std::dec;
  }
  os << ")";
  return os.str();
}

BatchSimulator::BatchSimulator(const GateNetlist& nl, const CellLibrary& lib) {
  width_ = nl.width;
  net_count_ = nl.nets.size();
  a_net_.assign(static_cast<size_t>(width_), -1);
  b_net_.assign(static_cast<size_t>(width_), -1);
  sum_net_ = nl.sum_nets;
  cout_net_ = nl.cout_net;
  for (const Net& net : nl.nets) {
    if (net.port == PortKind::A) a_net_[static_cast<size_t>(net.port_bit)] = net.id;
    if (net.port == PortKind::B) b_net_[static_cast<size_t>(net.port_bit)] = net.id;
    if (net.port == PortKind::Cin) cin_net_ = net.id;
  }
  std::vector<int> order = levelize(nl);
  steps_.reserve(order.size());
  for (int id : order) {
    const Instance& inst = nl.instances[static_cast<size_t>(id)];
    const CellModel& cell = lib.cell(inst.cell);
    Step s;
    s.table = cell.function;
    s.arity = static_cast<uint8_t>(cell.inputs);
    for (int i = 0; i < 4; ++i) s.in[i] = inst.in[static_cast<size_t>(i)];
    s.out = inst.out;
    // Recognize the common functions structurally so the hot loop stays on
    // native word ops; anything else falls back to the truth table.
    s.op = Op::Table;
    struct Pattern {
      Op op;
      int arity;
      uint16_t table;
    };
    static const Pattern patterns[] = {
        {Op::Inv, 1, 0x1},     {Op::Nand2, 2, 0x7},  {Op::Nor2, 2, 0x1},
        {Op::And2, 2, 0x8},    {Op::Or2, 2, 0xE},    {Op::Xor2, 2, 0x6},
        {Op::Xnor2, 2, 0x9},   {Op::Aoi21, 3, 0x07}, {Op::Oai21, 3, 0x1F},
        {Op::Aoi22, 4, 0x0777}, {Op::Oai22, 4, 0x1FFF},
    };
    for (const Pattern& p : patterns)
      if (p.arity == cell.inputs && p.table == cell.function) {
        s.op = p.op;
        break;
      }
    steps_.push_back(s);
  }
}

void BatchSimulator::run(const std::vector<uint64_t>& a_bits, const std::vector<uint64_t>& b_bits,
                         uint64_t cin, std::vector<uint64_t>& sum_bits, uint64_t& cout) const {
  std::vector<uint64_t> value(net_count_, 0);
  for (int i = 0; i < width_; ++i) {
    value[static_cast<size_t>(a_net_[static_cast<size_t>(i)])] = a_bits[static_cast<size_t>(i)];
    value[static_cast<size_t>(b_net_[static_cast<size_t>(i)])] = b_bits[static_cast<size_t>(i)];
  }
  value[static_cast<size_t>(cin_net_)] = cin;
  for (const Step& s : steps_) {
    const uint64_t x = s.in[0] >= 0 ? value[static_cast<size_t>(s.in[0])] : 0;
    const uint64_t y = s.in[1] >= 0 ? value[static_cast<size_t>(s.in[1])] : 0;
    const uint64_t z = s.in[2] >= 0 ? value[static_cast<size_t>(s.in[2])] : 0;
    const uint64_t w = s.in[3] >= 0 ? value[static_cast<size_t>(s.in[3])] : 0;
    uint64_t out = 0;
    switch (s.op) {
      case Op::Inv: out = ~x; break;
      case Op::Nand2: out = ~(x & y); break;
      case Op::Nor2: out = ~(x | y); break;
      case Op::And2: out = x & y; break;
      case Op::Or2: out = x | y; break;
      case Op::Xor2: out = x ^ y; break;
      case Op::Xnor2: out = ~(x ^ y); break;
      case Op::Aoi21: out = ~((x & y) | z); break;
      case Op::Oai21: out = ~((x | y) & z); break;
      case Op::Aoi22: out = ~((x & y) | (z & w)); break;
      case Op::Oai22: out = ~((x | y) & (z | w)); break;
      case Op::Table: {
        out = 0;
        for (unsigned m = 0; m < (1u << s.arity); ++m) {
          if (!((s.table >> m) & 1)) continue;
          uint64_t term = ~0ull;
          const uint64_t ins[4] = {x, y, z, w};
          for (int i = 0; i < s.arity; ++i) term &= ((m >> i) & 1) ? ins[i] : ~ins[i];
          out |= term;
        }
        break;
      }
    }
    value[static_cast<size_t>(s.out)] = out;
  }
  sum_bits.assign(static_cast<size_t>(width_), 0);
  for (int i = 0; i < width_; ++i)
    sum_bits[static_cast<size_t>(i)] = value[static_cast<size_t>(sum_net_[static_cast<size_t>(i)])];
  cout = value[static_cast<size_t>(cout_net_)];
}

SimOutput simulate(const GateNetlist& nl, const CellLibrary& lib, uint64_t a, uint64_t b,
                   bool cin) {
  for (const Net& net : nl.nets)
    if (net.driver < 0 && net.port == PortKind::None)
      throw Error(ErrorCode::XState, "net " + std::to_string(net.id) + " undriven");
  BatchSimulator sim(nl, lib);
  std::vector<uint64_t> a_bits(static_cast<size_t>(nl.width)), b_bits(static_cast<size_t>(nl.width));
  for (int i = 0; i < nl.width; ++i) {
    a_bits[static_cast<size_t>(i)] = ((a >> i) & 1) ? ~0ull : 0;
    b_bits[static_cast<size_t>(i)] = ((b >> i) & 1) ? ~0ull : 0;
  }
  std::vector<uint64_t> sum_bits;
  uint64_t cout;
  sim.run(a_bits, b_bits, cin ? ~0ull : 0, sum_bits, cout);
  SimOutput out;
  for (int i = 0; i < nl.width; ++i)
    if (sum_bits[static_cast<size_t>(i)] & 1) out.sum |= 1ull << i;
  out.cout = cout & 1;
  return out;
}

namespace {

uint64_t mask_of(int n) { return n >= 64 ? ~0ull : ((1ull << n) - 1); }

// Checks one 64-lane batch; lanes [0, used) are valid.
bool check_batch(const BatchSimulator& sim, const uint64_t* a, const uint64_t* b, bool cin,
                 int used, EquivVerdict* verdict) {
  const int n = sim.width();
  std::vector<uint64_t> a_bits(static_cast<size_t>(n), 0), b_bits(static_cast<size_t>(n), 0);
  for (int lane = 0; lane < used; ++lane)
    for (int i = 0; i < n; ++i) {
      a_bits[static_cast<size_t>(i)] |= ((a[lane] >> i) & 1) << lane;
      b_bits[static_cast<size_t>(i)] |= ((b[lane] >> i) & 1) << lane;
    }
  std::vector<uint64_t> sum_bits;
  uint64_t cout;
  sim.run(a_bits, b_bits, cin ? ~0ull : 0, sum_bits, cout);

  bool ok = true;
  for (int lane = 0; lane < used; ++lane) {
    const uint64_t am = a[lane] & mask_of(n);
    const uint64_t bm = b[lane] & mask_of(n);
    const uint64_t ref = am + bm + (cin ? 1 : 0);
    const uint64_t ref_sum = ref & mask_of(n);
    const bool ref_cout = n >= 64 ? (cin ? ref <= am : ref < am) : ((ref >> n) & 1);
    uint64_t got_sum = 0;
    for (int i = 0; i < n; ++i) got_sum |= ((sum_bits[static_cast<size_t>(i)] >> lane) & 1) << i;
    const bool got_cout = (cout >> lane) & 1;
    if (got_sum != ref_sum || got_cout != ref_cout) {
      ok = false;
      if (verdict && verdict->mismatches.size() < 10) {
        SimVector v;
        v.a = a[lane] & mask_of(n);
        v.b = b[lane] & mask_of(n);
        v.cin = cin;
        v.expected_sum = ref_sum;
        v.expected_cout = ref_cout;
        v.got_sum = got_sum;
        v.got_cout = got_cout;
        verdict->mismatches.push_back(v);
      }
      if (!verdict) return false;
    }
  }
  return ok;
}

std::vector<std::pair<uint64_t, uint64_t>> corner_vectors(int n) {
  const uint64_t all = mask_of(n);
  std::vector<std::pair<uint64_t, uint64_t>> v;
  v.push_back({0, 0});
  v.push_back({all, all});
  v.push_back({0xAAAAAAAAAAAAAAAAull & all, 0x5555555555555555ull & all});
  v.push_back({0x5555555555555555ull & all, 0xAAAAAAAAAAAAAAAAull & all});
  for (int i = 0; i < n; ++i) {
    v.push_back({1ull << i, 0});
    v.push_back({0, 1ull << i});
    v.push_back({all, 1ull << i});  // carry-chain maximizers
  }
  v.push_back({all, 1});
  return v;
}

}  // namespace

bool quick_equiv(const BatchSimulator& sim, uint64_t seed, int samples) {
  const int n = sim.width();
  std::mt19937_64 rng(seed);
  std::vector<std::pair<uint64_t, uint64_t>> vecs = corner_vectors(n);
  for (int i = 0; i < samples; ++i)
    vecs.push_back({rng() & mask_of(n), rng() & mask_of(n)});
  for (bool cin : {false, true}) {
    for (size_t base = 0; base < vecs.size(); base += 64) {
      uint64_t a[64], b[64];
      int used = static_cast<int>(std::min<size_t>(64, vecs.size() - base));
      for (int lane = 0; lane < used; ++lane) {
        a[lane] = vecs[base + static_cast<size_t>(lane)].first;
        b[lane] = vecs[base + static_cast<size_t>(lane)].second;
      }
      if (!check_batch(sim, a, b, cin, used, nullptr)) return false;
    }
  }
  return true;
}

EquivVerdict check_equiv(const GateNetlist& nl, const CellLibrary& lib, uint64_t seed) {
  BatchSimulator sim(nl, lib);
  const int n = nl.width;
  EquivVerdict verdict;
  if (n <= 10) {
    verdict.mode = EquivVerdict::Mode::Exhaustive;
    uint64_t a_vals = 1ull << n;
    for (bool cin : {false, true})
      for (uint64_t a = 0; a < a_vals; ++a) {
        for (uint64_t b0 = 0; b0 < a_vals; b0 += 64) {
          uint64_t av[64], bv[64];
          int used = static_cast<int>(std::min<uint64_t>(64, a_vals - b0));
          for (int lane = 0; lane < used; ++lane) {
            av[lane] = a;
            bv[lane] = b0 + static_cast<uint64_t>(lane);
          }
          check_batch(sim, av, bv, cin, used, &verdict);
          verdict.vectors_tested += static_cast<uint64_t>(used);
        }
      }
  } else {
    verdict.mode = EquivVerdict::Mode::Randomized;
    std::mt19937_64 rng(seed);
    std::vector<std::pair<uint64_t, uint64_t>> vecs = corner_vectors(n);
    const int random_count = 100000;
    for (int i = 0; i < random_count; ++i)
      vecs.push_back({rng() & mask_of(n), rng() & mask_of(n)});
    for (bool cin : {false, true})
      for (size_t base = 0; base < vecs.size(); base += 64) {
        uint64_t a[64], b[64];
        int used = static_cast<int>(std::min<size_t>(64, vecs.size() - base));
        for (int lane = 0; lane < used; ++lane) {
          a[lane] = vecs[base + static_cast<size_t>(lane)].first;
          b[lane] = vecs[base + static_cast<size_t>(lane)].second;
        }
        check_batch(sim, a, b, cin, used, &verdict);
        verdict.vectors_tested += static_cast<uint64_t>(used);
      }
  }
  verdict.pass = verdict.mismatches.empty();
  return verdict;
}

}  // namespace axon
