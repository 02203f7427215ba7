#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "axon/cell_library.hpp"

namespace axon {

/// Signal sources that are not gate outputs.
enum class PortKind : uint8_t { None, A, B, Cin };

/// One mapped gate. Input pins are ordered per the cell's function table;
/// unused slots hold -1. `provenance` is the logic-node id the instance
/// implements (-1 for inserted inverters and other plumbing).
struct Instance {
  int id = -1;
  std::string cell;
  int size = 1;
  std::array<int, 4> in{-1, -1, -1, -1};
  int out = -1;
  int provenance = -1;
};

/// One signal. Driven either by exactly one instance or one input port.
struct Net {
  int id = -1;
  int driver = -1;  // instance id; -1 when port-driven
  PortKind port = PortKind::None;
  int port_bit = -1;
  bool is_output = false;   // feeds sum[out_bit] (or cout when out_bit == width)
  int out_bit = -1;
  std::string name;         // optional; assigned by the parser/emitter
};

/// Structural gate-level netlist of an n-bit adder with ports
/// a[n-1:0], b[n-1:0], cin, sum[n-1:0], cout.
struct GateNetlist {
  int width = 0;
  std::string module_name;
  std::vector<Instance> instances;
  std::vector<Net> nets;
  std::vector<int> sum_nets;  // net id per sum bit
  int cout_net = -1;

  int add_net() {
    Net n;
    n.id = static_cast<int>(nets.size());
    nets.push_back(n);
    return n.id;
  }

  int add_port_net(PortKind kind, int bit) {
    int id = add_net();
    nets[static_cast<size_t>(id)].port = kind;
    nets[static_cast<size_t>(id)].port_bit = bit;
    return id;
  }

  int add_instance(const std::string& cell, std::array<int, 4> in, int out, int provenance) {
    Instance inst;
    inst.id = static_cast<int>(instances.size());
    inst.cell = cell;
    inst.in = in;
    inst.out = out;
    inst.provenance = provenance;
    instances.push_back(inst);
    nets[static_cast<size_t>(out)].driver = inst.id;
    return inst.id;
  }

  void mark_output(int net, int bit) {
    nets[static_cast<size_t>(net)].is_output = true;
    nets[static_cast<size_t>(net)].out_bit = bit;
    if (bit == width)
      cout_net = net;
    else
      sum_nets[static_cast<size_t>(bit)] = net;
  }

  int inverter_count() const {
    int c = 0;
    for (const Instance& i : instances)
      if (i.cell == "INV") ++c;
    return c;
  }
};

/// Structural sanity: single driver per net, pin counts match the library,
/// no combinational cycles, no dangling nets. Throws on the first failure.
void check_netlist(const GateNetlist& netlist, const CellLibrary& lib);

/// Instance ids in topological order (drivers before consumers).
/// Throws CycleDetected / DanglingNet.
std::vector<int> levelize(const GateNetlist& netlist);

}  // namespace axon
