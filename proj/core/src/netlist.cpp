#include "axon/netlist.hpp"

#include <queue>

namespace axon {

void check_netlist(const GateNetlist& netlist, const CellLibrary& lib) {
  std::vector<int> drivers(netlist.nets.size(), 0);
  for (const Net& net : netlist.nets)
    if (net.port != PortKind::None) drivers[static_cast<size_t>(net.id)]++;
  for (const Instance& inst : netlist.instances) {
    const CellModel& cell = lib.cell(inst.cell);
    int pins = 0;
    for (int in : inst.in)
      if (in >= 0) {
        ++pins;
        if (static_cast<size_t>(in) >= netlist.nets.size())
          throw Error(ErrorCode::DanglingNet, "instance pin references unknown net");
      }
    if (pins != cell.inputs)
      throw Error(ErrorCode::UnmappableNode,
                  inst.cell + " instance " + std::to_string(inst.id) + " has " +
                      std::to_string(pins) + " inputs, cell wants " +
                      std::to_string(cell.inputs));
    if (inst.out < 0 || static_cast<size_t>(inst.out) >= netlist.nets.size())
      throw Error(ErrorCode::DanglingNet, "instance output net missing");
    drivers[static_cast<size_t>(inst.out)]++;
  }
  for (const Net& net : netlist.nets) {
    if (drivers[static_cast<size_t>(net.id)] == 0)
      throw Error(ErrorCode::DanglingNet, "net " + std::to_string(net.id) + " undriven");
    if (drivers[static_cast<size_t>(net.id)] > 1)
      throw Error(ErrorCode::MultipleDrivers, "net " + std::to_string(net.id));
  }
  levelize(netlist);  // throws on cycles
}

std::vector<int> levelize(const GateNetlist& netlist) {
  std::vector<int> pending(netlist.instances.size(), 0);
  std::vector<std::vector<int>> waiters(netlist.nets.size());
  std::queue<int> ready;
  for (const Instance& inst : netlist.instances) {
    int deps = 0;
    for (int in : inst.in) {
      if (in < 0) continue;
      const Net& net = netlist.nets[static_cast<size_t>(in)];
      if (net.port == PortKind::None) {
        ++deps;
        waiters[static_cast<size_t>(in)].push_back(inst.id);
      }
    }
    pending[static_cast<size_t>(inst.id)] = deps;
    if (deps == 0) ready.push(inst.id);
  }
  std::vector<int> order;
  order.reserve(netlist.instances.size());
  while (!ready.empty()) {
    int id = ready.front();
    ready.pop();
    order.push_back(id);
    int out = netlist.instances[static_cast<size_t>(id)].out;
    for (int w : waiters[static_cast<size_t>(out)])
      if (--pending[static_cast<size_t>(w)] == 0) ready.push(w);
  }
  if (order.size() != netlist.instances.size())
    throw Error(ErrorCode::CycleDetected, "combinational cycle in netlist");
  return order;
}

}  // namespace axon
