#include "axon/timing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace axon {

namespace {

std::vector<double> net_loads(const GateNetlist& nl, const CellLibrary& lib) {
  std::vector<double> load(nl.nets.size(), 0.0);
  for (const Instance& inst : nl.instances) {
    const CellModel& cell = lib.cell(inst.cell);
    for (int in : inst.in)
      if (in >= 0) load[static_cast<size_t>(in)] += cell.input_cap(inst.size);
  }
  for (const Net& net : nl.nets)
    if (net.is_output) load[static_cast<size_t>(net.id)] += 1.0;
  return load;
}

}  // namespace

TimingReport sta(const GateNetlist& nl, const CellLibrary& lib) {
  check_netlist(nl, lib);
  const double fo1 = lib.fo1_delay();
  const CellModel& inv = lib.cell(lib.fo1_reference());
  std::vector<double> load = net_loads(nl, lib);
  std::vector<int> order = levelize(nl);

  TimingReport rep;
  rep.net_arrival.assign(nl.nets.size(), 0.0);
  for (const Net& net : nl.nets)
    if (net.port != PortKind::None)
      rep.net_arrival[static_cast<size_t>(net.id)] =
          (inv.p_par + inv.drive(1) * load[static_cast<size_t>(net.id)]) / fo1;

  auto stage = [&](const Instance& inst) {
    const CellModel& cell = lib.cell(inst.cell);
    return (cell.p_par + cell.drive(inst.size) * load[static_cast<size_t>(inst.out)]) / fo1;
  };

  for (int id : order) {
    const Instance& inst = nl.instances[static_cast<size_t>(id)];
    double in_arr = 0.0;
    for (int in : inst.in)
      if (in >= 0) in_arr = std::max(in_arr, rep.net_arrival[static_cast<size_t>(in)]);
    rep.net_arrival[static_cast<size_t>(inst.out)] = in_arr + stage(inst);
  }

  int worst_net = -1;
  for (const Net& net : nl.nets)
    if (net.is_output) {
      if (worst_net < 0 ||
          rep.net_arrival[static_cast<size_t>(net.id)] > rep.net_arrival[static_cast<size_t>(worst_net)])
        worst_net = net.id;
      rep.delay = std::max(rep.delay, rep.net_arrival[static_cast<size_t>(net.id)]);
    }

  // Required times and slacks.
  std::vector<double> required(nl.nets.size(), std::numeric_limits<double>::infinity());
  for (const Net& net : nl.nets)
    if (net.is_output) required[static_cast<size_t>(net.id)] = rep.delay;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Instance& inst = nl.instances[static_cast<size_t>(*it)];
    double req_in = required[static_cast<size_t>(inst.out)] - stage(inst);
    for (int in : inst.in)
      if (in >= 0)
        required[static_cast<size_t>(in)] = std::min(required[static_cast<size_t>(in)], req_in);
  }
  rep.instance_slack.assign(nl.instances.size(), 0.0);
  for (const Instance& inst : nl.instances)
    rep.instance_slack[static_cast<size_t>(inst.id)] =
        required[static_cast<size_t>(inst.out)] - rep.net_arrival[static_cast<size_t>(inst.out)];

  // Critical path: walk back from the worst output through the latest input.
  if (worst_net >= 0) {
    int net = worst_net;
    while (net >= 0 && nl.nets[static_cast<size_t>(net)].driver >= 0) {
      const Instance& inst = nl.instances[static_cast<size_t>(nl.nets[static_cast<size_t>(net)].driver)];
      rep.critical_path.push_back(inst.id);
      int next = -1;
      double best = -1.0;
      for (int in : inst.in)
        if (in >= 0 && rep.net_arrival[static_cast<size_t>(in)] > best) {
          best = rep.net_arrival[static_cast<size_t>(in)];
          next = in;
        }
      net = next;
    }
    std::reverse(rep.critical_path.begin(), rep.critical_path.end());
  }
  return rep;
}

std::string TimingReport::pretty(const GateNetlist& netlist) const {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << "critical path (" << delay << " FO1):\n";
  for (int id : critical_path) {
    const Instance& inst = netlist.instances[static_cast<size_t>(id)];
    os << "  u" << inst.id << " " << inst.cell << " x" << inst.size << "  arr "
       << net_arrival[static_cast<size_t>(inst.out)] << "\n";
  }
  return os.str();
}

long long area(const GateNetlist& nl, const CellLibrary& lib) {
  long long total = 0;
  for (const Instance& inst : nl.instances)
    total += static_cast<long long>(lib.cell(inst.cell).t_count) * inst.size;
  return total;
}

EvalPoint evaluate(const GateNetlist& nl, const CellLibrary& lib, int ling_nodes, int id) {
  EvalPoint p;
  p.id = id;
  p.delay = sta(nl, lib).delay;
  p.area = area(nl, lib);
  p.inverters = nl.inverter_count();
  p.ling_nodes = ling_nodes;
  return p;
}

}  // namespace axon
