#pragma once

#include <string>
#include <vector>

#include "axon/cell_library.hpp"
#include "axon/netlist.hpp"

namespace axon {

/// Static timing under the coarse model: stage delay of an instance is
/// p_par + r_dr(size) * C_load, normalized so a x1 inverter driving one
/// identical inverter measures exactly 1.0 FO1. Wire load is zero; input
/// ports behave like ideal x1 inverter drivers; every primary output pin adds
/// one unit load.
struct TimingReport {
  double delay = 0.0;                  // critical-path delay, FO1
  std::vector<double> net_arrival;     // per net id
  std::vector<double> instance_slack;  // per instance id
  std::vector<int> critical_path;      // instance ids, inputs toward outputs

  std::string pretty(const GateNetlist& netlist) const;
};

TimingReport sta(const GateNetlist& netlist, const CellLibrary& lib);

/// Transistor count; a size-k instance costs k times its cell's transistors.
long long area(const GateNetlist& netlist, const CellLibrary& lib);

/// One candidate's coordinates in the design space.
struct EvalPoint {
  int id = -1;
  long long area = 0;    // transistors
  double delay = 0.0;    // FO1
  int inverters = 0;
  int ling_nodes = 0;
};

EvalPoint evaluate(const GateNetlist& netlist, const CellLibrary& lib, int ling_nodes = 0,
                   int id = -1);

}  // namespace axon
