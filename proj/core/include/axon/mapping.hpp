#pragma once

#include "axon/cell_library.hpp"
#include "axon/logic_graph.hpp"
#include "axon/netlist.hpp"
#include "axon/polarity.hpp"

namespace axon {

/// Lowers the logic graph to cell instances under a polarity assignment:
/// every node picks the inverting dual dictated by its polarity, xor-kind
/// nodes pick the xor/xnor matching their input parities, and same-polarity
/// edges (including port pins expecting complemented operands) get shared
/// inverters. The result is simulation-equivalent to the source graph.
GateNetlist map_cells(const LogicGraph& logic, const PolarityAssignment& assignment,
                      const CellLibrary& lib);

/// Discrete logical-effort sizing: instances on the current critical path may
/// step up to the size minimizing their driver-stage-plus-own-stage cost;
/// passes repeat to a fixpoint and the whole result is discarded if the final
/// delay would exceed the unsized delay, so sizing never hurts.
GateNetlist size_gates(const GateNetlist& netlist, const CellLibrary& lib);

}  // namespace axon
