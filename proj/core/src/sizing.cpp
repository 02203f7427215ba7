#include "axon/mapping.hpp"

#include <algorithm>
#include <cmath>

#include "axon/timing.hpp"

namespace axon {

namespace {

// Internal gates step up only past this effort; stages at or below it are
// already balanced enough that a bigger pin would just tax the driver.
constexpr double kEffortCeiling = 6.0;

}  // namespace

GateNetlist size_gates(const GateNetlist& input, const CellLibrary& lib) {
  GateNetlist nl = input;
  const double fo1 = lib.fo1_delay();
  const CellModel& ref = lib.cell(lib.fo1_reference());
  const double t0 = sta(input, lib).delay;
  const std::vector<int> order = levelize(nl);

  // Multi-fanout units adjust per the logical-effort picture. Gates hanging
  // on port nets face the fixed x1 drivers, so they must win the explicit
  // two-stage trade (driver stage + own stage); internal gates upsize only
  // when their effort exceeds the ceiling. Sizes only grow and decisions
  // depend on loads alone, so the fixpoint is stable and near-identical
  // candidates size near-identically.
  for (int pass = 0; pass < 8; ++pass) {
    std::vector<double> load(nl.nets.size(), 0.0);
    std::vector<int> consumers(nl.nets.size(), 0);
    for (const Instance& inst : nl.instances) {
      const CellModel& cell = lib.cell(inst.cell);
      for (int in : inst.in)
        if (in >= 0) {
          load[static_cast<size_t>(in)] += cell.input_cap(inst.size);
          consumers[static_cast<size_t>(in)]++;
        }
    }
    for (const Net& net : nl.nets)
      if (net.is_output) {
        load[static_cast<size_t>(net.id)] += 1.0;
        consumers[static_cast<size_t>(net.id)]++;
      }

    bool changed = false;
    for (int id : order) {
      Instance& inst = nl.instances[static_cast<size_t>(id)];
      if (consumers[static_cast<size_t>(inst.out)] < 2) continue;
      const CellModel& cell = lib.cell(inst.cell);
      const double own_load = load[static_cast<size_t>(inst.out)];
      bool port_fed = false;
      for (int in : inst.in)
        if (in >= 0 && nl.nets[static_cast<size_t>(in)].port != PortKind::None) port_fed = true;

      int best_size = inst.size;
      if (port_fed) {
        auto cost_of = [&](int size) {
          double worst_in = 0.0;
          for (int in : inst.in) {
            if (in < 0) continue;
            const Net& net = nl.nets[static_cast<size_t>(in)];
            double in_load = load[static_cast<size_t>(in)] - cell.input_cap(inst.size) +
                             cell.input_cap(size);
            double stage;
            if (net.port != PortKind::None) {
              stage = (ref.p_par + ref.drive(1) * in_load) / fo1;
            } else {
              const Instance& drv = nl.instances[static_cast<size_t>(net.driver)];
              const CellModel& drv_cell = lib.cell(drv.cell);
              stage = (drv_cell.p_par + drv_cell.drive(drv.size) * in_load) / fo1;
            }
            worst_in = std::max(worst_in, stage);
          }
          return worst_in + (cell.p_par + cell.drive(size) * own_load) / fo1;
        };
        double best_cost = cost_of(inst.size);
        for (int size : cell.sizes) {
          if (size <= inst.size) continue;
          double c = cost_of(size);
          if (c + 1e-12 < best_cost) {
            best_cost = c;
            best_size = size;
          }
        }
      } else {
        best_size = inst.size;
        for (int size : cell.sizes) {
          if (size < inst.size) continue;
          best_size = size;
          if (own_load / size <= kEffortCeiling) break;
        }
      }

      if (best_size != inst.size) {
        for (int in : inst.in)
          if (in >= 0)
            load[static_cast<size_t>(in)] += cell.input_cap(best_size) - cell.input_cap(inst.size);
        inst.size = best_size;
        changed = true;
      }
    }
    if (!changed) break;
  }

  if (sta(nl, lib).delay > t0 + 1e-9) return input;  // sizing must never hurt
  return nl;
}

}  // namespace axon
