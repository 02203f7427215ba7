#pragma once

#include <map>
#include <string>

#include "axon/cell_library.hpp"
#include "axon/netlist.hpp"

namespace axon {

/// old -> new cell/pin names for retargeting to a concrete library. Cell names
/// are looked up as-is; pin names as "CELL.PIN". Missing entries pass through
/// unchanged. Sizes above x1 append "_X<k>" to the mapped cell name.
using CellNameMap = std::map<std::string, std::string>;

CellNameMap cell_name_map_from_json(const std::string& text);

/// Structural Verilog-2001 subset: one module, vector port declarations, wire
/// declarations, one named-pin instance per gate, sorted by instance id.
/// Deterministic and stable for golden-file diffs.
/// Throws UnmappedCell when strict_map is set and a cell lacks an entry.
std::string emit_verilog(const GateNetlist& netlist, const CellNameMap& map = {},
                         bool strict_map = false);

/// Parses the emitted subset back into a netlist. Instances must use cells of
/// `lib` (after inverse size suffix handling). Anything outside the subset —
/// assign, behavioral blocks, positional connections — is a SyntaxError with
/// line/column. Multiple drivers and undriven nets are reported as such.
GateNetlist parse_netlist(const std::string& text, const CellLibrary& lib);

/// Structural equality modulo net renaming (ports, instances, connectivity).
bool netlist_equal(const GateNetlist& a, const GateNetlist& b);

/// JSON dump mirroring the GateNetlist fields.
std::string netlist_to_json(const GateNetlist& netlist);

}  // namespace axon
