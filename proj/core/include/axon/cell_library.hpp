#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "axon/error.hpp"

namespace axon {

/// One generic standard cell. All electrical quantities are normalized to a
/// unit inverter: logical effort g is the input-capacitance ratio, p_par the
/// parasitic (intrinsic) delay, and the drive resistance of a size-s instance
/// is r_dr / s. An input pin of a size-s instance presents g * s unit loads.
struct CellModel {
  std::string name;
  int inputs = 0;
  uint16_t function = 0;  // truth table over `inputs` vars, bit i = output for minterm i
  bool inverting = false;
  double g = 1.0;
  double p_par = 1.0;
  double r_dr = 1.0;  // at size x1
  int t_count = 2;
  std::vector<int> sizes{1, 2, 4, 8};

  double input_cap(int size) const { return g * size; }
  double drive(int size) const { return r_dr / size; }
  bool eval(uint8_t minterm) const { return (function >> minterm) & 1; }
};

/// Cell collection plus the FO1 normalization constant. Loading verifies the
/// calibration invariant that a x1 reference inverter driving an identical
/// inverter measures exactly 1.0 FO1.
class CellLibrary {
 public:
  static CellLibrary generic();  // built-in technology-agnostic default
  static CellLibrary from_json(const std::string& text);
  std::string to_json() const;

  const CellModel& cell(const std::string& name) const;
  const CellModel* find(const std::string& name) const;
  const std::vector<CellModel>& cells() const { return cells_; }
  const std::string& fo1_reference() const { return fo1_reference_; }

  /// Raw delay of the reference FO1 stage; stage delays divide by this.
  double fo1_delay() const { return fo1_delay_; }

  /// Inverting-pair dual (NAND2<->NOR2, AOI21<->OAI21, AOI22<->OAI22,
  /// XOR2<->XNOR2, INV<->INV).
  const std::string& dual(const std::string& name) const;

 private:
  void finalize();

  std::vector<CellModel> cells_;
  std::unordered_map<std::string, size_t> by_name_;
  std::unordered_map<std::string, std::string> duals_;
  std::string fo1_reference_ = "INV";
  double fo1_delay_ = 2.0;
};

}  // namespace axon
