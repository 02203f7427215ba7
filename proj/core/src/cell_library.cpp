#include "axon/cell_library.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace axon {

using json = nlohmann::ordered_json;

namespace {

uint16_t tt(int inputs, bool (*fn)(unsigned)) {
  uint16_t out = 0;
  for (unsigned m = 0; m < (1u << inputs); ++m)
    if (fn(m)) out |= static_cast<uint16_t>(1u << m);
  return out;
}

bool bit(unsigned m, int i) { return (m >> i) & 1; }

}  // namespace

CellLibrary CellLibrary::generic() {
  CellLibrary lib;
  auto add = [&](std::string name, int inputs, uint16_t function, bool inverting, double g,
                 double p, int t) {
    CellModel c;
    c.name = std::move(name);
    c.inputs = inputs;
    c.function = function;
    c.inverting = inverting;
    c.g = g;
    c.p_par = p;
    c.r_dr = 1.0;
    c.t_count = t;
    lib.cells_.push_back(std::move(c));
  };
  add("INV", 1, tt(1, [](unsigned m) { return !bit(m, 0); }), true, 1.0, 1.0, 2);
  add("NAND2", 2, tt(2, [](unsigned m) { return !(bit(m, 0) && bit(m, 1)); }), true, 4.0 / 3.0,
      2.0, 4);
  add("NOR2", 2, tt(2, [](unsigned m) { return !(bit(m, 0) || bit(m, 1)); }), true, 5.0 / 3.0,
      2.0, 4);
  add("AOI21", 3, tt(3, [](unsigned m) { return !((bit(m, 0) && bit(m, 1)) || bit(m, 2)); }),
      true, 2.0, 3.0, 6);
  add("OAI21", 3, tt(3, [](unsigned m) { return !((bit(m, 0) || bit(m, 1)) && bit(m, 2)); }),
      true, 2.0, 3.0, 6);
  add("AOI22", 4,
      tt(4, [](unsigned m) { return !((bit(m, 0) && bit(m, 1)) || (bit(m, 2) && bit(m, 3))); }),
      true, 7.0 / 3.0, 4.0, 8);
  add("OAI22", 4,
      tt(4, [](unsigned m) { return !((bit(m, 0) || bit(m, 1)) && (bit(m, 2) || bit(m, 3))); }),
      true, 7.0 / 3.0, 4.0, 8);
  add("XOR2", 2, tt(2, [](unsigned m) { return bit(m, 0) != bit(m, 1); }), false, 4.0, 4.0, 12);
  add("XNOR2", 2, tt(2, [](unsigned m) { return bit(m, 0) == bit(m, 1); }), true, 4.0, 4.0, 12);
  lib.finalize();
  return lib;
}

void CellLibrary::finalize() {
  by_name_.clear();
  for (size_t i = 0; i < cells_.size(); ++i) by_name_[cells_[i].name] = i;
  duals_ = {
      {"INV", "INV"},     {"NAND2", "NOR2"},  {"NOR2", "NAND2"},
      {"AOI21", "OAI21"}, {"OAI21", "AOI21"}, {"AOI22", "OAI22"},
      {"OAI22", "AOI22"}, {"XOR2", "XNOR2"},  {"XNOR2", "XOR2"},
  };
  const CellModel& ref = cell(fo1_reference_);
  // FO1: a x1 reference inverter driving one identical inverter.
  fo1_delay_ = ref.p_par + ref.drive(1) * ref.input_cap(1);
  double check = (ref.p_par + ref.drive(1) * ref.input_cap(1)) / fo1_delay_;
  if (std::abs(check - 1.0) > 1e-9)
    throw Error(ErrorCode::BadConfig, "FO1 calibration self-check failed");
}

const CellModel& CellLibrary::cell(const std::string& name) const {
  const CellModel* c = find(name);
  if (!c) throw Error(ErrorCode::UnknownCell, name);
  return *c;
}

const CellModel* CellLibrary::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &cells_[it->second];
}

const std::string& CellLibrary::dual(const std::string& name) const {
  auto it = duals_.find(name);
  if (it == duals_.end()) throw Error(ErrorCode::UnknownCell, "no dual for " + name);
  return it->second;
}

CellLibrary CellLibrary::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadConfig, std::string("library json: ") + e.what());
  }
  CellLibrary lib;
  if (doc.contains("fo1_reference")) lib.fo1_reference_ = doc["fo1_reference"].get<std::string>();
  if (!doc.contains("cells")) throw Error(ErrorCode::BadConfig, "library json requires cells");
  for (const json& jc : doc["cells"]) {
    CellModel c;
    c.name = jc.at("name").get<std::string>();
    c.inputs = jc.at("inputs").get<int>();
    if (c.inputs < 1 || c.inputs > 4)
      throw Error(ErrorCode::BadConfig, "cell " + c.name + ": inputs must be 1..4");
    std::string fn = jc.at("function").get<std::string>();
    c.function = static_cast<uint16_t>(std::stoul(fn, nullptr, 0));
    c.inverting = jc.at("inverting").get<bool>();
    c.g = jc.at("g").get<double>();
    c.p_par = jc.at("p_par").get<double>();
    c.r_dr = jc.value("r_dr", 1.0);
    c.t_count = jc.at("t_count").get<int>();
    if (c.t_count <= 0) throw Error(ErrorCode::BadConfig, "cell " + c.name + ": t_count must be > 0");
    if (jc.contains("sizes")) c.sizes = jc["sizes"].get<std::vector<int>>();
    lib.cells_.push_back(std::move(c));
  }
  lib.finalize();
  return lib;
}

std::string CellLibrary::to_json() const {
  json doc;
  doc["fo1_reference"] = fo1_reference_;
  doc["cells"] = json::array();
  for (const CellModel& c : cells_) {
    char fn[8];
    std::snprintf(fn, sizeof fn, "0x%X", c.function);
    doc["cells"].push_back({{"name", c.name},
                            {"inputs", c.inputs},
                            {"function", fn},
                            {"inverting", c.inverting},
                            {"g", c.g},
                            {"p_par", c.p_par},
                            {"r_dr", c.r_dr},
                            {"t_count", c.t_count},
                            {"sizes", c.sizes}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace axon
