#include "axon/verilog.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <nlohmann/json.hpp>

namespace axon {

using json = nlohmann::ordered_json;

namespace {

const char* kPinNames[4] = {"A", "B", "C", "D"};

std::string mapped(const CellNameMap& map, const std::string& name) {
  auto it = map.find(name);
  return it == map.end() ? name : it->second;
}

std::string net_name(const GateNetlist& nl, int id) {
  const Net& net = nl.nets[static_cast<size_t>(id)];
  switch (net.port) {
    case PortKind::A: return "a[" + std::to_string(net.port_bit) + "]";
    case PortKind::B: return "b[" + std::to_string(net.port_bit) + "]";
    case PortKind::Cin: return "cin";
    case PortKind::None: break;
  }
  if (net.is_output)
    return net.out_bit == nl.width ? "cout" : "sum[" + std::to_string(net.out_bit) + "]";
  // Named after the driving instance, so re-emission after a parse reproduces
  // the exact text.
  return "n" + std::to_string(net.driver);
}

}  // namespace

CellNameMap cell_name_map_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadConfig, std::string("cell map json: ") + e.what());
  }
  CellNameMap map;
  for (auto it = doc.begin(); it != doc.end(); ++it) map[it.key()] = it.value().get<std::string>();
  return map;
}

std::string emit_verilog(const GateNetlist& nl, const CellNameMap& map, bool strict_map) {
  std::ostringstream os;
  os << "module " << nl.module_name << " (a, b, cin, sum, cout);\n";
  os << "  input [" << nl.width - 1 << ":0] a;\n";
  os << "  input [" << nl.width - 1 << ":0] b;\n";
  os << "  input cin;\n";
  os << "  output [" << nl.width - 1 << ":0] sum;\n";
  os << "  output cout;\n";
  for (const Net& net : nl.nets)
    if (net.port == PortKind::None && !net.is_output)
      os << "  wire " << net_name(nl, net.id) << ";\n";
  for (const Instance& inst : nl.instances) {
    if (strict_map && !map.count(inst.cell))
      throw Error(ErrorCode::UnmappedCell, inst.cell);
    std::string cell = mapped(map, inst.cell);
    if (inst.size != 1) cell += "_X" + std::to_string(inst.size);
    os << "  " << cell << " u" << inst.id << " (";
    bool first = true;
    for (int i = 0; i < 4; ++i) {
      if (inst.in[static_cast<size_t>(i)] < 0) continue;
      if (!first) os << ", ";
      first = false;
      std::string pin = mapped(map, inst.cell + "." + kPinNames[i]);
      if (pin == inst.cell + "." + kPinNames[i]) pin = kPinNames[i];
      os << "." << pin << "(" << net_name(nl, inst.in[static_cast<size_t>(i)]) << ")";
    }
    std::string ypin = mapped(map, inst.cell + ".Y");
    if (ypin == inst.cell + ".Y") ypin = "Y";
    os << ", ." << ypin << "(" << net_name(nl, inst.out) << "));\n";
  }
  os << "endmodule\n";
  return os.str();
}

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::Ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '$'))
        t.text += advance();
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Number;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        t.text += advance();
      return t;
    }
    t.kind = Token::Kind::Punct;
    t.text = std::string(1, advance());
    return t;
  }

 private:
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        advance();
        advance();
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) advance();
        if (pos_ + 1 < text_.size()) {
          advance();
          advance();
        }
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  throw Error(ErrorCode::SyntaxError,
              msg + " at line " + std::to_string(t.line) + ", col " + std::to_string(t.col));
}

class Parser {
 public:
  Parser(const std::string& text, const CellLibrary& lib) : lex_(text), lib_(lib) { shift(); }

  GateNetlist parse() {
    expect_ident("module");
    nl_.module_name = expect(Token::Kind::Ident).text;
    expect_punct("(");
    while (cur_.kind == Token::Kind::Ident) {
      shift();
      if (cur_.text == ",")
        shift();
      else
        break;
    }
    expect_punct(")");
    expect_punct(";");

    while (!(cur_.kind == Token::Kind::Ident && cur_.text == "endmodule")) {
      if (cur_.kind == Token::Kind::End) fail(cur_, "missing endmodule");
      if (cur_.kind != Token::Kind::Ident) fail(cur_, "expected declaration or instance");
      const std::string head = cur_.text;
      if (head == "input" || head == "output" || head == "wire") {
        shift();
        declaration(head);
      } else if (head == "assign" || head == "always" || head == "initial" || head == "reg") {
        fail(cur_, "'" + head + "' is outside the structural subset");
      } else {
        instance(head);
      }
    }
    finish();
    return std::move(nl_);
  }

 private:
  void shift() { cur_ = lex_.next(); }

  Token expect(Token::Kind kind) {
    if (cur_.kind != kind) fail(cur_, "unexpected token '" + cur_.text + "'");
    Token t = cur_;
    shift();
    return t;
  }

  void expect_ident(const std::string& word) {
    if (cur_.kind != Token::Kind::Ident || cur_.text != word) fail(cur_, "expected '" + word + "'");
    shift();
  }

  void expect_punct(const std::string& p) {
    if (cur_.kind != Token::Kind::Punct || cur_.text != p) fail(cur_, "expected '" + p + "'");
    shift();
  }

  void declaration(const std::string& head) {
    int msb = -1;
    if (cur_.kind == Token::Kind::Punct && cur_.text == "[") {
      shift();
      msb = std::stoi(expect(Token::Kind::Number).text);
      expect_punct(":");
      int lsb = std::stoi(expect(Token::Kind::Number).text);
      if (lsb != 0) fail(cur_, "vector declarations must be [msb:0]");
      expect_punct("]");
    }
    while (true) {
      Token name = expect(Token::Kind::Ident);
      declare(head, name.text, msb, name);
      if (cur_.kind == Token::Kind::Punct && cur_.text == ",") {
        shift();
        continue;
      }
      break;
    }
    expect_punct(";");
  }

  void declare(const std::string& head, const std::string& name, int msb, const Token& at) {
    if (head == "input") {
      if (name == "a" || name == "b") {
        if (msb < 0) fail(at, "operand ports must be vectors");
        width_ = msb + 1;
      } else if (name != "cin") {
        fail(at, "unknown input port '" + name + "'");
      }
    } else if (head == "output") {
      if (name == "sum") {
        if (msb < 0) fail(at, "sum must be a vector");
      } else if (name != "cout") {
        fail(at, "unknown output port '" + name + "'");
      }
    } else {
      wires_.push_back(name);
    }
  }

  // Lazily create nets once the width is known.
  void materialize() {
    if (materialized_) return;
    if (width_ <= 0) fail(cur_, "operand ports not declared");
    materialized_ = true;
    nl_.width = width_;
    nl_.sum_nets.assign(static_cast<size_t>(width_), -1);
    for (int i = 0; i < width_; ++i)
      net_by_name_["a[" + std::to_string(i) + "]"] = nl_.add_port_net(PortKind::A, i);
    for (int i = 0; i < width_; ++i)
      net_by_name_["b[" + std::to_string(i) + "]"] = nl_.add_port_net(PortKind::B, i);
    net_by_name_["cin"] = nl_.add_port_net(PortKind::Cin, -1);
    for (int i = 0; i < width_; ++i) {
      int id = nl_.add_net();
      net_by_name_["sum[" + std::to_string(i) + "]"] = id;
      nl_.mark_output(id, i);
    }
    int id = nl_.add_net();
    net_by_name_["cout"] = id;
    nl_.mark_output(id, width_);
    for (const std::string& w : wires_) {
      if (net_by_name_.count(w)) fail(cur_, "duplicate net '" + w + "'");
      net_by_name_[w] = nl_.add_net();
    }
  }

  int net_ref() {
    Token name = expect(Token::Kind::Ident);
    std::string key = name.text;
    if (cur_.kind == Token::Kind::Punct && cur_.text == "[") {
      shift();
      key += "[" + expect(Token::Kind::Number).text + "]";
      expect_punct("]");
    }
    auto it = net_by_name_.find(key);
    if (it == net_by_name_.end()) fail(name, "unknown net '" + key + "'");
    return it->second;
  }

  void instance(const std::string& cell_name) {
    materialize();
    Token at = cur_;
    shift();
    // Inverse size suffix: CELL_X<k> for k in the cell's size list.
    std::string base = cell_name;
    int size = 1;
    if (!lib_.find(base)) {
      size_t pos = base.rfind("_X");
      if (pos != std::string::npos) {
        std::string suffix = base.substr(pos + 2);
        if (!suffix.empty() && suffix.find_first_not_of("0123456789") == std::string::npos) {
          size = std::stoi(suffix);
          base = base.substr(0, pos);
        }
      }
    }
    const CellModel* cell = lib_.find(base);
    if (!cell) throw Error(ErrorCode::UnknownCell, cell_name);
    if (std::find(cell->sizes.begin(), cell->sizes.end(), size) == cell->sizes.end())
      throw Error(ErrorCode::UnknownCell, cell_name + " (size not in library)");

    std::string inst_name = expect(Token::Kind::Ident).text;
    (void)inst_name;
    expect_punct("(");
    std::array<int, 4> in{-1, -1, -1, -1};
    int out = -1;
    while (true) {
      if (cur_.kind == Token::Kind::Punct && cur_.text == ".") {
        shift();
        Token pin = expect(Token::Kind::Ident);
        expect_punct("(");
        int net = net_ref();
        expect_punct(")");
        if (pin.text == "Y") {
          out = net;
        } else if (pin.text.size() == 1 && pin.text[0] >= 'A' && pin.text[0] <= 'D') {
          in[static_cast<size_t>(pin.text[0] - 'A')] = net;
        } else {
          fail(pin, "unknown pin '" + pin.text + "'");
        }
      } else {
        fail(cur_, "only named pin connections are supported");
      }
      if (cur_.kind == Token::Kind::Punct && cur_.text == ",") {
        shift();
        continue;
      }
      break;
    }
    expect_punct(")");
    expect_punct(";");
    if (out < 0) fail(at, "instance without output pin");
    int pins = 0;
    for (int x : in)
      if (x >= 0) ++pins;
    if (pins != cell->inputs) fail(at, "pin count does not match cell " + base);
    const Net& out_net = nl_.nets[static_cast<size_t>(out)];
    if (out_net.driver >= 0 || out_net.port != PortKind::None)
      throw Error(ErrorCode::MultipleDrivers, "net driven twice");
    int id = nl_.add_instance(base, in, out, -1);
    nl_.instances[static_cast<size_t>(id)].size = size;
  }

  void finish() {
    materialize();
    for (const Net& net : nl_.nets)
      if (net.driver < 0 && net.port == PortKind::None)
        throw Error(ErrorCode::DanglingNet, "net " + std::to_string(net.id) + " undriven");
  }

  Lexer lex_;
  const CellLibrary& lib_;
  Token cur_;
  GateNetlist nl_;
  int width_ = -1;
  bool materialized_ = false;
  std::vector<std::string> wires_;
  std::map<std::string, int> net_by_name_;
};

}  // namespace

GateNetlist parse_netlist(const std::string& text, const CellLibrary& lib) {
  return Parser(text, lib).parse();
}

bool netlist_equal(const GateNetlist& a, const GateNetlist& b) {
  if (a.width != b.width || a.instances.size() != b.instances.size() ||
      a.nets.size() != b.nets.size())
    return false;
  // Canonical renaming: map nets by driver identity and port role.
  auto canon = [](const GateNetlist& nl, int net_id) {
    const Net& net = nl.nets[static_cast<size_t>(net_id)];
    if (net.port != PortKind::None)
      return std::string("p") + std::to_string(static_cast<int>(net.port)) + "_" +
             std::to_string(net.port_bit);
    return std::string("d") + std::to_string(net.driver);
  };
  for (size_t i = 0; i < a.instances.size(); ++i) {
    const Instance& ia = a.instances[i];
    const Instance& ib = b.instances[i];
    if (ia.cell != ib.cell || ia.size != ib.size) return false;
    for (int pin = 0; pin < 4; ++pin) {
      int na = ia.in[static_cast<size_t>(pin)];
      int nb = ib.in[static_cast<size_t>(pin)];
      if ((na < 0) != (nb < 0)) return false;
      if (na >= 0 && canon(a, na) != canon(b, nb)) return false;
    }
  }
  for (size_t i = 0; i < a.sum_nets.size(); ++i)
    if (canon(a, a.sum_nets[i]) != canon(b, b.sum_nets[i])) return false;
  return canon(a, a.cout_net) == canon(b, b.cout_net);
}

std::string netlist_to_json(const GateNetlist& nl) {
  json doc;
  doc["width"] = nl.width;
  doc["module"] = nl.module_name;
  doc["instances"] = json::array();
  for (const Instance& inst : nl.instances) {
    json ji;
    ji["id"] = inst.id;
    ji["cell"] = inst.cell;
    ji["size"] = inst.size;
    json pins = json::object();
    for (int i = 0; i < 4; ++i)
      if (inst.in[static_cast<size_t>(i)] >= 0)
        pins[kPinNames[i]] = net_name(nl, inst.in[static_cast<size_t>(i)]);
    pins["Y"] = net_name(nl, inst.out);
    ji["pins"] = pins;
    ji["provenance"] = inst.provenance;
    doc["instances"].push_back(ji);
  }
  return doc.dump(2) + "\n";
}

}  // namespace axon
