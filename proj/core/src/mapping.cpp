#include "axon/mapping.hpp"

#include <algorithm>
#include <map>

namespace axon {

namespace {

class Mapper {
 public:
  Mapper(const LogicGraph& logic, const PolarityAssignment& assign, const CellLibrary& lib)
      : logic_(logic), neg_(assign.negated), lib_(lib) {}

  GateNetlist run() {
    const int n = logic_.width;
    nl_.width = n;
    nl_.module_name = "adder" + std::to_string(n);
    nl_.sum_nets.assign(static_cast<size_t>(n), -1);
    a_net_.resize(static_cast<size_t>(n));
    b_net_.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) a_net_[static_cast<size_t>(i)] = nl_.add_port_net(PortKind::A, i);
    for (int i = 0; i < n; ++i) b_net_[static_cast<size_t>(i)] = nl_.add_port_net(PortKind::B, i);
    cin_net_ = nl_.add_port_net(PortKind::Cin, -1);

    node_net_.assign(logic_.nodes.size(), -1);
    for (const LogicNode& node : logic_.nodes) emit_node(node);

    for (int i = 0; i < n; ++i)
      nl_.mark_output(node_net_[static_cast<size_t>(logic_.sum_node[static_cast<size_t>(i)])], i);
    int cout_src = logic_.carry_source[static_cast<size_t>(n - 1)];
    nl_.mark_output(node_input(cout_src, false), n);
    return std::move(nl_);
  }

 private:
  bool negated(int id) const { return neg_[static_cast<size_t>(id)] != 0; }

  // Net carrying the node's signal at the requested polarity, inserting a
  // shared inverter when the producer's polarity differs.
  int node_input(int id, bool want_neg) {
    int net = node_net_[static_cast<size_t>(id)];
    if (negated(id) == want_neg) return net;
    return inverted(net);
  }

  int port_input(int net, bool want_neg) { return want_neg ? inverted(net) : net; }

  int inverted(int net) {
    auto it = inv_cache_.find(net);
    if (it != inv_cache_.end()) return it->second;
    int out = nl_.add_net();
    nl_.add_instance("INV", {net, -1, -1, -1}, out, -1);
    inv_cache_.emplace(net, out);
    return out;
  }

  void emit_node(const LogicNode& node) {
    const bool vneg = negated(node.id);
    const bool want = !vneg;  // inverting duals expect the opposite polarity
    int out = nl_.add_net();
    node_net_[static_cast<size_t>(node.id)] = out;
    std::array<int, 4> pins{-1, -1, -1, -1};
    std::string cell;

    switch (node.kind) {
      case LogicKind::LeafG:
        if (node.bit == 0) {
          // Folded carry-in: g0' = g0 + rho0*cin (majority of a0, b0, cin).
          int nrho = nl_.add_net();
          nl_.add_instance("NOR2", {a_net_[0], b_net_[0], -1, -1}, nrho, node.id);
          int ng = nl_.add_net();
          nl_.add_instance("NAND2", {a_net_[0], b_net_[0], -1, -1}, ng, node.id);
          if (vneg) {
            cell = "AOI21";  // ~(rho*cin + g), positive operands
            pins = {inverted(nrho), port_input(cin_net_, false), inverted(ng), -1};
          } else {
            cell = "OAI21";  // ~((~rho + ~cin)*~g) = rho*cin + g
            pins = {nrho, inverted(cin_net_), ng, -1};
          }
        } else {
          cell = vneg ? "NAND2" : "NOR2";
          pins = {port_input(a_net_[static_cast<size_t>(node.bit)], want),
                  port_input(b_net_[static_cast<size_t>(node.bit)], want), -1, -1};
        }
        break;
      case LogicKind::LeafP:
        cell = vneg ? "XNOR2" : "XOR2";
        pins = {a_net_[static_cast<size_t>(node.bit)], b_net_[static_cast<size_t>(node.bit)], -1, -1};
        break;
      case LogicKind::LeafRho:
        // rho = a OR b from the ports.
        cell = vneg ? "NOR2" : "NAND2";
        pins = {port_input(a_net_[static_cast<size_t>(node.bit)], want),
                port_input(b_net_[static_cast<size_t>(node.bit)], want), -1, -1};
        break;
      case LogicKind::GroupP:
        cell = vneg ? "NAND2" : "NOR2";
        pins = {node_input(node.in[0], want), node_input(node.in[1], want), -1, -1};
        break;
      case LogicKind::Combine:
        if (node.in.size() == 4) {
          // G = rho * H_hi + P * lo across a pseudo-carry/prefix boundary.
          cell = vneg ? "AOI22" : "OAI22";
          pins = {node_input(node.in[3], want), node_input(node.in[2], want),
                  node_input(node.in[0], want), node_input(node.in[1], want)};
        } else if (node.in.size() == 3) {
          cell = vneg ? "AOI21" : "OAI21";
          pins = {node_input(node.in[0], want), node_input(node.in[1], want),
                  node_input(node.in[2], want), -1};
        } else {
          // hi OR lo merge (pseudo-carry with a leaf hi child, or the folded
          // bit pair).
          cell = vneg ? "NOR2" : "NAND2";
          pins = {node_input(node.in[0], want), node_input(node.in[1], want), -1, -1};
        }
        break;
      case LogicKind::LingPair: {
        cell = vneg ? "AOI22" : "OAI22";
        int hi = node.bit, lo = node.bit - 1;
        pins = {port_input(a_net_[static_cast<size_t>(hi)], want),
                port_input(b_net_[static_cast<size_t>(hi)], want),
                port_input(a_net_[static_cast<size_t>(lo)], want),
                port_input(b_net_[static_cast<size_t>(lo)], want)};
        break;
      }
      case LogicKind::Recover:
        cell = vneg ? "NAND2" : "NOR2";
        pins = {node_input(node.in[0], want), node_input(node.in[1], want), -1, -1};
        break;
      case LogicKind::SumXor: {
        bool p_neg = negated(node.in[0]);
        bool c_neg = node.in.size() > 1 ? negated(node.in[1]) : false;
        cell = (p_neg != c_neg) ? "XNOR2" : "XOR2";
        int c_net = node.in.size() > 1 ? node_net_[static_cast<size_t>(node.in[1])] : cin_net_;
        pins = {node_net_[static_cast<size_t>(node.in[0])], c_net, -1, -1};
        if (vneg) throw Error(ErrorCode::Internal, "sum node must be positive");
        break;
      }
    }
    nl_.add_instance(cell, pins, out, node.id);
  }

  const LogicGraph& logic_;
  const std::vector<uint8_t>& neg_;
  const CellLibrary& lib_;
  GateNetlist nl_;
  std::vector<int> a_net_, b_net_;
  int cin_net_ = -1;
  std::vector<int> node_net_;
  std::map<int, int> inv_cache_;
};

}  // namespace

GateNetlist map_cells(const LogicGraph& logic, const PolarityAssignment& assignment,
                      const CellLibrary& lib) {
  GateNetlist nl = Mapper(logic, assignment, lib).run();
  check_netlist(nl, lib);
  return nl;
}

}  // namespace axon
