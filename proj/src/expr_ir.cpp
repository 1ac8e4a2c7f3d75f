// SPDX-License-Identifier: Apache-2.0
#include "fperr/expr_ir.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <quadmath.h>

namespace fperr {

const char* op_name(OpKind op) {
  switch (op) {
    case OpKind::add: return "add";
    case OpKind::sub: return "sub";
    case OpKind::mul: return "mul";
    case OpKind::div: return "div";
    case OpKind::neg: return "neg";
    case OpKind::sqrt: return "sqrt";
    case OpKind::exp: return "exp";
    case OpKind::log: return "log";
    case OpKind::sin: return "sin";
    case OpKind::cos: return "cos";
    case OpKind::cnst: return "const";
    case OpKind::input: return "input";
  }
  return "?";
}

int arity(OpKind op) {
  switch (op) {
    case OpKind::add:
    case OpKind::sub:
    case OpKind::mul:
    case OpKind::div: return 2;
    case OpKind::cnst:
    case OpKind::input: return 0;
    default: return 1;
  }
}

bool is_transcendental(OpKind op) {
  return op == OpKind::exp || op == OpKind::log || op == OpKind::sin || op == OpKind::cos;
}

int mantissa_bits(Precision p) { return p == Precision::fl32 ? 24 : 53; }

double unit_roundoff(Precision p) { return std::ldexp(1.0, -mantissa_bits(p)); }

Precision wider(Precision a, Precision b) {
  return (a == Precision::fl64 || b == Precision::fl64) ? Precision::fl64 : Precision::fl32;
}

const char* precision_name(Precision p) { return p == Precision::fl32 ? "fl32" : "fl64"; }

RoundingFactors::RoundingFactors(double transcendental) {
  for (int i = 0; i < kOpKindCount; ++i) {
    const auto op = static_cast<OpKind>(i);
    if (op == OpKind::neg || op == OpKind::cnst || op == OpKind::input) {
      f_[i] = 0.0;
    } else if (is_transcendental(op)) {
      f_[i] = transcendental;
    } else {
      f_[i] = 1.0;
    }
  }
  if (!(transcendental >= 1.0)) {
    throw std::invalid_argument("transcendental rounding factor must be >= 1");
  }
}

void RoundingFactors::set(OpKind op, double factor) {
  if (!is_transcendental(op)) {
    throw std::invalid_argument(std::string("rounding factor of ") + op_name(op) +
                                " is fixed");
  }
  if (!(factor >= 1.0)) throw std::invalid_argument("rounding factor must be >= 1");
  f_[static_cast<int>(op)] = factor;
}

ParseError::ParseError(const std::string& msg, int line_, int col_)
    : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
      line(line_),
      col(col_) {}

const Node& ExprDag::node(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
    throw std::out_of_range("invalid node id " + std::to_string(id));
  }
  return nodes_[id];
}

NodeId ExprDag::output(std::string_view name) const {
  for (const auto& o : outputs_) {
    if (o.name == name) return o.node;
  }
  throw std::out_of_range("no output named " + std::string(name));
}

std::size_t DagBuilder::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = static_cast<std::uint64_t>(k.op) * 0x9E3779B97F4A7C15ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(k.prec));
  mix(static_cast<std::uint32_t>(k.a));
  mix(static_cast<std::uint32_t>(k.b));
  mix(k.bits);
  return static_cast<std::size_t>(h);
}

NodeId DagBuilder::intern(const Node& n, const Key& k) {
  auto [it, inserted] = table_.try_emplace(k, static_cast<NodeId>(nodes_.size()));
  if (inserted) {
    nodes_.push_back(n);
    labels_.emplace_back();
  }
  return it->second;
}

NodeId DagBuilder::input(InputVar var) {
  if (input_names_.contains(var.name)) {
    throw std::invalid_argument("duplicate input " + var.name);
  }
  if (!(var.range.lo <= var.range.hi) || !std::isfinite(var.range.lo) ||
      !std::isfinite(var.range.hi)) {
    throw std::invalid_argument("input " + var.name + " has an invalid range");
  }
  if (!(var.incoming_error.lo == -var.incoming_error.hi) || !(var.incoming_error.hi >= 0.0)) {
    throw std::invalid_argument("input " + var.name + " has an asymmetric error");
  }
  Node n;
  n.op = OpKind::input;
  n.prec = var.precision;
  n.input = static_cast<std::int32_t>(inputs_.size());
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(n);
  labels_.push_back(var.name);
  input_names_.emplace(var.name, n.input);
  inputs_.push_back(std::move(var));
  input_nodes_.push_back(id);
  return id;
}

NodeId DagBuilder::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite constant");
  Node n;
  n.op = OpKind::cnst;
  n.literal = value;
  return intern(n, Key{OpKind::cnst, Precision::fl64, -1, -1, std::bit_cast<std::uint64_t>(value)});
}

NodeId DagBuilder::op(OpKind op, Precision prec, NodeId a, NodeId b) {
  const int k = arity(op);
  if (k == 0) throw std::invalid_argument("leaf kinds are not operators");
  const auto valid = [this](NodeId id) {
    return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
  };
  if (!valid(a) || (k == 2 && !valid(b)) || (k == 1 && b != -1)) {
    throw std::invalid_argument(std::string("bad operands for ") + op_name(op));
  }
  Node n;
  n.op = op;
  n.prec = prec;
  n.nchildren = static_cast<std::uint8_t>(k);
  n.ch = {a, k == 2 ? b : -1};
  return intern(n, Key{op, prec, a, n.ch[1], 0});
}

void DagBuilder::output(std::string name, NodeId node) {
  if (node < 0 || static_cast<std::size_t>(node) >= nodes_.size()) {
    throw std::invalid_argument("output " + name + " refers to an invalid node");
  }
  for (const auto& o : outputs_) {
    if (o.name == name) throw std::invalid_argument("duplicate output " + name);
  }
  outputs_.push_back({std::move(name), node});
}

void DagBuilder::label(NodeId node, std::string name) {
  if (labels_.at(node).empty()) labels_[node] = std::move(name);
}

ExprDag DagBuilder::build() && {
  ExprDag d;
  d.nodes_ = std::move(nodes_);
  d.inputs_ = std::move(inputs_);
  d.input_nodes_ = std::move(input_nodes_);
  d.outputs_ = std::move(outputs_);
  d.labels_ = std::move(labels_);
  d.source_ops_ = source_ops_;
  d.metrics_ = structural_metrics(d);
  return d;
}

std::vector<NodeMetrics> structural_metrics(const ExprDag& dag) {
  const auto& nodes = dag.nodes();
  std::vector<NodeMetrics> m(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    int d = 0;
    for (NodeId c : n.children()) d = std::max(d, m[c].depth + 1);
    m[i].depth = d;
    // Edges, so (x+y)+(x+y) gives the shared add a fanout of 2.
    for (NodeId c : n.children()) ++m[c].fanout;
  }
  return m;
}

std::vector<bool> reachable_from(const ExprDag& dag, NodeId root) {
  (void)dag.node(root);
  std::vector<bool> mask(dag.size(), false);
  mask[root] = true;
  for (NodeId i = root; i >= 0; --i) {
    if (!mask[i]) continue;
    for (NodeId c : dag.nodes()[i].children()) mask[c] = true;
  }
  return mask;
}

int op_count(const ExprDag& dag, NodeId root) {
  const auto mask = reachable_from(dag, root);
  int n = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] && !dag.nodes()[i].is_leaf()) ++n;
  }
  return n;
}

int op_count(const ExprDag& dag) {
  std::vector<bool> mask(dag.size(), false);
  for (const auto& o : dag.outputs()) mask[o.node] = true;
  for (NodeId i = static_cast<NodeId>(dag.size()) - 1; i >= 0; --i) {
    if (!mask[i]) continue;
    for (NodeId c : dag.nodes()[i].children()) mask[c] = true;
  }
  int n = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] && !dag.nodes()[i].is_leaf()) ++n;
  }
  return n;
}

Interval iv_arith(OpKind op, const Interval& a, const Interval& b) {
  switch (op) {
    case OpKind::add: return a + b;
    case OpKind::sub: return a - b;
    case OpKind::mul: return a * b;
    case OpKind::div: return a / b;
    case OpKind::neg: return -a;
    case OpKind::sqrt: return sqrt(a);
    case OpKind::exp: return exp(a);
    case OpKind::log: return log(a);
    case OpKind::sin: return sin(a);
    case OpKind::cos: return cos(a);
    case OpKind::cnst:
    case OpKind::input: return a;
  }
  return Interval::entire();
}

double fp_apply(OpKind op, Precision p, double a, double b) {
  if (p == Precision::fl64) {
    switch (op) {
      case OpKind::add: return a + b;
      case OpKind::sub: return a - b;
      case OpKind::mul: return a * b;
      case OpKind::div: return a / b;
      case OpKind::neg: return -a;
      case OpKind::sqrt: return std::sqrt(a);
      case OpKind::exp: return std::exp(a);
      case OpKind::log: return std::log(a);
      case OpKind::sin: return std::sin(a);
      case OpKind::cos: return std::cos(a);
      case OpKind::cnst:
      case OpKind::input: return a;
    }
  }
  // fl32: the exact result (quad is exact or far more precise for the
  // arithmetic ops on binary64 operands) rounded once to binary32.
  const __float128 qa = a, qb = b;
  switch (op) {
    case OpKind::add: return static_cast<float>(qa + qb);
    case OpKind::sub: return static_cast<float>(qa - qb);
    case OpKind::mul: return static_cast<float>(qa * qb);
    case OpKind::div: return static_cast<float>(qa / qb);
    case OpKind::neg: return static_cast<float>(-a);
    case OpKind::sqrt: return static_cast<float>(sqrtq(qa));
    case OpKind::exp: return static_cast<float>(expq(qa));
    case OpKind::log: return static_cast<float>(logq(qa));
    case OpKind::sin: return static_cast<float>(sinq(qa));
    case OpKind::cos: return static_cast<float>(cosq(qa));
    case OpKind::cnst:
    case OpKind::input: return static_cast<float>(a);
  }
  return a;
}

std::vector<double> eval_fp(const ExprDag& dag, std::span<const double> point) {
  std::vector<double> v(dag.size());
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const Node& n = dag.nodes()[i];
    switch (n.op) {
      case OpKind::cnst: v[i] = n.literal; break;
      case OpKind::input: v[i] = point[n.input]; break;
      default: v[i] = fp_apply(n.op, n.prec, v[n.ch[0]], n.nchildren == 2 ? v[n.ch[1]] : 0.0);
    }
  }
  return v;
}

std::vector<Interval> eval_intervals(const ExprDag& dag, std::span<const Interval> box) {
  std::vector<Interval> v(dag.size());
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const Node& n = dag.nodes()[i];
    switch (n.op) {
      case OpKind::cnst: v[i] = Interval{n.literal}; break;
      case OpKind::input:
        v[i] = box.empty() ? dag.inputs()[n.input].range : box[n.input];
        break;
      default:
        v[i] = iv_arith(n.op, v[n.ch[0]], n.nchildren == 2 ? v[n.ch[1]] : Interval{});
    }
  }
  return v;
}

}  // namespace fperr
