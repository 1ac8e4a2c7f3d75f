// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fperr/interval.hpp"

namespace fperr {

enum class OpKind : std::uint8_t { add, sub, mul, div, neg, sqrt, exp, log, sin, cos, cnst, input };
inline constexpr int kOpKindCount = 12;

const char* op_name(OpKind op);
int arity(OpKind op);
bool is_transcendental(OpKind op);

enum class Precision : std::uint8_t { fl32, fl64 };

int mantissa_bits(Precision p);
/// 2^-24 for fl32, 2^-53 for fl64.
double unit_roundoff(Precision p);
Precision wider(Precision a, Precision b);
const char* precision_name(Precision p);

/// Local error multiplier (in units of u) per operator.
class RoundingFactors {
 public:
  /// add/sub/mul/div/sqrt get 1, neg/const/input get 0 and every
  /// transcendental gets `transcendental`.
  RoundingFactors() : RoundingFactors(2.0) {}
  explicit RoundingFactors(double transcendental);
  [[nodiscard]] double of(OpKind op) const { return f_[static_cast<int>(op)]; }
  /// Only transcendentals are configurable; the value must be >= 1.
  void set(OpKind op, double factor);

 private:
  std::array<double, kOpKindCount> f_{};
};

using NodeId = std::int32_t;

struct Node {
  OpKind op = OpKind::cnst;
  Precision prec = Precision::fl64;
  std::uint8_t nchildren = 0;
  std::array<NodeId, 2> ch{-1, -1};
  double literal = 0.0;  // const nodes only
  std::int32_t input = -1;  // index into ExprDag::inputs() for input nodes

  [[nodiscard]] std::span<const NodeId> children() const { return {ch.data(), nchildren}; }
  [[nodiscard]] bool is_leaf() const { return op == OpKind::cnst || op == OpKind::input; }
};

struct InputVar {
  std::string name;
  Interval range;
  Precision precision = Precision::fl64;
  Interval incoming_error{0.0, 0.0};
  bool abstracted = false;  // free variable introduced by abstraction
};

struct Output {
  std::string name;
  NodeId node = -1;
};

struct NodeMetrics {
  int depth = 0;
  int fanout = 0;  // parent edges
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col);
  int line;
  int col;
};

/// Immutable operator DAG. Children always have smaller ids than parents.
class ExprDag {
 public:
  [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const Node& node(NodeId id) const;
  [[nodiscard]] const std::vector<InputVar>& inputs() const { return inputs_; }
  [[nodiscard]] NodeId input_node(int index) const { return input_nodes_.at(index); }
  [[nodiscard]] const std::vector<Output>& outputs() const { return outputs_; }
  [[nodiscard]] NodeId output(std::string_view name) const;

  [[nodiscard]] int depth(NodeId id) const { return metrics_.at(id).depth; }
  [[nodiscard]] int fanout(NodeId id) const { return metrics_.at(id).fanout; }
  [[nodiscard]] const std::vector<NodeMetrics>& metrics() const { return metrics_; }
  /// Name of the assignment that produced the node, or "" for anonymous ones.
  [[nodiscard]] const std::string& label(NodeId id) const { return labels_.at(id); }
  /// Operator occurrences in the source text before sharing (0 when the DAG
  /// was not produced by the parser).
  [[nodiscard]] int source_op_count() const { return source_ops_; }

 private:
  friend class DagBuilder;
  std::vector<Node> nodes_;
  std::vector<InputVar> inputs_;
  std::vector<NodeId> input_nodes_;
  std::vector<Output> outputs_;
  std::vector<NodeMetrics> metrics_;
  std::vector<std::string> labels_;
  int source_ops_ = 0;
};

/// Hash-consing DAG constructor.
class DagBuilder {
 public:
  NodeId input(InputVar var);
  NodeId constant(double value);
  NodeId op(OpKind op, Precision prec, NodeId a, NodeId b = -1);
  void output(std::string name, NodeId node);
  void label(NodeId node, std::string name);
  void set_source_op_count(int n) { source_ops_ = n; }
  [[nodiscard]] const Node& node(NodeId id) const { return nodes_.at(id); }
  [[nodiscard]] const InputVar& input_var(int index) const { return inputs_.at(index); }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  ExprDag build() &&;

 private:
  struct Key {
    OpKind op;
    Precision prec;
    NodeId a, b;
    std::uint64_t bits;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  NodeId intern(const Node& n, const Key& k);

  std::vector<Node> nodes_;
  std::vector<InputVar> inputs_;
  std::vector<NodeId> input_nodes_;
  std::vector<Output> outputs_;
  std::vector<std::string> labels_;
  std::unordered_map<Key, NodeId, KeyHash> table_;
  std::unordered_map<std::string, int> input_names_;
  int source_ops_ = 0;
};

ExprDag parse_program(std::string_view text);
/// Shortest-safe decimal form (%.17g) that parses back to the same double.
std::string format_double(double v);
/// Emits DSL text that parses back to a structurally identical DAG.
std::string unparse(const ExprDag& dag);
/// Same inputs, outputs and shared structure, compared node by node.
bool structurally_equal(const ExprDag& a, const ExprDag& b);

/// Arithmetic nodes (not inputs, not constants) reachable from root.
int op_count(const ExprDag& dag, NodeId root);
/// Union over all outputs.
int op_count(const ExprDag& dag);
std::vector<NodeMetrics> structural_metrics(const ExprDag& dag);
/// mask[i] is true when node i lies on a path to root.
std::vector<bool> reachable_from(const ExprDag& dag, NodeId root);

/// Floating-point semantics of one node: the exact result of the operation
/// on the given operands, rounded to nearest in precision `p`.
/// Transcendentals use the platform library (binary64) or quad (binary32).
double fp_apply(OpKind op, Precision p, double a, double b = 0.0);
/// Floating-point value of every node; `point` is indexed like dag.inputs()
/// and must already be representable in each input's precision.
std::vector<double> eval_fp(const ExprDag& dag, std::span<const double> point);

Interval iv_arith(OpKind op, const Interval& a, const Interval& b = Interval{});
/// Op-by-op interval evaluation of every node over the declared input ranges
/// (or `box` when given, indexed like dag.inputs()).
std::vector<Interval> eval_intervals(const ExprDag& dag, std::span<const Interval> box = {});

}  // namespace fperr
