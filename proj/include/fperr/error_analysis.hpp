// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fperr/expr_ir.hpp"
#include "fperr/optimizer.hpp"
#include "fperr/symbolic.hpp"

namespace fperr {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnalysisConfig {
  bool abstraction_enabled = true;
  int min_depth = 10;
  int max_depth = 40;
  std::optional<int> force_depth;
  std::uint64_t max_opcount = 8000;
  double optimizer_tol = 1e-3;        // relative
  double optimizer_abs_tol = 1e-6;    // error objectives are measured in units of 2^-53
  std::int64_t optimizer_budget = 50000;
  std::uint64_t rng_seed = 0;
  bool input_rounding = false;        // inputs carry u*|x| of their precision
  bool abs_around_product = true;     // false gives the |adj|*|s| assembly
  bool deterministic = true;
  int threads = 1;
  RoundingFactors rounding;

  [[nodiscard]] OptConfig optimizer() const;
};

struct LocalError {
  SymExpr value;
  double rounding_factor = 0.0;
  Precision precision = Precision::fl64;
  /// rounding_factor * u
  [[nodiscard]] double scale() const { return rounding_factor * unit_roundoff(precision); }
};

/// Error generated at a node: a symbolic part |expr| * scale and a concrete
/// magnitude (incoming or abstracted error). Either may be absent.
struct ErrorTerm {
  SymExpr expr;
  double scale = 0.0;
  double concrete = 0.0;  // bound of a symmetric error interval, >= 0

  static ErrorTerm symbolic(SymExpr e, double scale) { return {std::move(e), scale, 0.0}; }
  static ErrorTerm concrete_bound(double b) { return {SymExpr{}, 0.0, b}; }
  [[nodiscard]] bool empty() const { return (scale == 0.0 || expr.is_zero()) && concrete == 0.0; }
};

/// Symbolic value of every node and the atom standing for every input.
struct SymbolicDag {
  std::vector<SymExpr> values;          // zero for nodes not requested
  std::vector<const Atom*> input_atoms; // indexed like dag.inputs()
};

SymbolicDag symbolic_values(SymContext& ctx, const ExprDag& dag, std::span<const NodeId> roots);

LocalError local_error(const ExprDag& dag, NodeId node, const SymbolicDag& sd,
                       const RoundingFactors& rf = RoundingFactors{});
LocalError local_error(SymContext& ctx, const ExprDag& dag, NodeId node,
                       const RoundingFactors& rf = RoundingFactors{});

/// Error terms for every node: local round-off of arithmetic nodes, declared
/// (and optionally rounding) errors of inputs.
std::vector<ErrorTerm> node_errors(const ExprDag& dag, const SymbolicDag& sd,
                                   const AnalysisConfig& cfg);

struct AdjointStats {
  std::uint64_t accumulations = 0;  // one per DAG edge visited
};

/// d output / d node for every node, by a single reverse sweep. Nodes that do
/// not reach the output get zero.
std::vector<SymExpr> reverse_adjoints(SymContext& ctx, const ExprDag& dag, NodeId output,
                                      const SymbolicDag& sd, AdjointStats* stats = nullptr);

struct ObjectiveTerm {
  NodeId node = -1;
  SymExpr product;  // adjoint * value, canonical
  SymExpr adjoint;
  SymExpr value;
  double scale = 0.0;  // in units of 2^-53
};

/// sum_i scale_i * |product_i| + concrete, over the box `dims` x `ranges`,
/// all measured in units of 2^-53.
struct ErrorObjective {
  std::vector<ObjectiveTerm> terms;
  Interval concrete_part{0.0};
  bool abs_around_product = true;
  std::vector<const Atom*> dims;
  std::vector<Interval> ranges;
};

/// Unit of ErrorObjective values.
inline constexpr double kObjectiveUnit = 0x1p-53;

ErrorObjective assemble_objective(SymContext& ctx, const ExprDag& dag, NodeId output,
                                  const SymbolicDag& sd, std::span<const ErrorTerm> errors,
                                  std::span<const SymExpr> adjoints,
                                  bool abs_around_product = true);

/// Compiled form for the optimizer.
///
/// Over a box, each polynomial term |p| is bounded above by its chord over
/// p's range, and the chords are summed monomial by monomial before being
/// enclosed. Affine objectives are thus enclosed exactly once no term changes
/// sign, and the hint is the corner that maximizes the collected linear part.
/// Affine terms skip the interval evaluator: they are evaluated in plain
/// floating point with an a priori rounding error bound added outward.
class ErrorObjectiveFn final : public Objective {
 public:
  explicit ErrorObjectiveFn(const ErrorObjective& obj);
  [[nodiscard]] std::size_t dims() const override { return ndims_; }
  [[nodiscard]] Interval eval(std::span<const Interval> box) const override;
  Interval eval(std::span<const Interval> box, std::vector<double>& hint) const override;
  /// Every term is |p| with p affine in coordinate d (or free of it).
  [[nodiscard]] bool vertex_dim(std::size_t d) const override { return vertex_[d]; }

 private:
  struct Monomial {
    std::vector<std::pair<std::int32_t, int>> factors;  // dim, power >= 1
  };
  struct PolyTerm {
    bool collectable = false;
    std::vector<std::pair<std::int32_t, Interval>> coefs;  // monomial, scale * coefficient
  };
  // scale * (c0 + sum a_j x_j), coefficients as midpoint plus radius
  struct AffineTerm {
    double c0 = 0.0, c0_rad = 0.0;
    std::size_t begin = 0, end = 0;  // into aff_dim_ / aff_coef_ / aff_rad_
  };

  std::size_t ndims_;
  CompiledExprs code_;  // terms not in aff_, in order
  std::vector<std::size_t> slow_;  // their indices
  std::vector<double> scales_;
  bool split_;
  Interval concrete_;
  std::vector<Monomial> monos_;
  std::vector<PolyTerm> poly_;
  std::vector<AffineTerm> aff_;
  std::vector<std::int32_t> aff_dim_;
  std::vector<double> aff_coef_, aff_rad_;
  std::vector<bool> vertex_;
};

struct BoundResult {
  double bound = 0.0;  // absolute error bound
  Interval range;      // enclosure of the output's real value
  bool converged = true;
  OptResult error_opt, max_opt, min_opt;
  std::uint64_t adjoint_accumulations = 0;
  std::size_t objective_terms = 0;
};

/// Everything symbolic about one bound query; solving it only reads it, so
/// several prepared queries can be solved concurrently.
struct PreparedBound {
  NodeId output = -1;
  ErrorObjective objective;
  SymExpr value;
  SearchBox value_box;
  std::uint64_t adjoint_accumulations = 0;
};

PreparedBound prepare_bound(SymContext& ctx, const ExprDag& dag, NodeId output,
                            const SymbolicDag& sd, std::span<const ErrorTerm> errors,
                            const AnalysisConfig& cfg);
BoundResult solve_bound(const PreparedBound& pb, const ExprDag& dag, const AnalysisConfig& cfg);

/// Direct (non-abstracted) solve for one output.
BoundResult bound_total_error(const ExprDag& dag, NodeId output, const AnalysisConfig& cfg);
BoundResult bound_total_error(SymContext& ctx, const ExprDag& dag, NodeId output,
                              const SymbolicDag& sd, const AnalysisConfig& cfg);

}  // namespace fperr
