// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fperr/expr_ir.hpp"
#include "fperr/interval.hpp"

namespace fperr {

class SymExpr;
class SymContext;

enum class AtomKind : std::uint8_t { var, absvar, opaque };

/// Non-polynomial kernels. `mul` and `add` only appear when the gate refused
/// to expand a product or a sum.
enum class OpaqueFn : std::uint8_t { mul, add, recip, sqrt, exp, log, sin, cos };

const char* opaque_name(OpaqueFn fn);

struct Atom;

struct Factor {
  const Atom* atom;
  int power;  // never 0; negative for divisions by monomials
  bool operator==(const Factor&) const = default;
};

struct Term {
  std::vector<Factor> key;  // sorted by atom order
  mpq_class coef;
};

/// Immutable canonical sum of monomials. Cheap to copy.
class SymExpr {
 public:
  SymExpr();
  static SymExpr constant(const mpq_class& c);
  static SymExpr constant(double c);
  static SymExpr atom(const Atom* a, int power = 1);

  [[nodiscard]] const std::vector<Term>& terms() const;
  [[nodiscard]] bool is_zero() const { return terms().empty(); }
  [[nodiscard]] bool is_constant() const;
  /// Coefficient of the empty monomial.
  [[nodiscard]] mpq_class constant_term() const;
  /// Single term, i.e. c * prod(atom^k).
  [[nodiscard]] bool is_monomial() const { return terms().size() == 1; }
  [[nodiscard]] std::size_t hash() const;
  /// Arithmetic operations of a direct evaluation (saturating).
  [[nodiscard]] std::uint64_t count_ops() const;

  friend bool operator==(const SymExpr& a, const SymExpr& b);

  /// Terms must already be sorted, merged and free of zero coefficients.
  static SymExpr from_terms(std::vector<Term> terms);

  struct Poly;

 private:
  explicit SymExpr(std::shared_ptr<const Poly> p);
  std::shared_ptr<const Poly> p_;
};

struct Atom {
  AtomKind kind = AtomKind::var;
  std::string name;  // var / absvar
  OpaqueFn fn = OpaqueFn::mul;
  std::vector<SymExpr> args;  // opaque
  std::size_t hash = 0;
  std::uint64_t ops = 0;  // ops to evaluate this atom once (args + 1 for opaques)
};

/// Total order on atoms: vars, then abstraction variables, then opaques.
bool atom_less(const Atom* a, const Atom* b);
int atom_compare(const Atom* a, const Atom* b);
int expr_compare(const SymExpr& a, const SymExpr& b);

/// Owns atoms and the expansion gate. Interning is synchronized, so one
/// context can serve concurrent workers.
class SymContext {
 public:
  explicit SymContext(std::uint64_t max_opcount = 8000) : gate_(max_opcount) {}
  SymContext(const SymContext&) = delete;
  SymContext& operator=(const SymContext&) = delete;

  [[nodiscard]] std::uint64_t gate() const { return gate_; }

  const Atom* var(const std::string& name);
  const Atom* absvar(const std::string& name);
  const Atom* opaque(OpaqueFn fn, std::vector<SymExpr> args);

  SymExpr add(const SymExpr& a, const SymExpr& b);
  SymExpr sub(const SymExpr& a, const SymExpr& b);
  SymExpr mul(const SymExpr& a, const SymExpr& b);
  SymExpr div(const SymExpr& a, const SymExpr& b);
  SymExpr neg(const SymExpr& a);
  SymExpr scale(const SymExpr& a, const mpq_class& c);
  SymExpr pow(const SymExpr& a, int n);
  /// sqrt / exp / log / sin / cos / recip applied to a canonical argument.
  SymExpr apply(OpaqueFn fn, const SymExpr& a);

  /// Number of mul/add expansions refused by the gate so far.
  [[nodiscard]] std::uint64_t gated() const { return gated_; }

 private:
  SymExpr gated_binary(OpaqueFn fn, const SymExpr& a, const SymExpr& b);

  std::uint64_t gate_;
  std::mutex mu_;
  std::deque<Atom> atoms_;
  std::unordered_map<std::string, const Atom*> vars_;
  std::unordered_map<std::string, const Atom*> absvars_;
  std::unordered_multimap<std::size_t, const Atom*> opaques_;
  std::uint64_t gated_ = 0;
};

SymExpr sym_diff(SymContext& ctx, const SymExpr& e, const Atom* wrt);
SymExpr sym_subst(SymContext& ctx, const SymExpr& e,
                  const std::unordered_map<const Atom*, SymExpr>& bindings);
std::uint64_t count_ops(const SymExpr& e);

/// Symbolic values of every node reachable from `roots` (others stay zero).
/// Inputs become Var atoms, abstracted inputs AbsVar atoms.
std::vector<SymExpr> sym_build_all(SymContext& ctx, const ExprDag& dag,
                                   std::span<const NodeId> roots);
SymExpr sym_build(SymContext& ctx, const ExprDag& dag, NodeId node);

/// Infix text with ^ for powers, deterministic.
std::string to_string(const SymExpr& e);

/// Outward-rounded enclosure of a rational.
Interval to_interval(const mpq_class& q);

/// Every Var/AbsVar atom occurring in the expressions (through opaques too),
/// in atom order.
std::vector<const Atom*> free_atoms(std::span<const SymExpr> exprs);

/// A batch of expressions compiled for repeated interval evaluation over
/// boxes. Opaque atoms shared between expressions are evaluated once per box.
class CompiledExprs {
 public:
  /// `dims` are the box coordinates; every free atom must appear in it.
  CompiledExprs(std::span<const SymExpr> exprs, std::vector<const Atom*> dims);

  [[nodiscard]] std::size_t size() const { return exprs_.size(); }
  [[nodiscard]] const std::vector<const Atom*>& dims() const { return dims_; }
  /// Throws DomainError when an opaque kernel leaves its domain.
  void eval(std::span<const Interval> box, std::vector<Interval>& out) const;
  [[nodiscard]] Interval eval_one(std::size_t i, std::span<const Interval> box) const;

 private:
  struct CTerm {
    Interval coef;
    std::vector<std::pair<std::int32_t, int>> factors;  // slot, power
  };
  using CPoly = std::vector<CTerm>;
  struct COpaque {
    OpaqueFn fn;
    std::vector<CPoly> args;
  };
  Interval eval_poly(const CPoly& p, const std::vector<Interval>& slots) const;
  void fill_slots(std::span<const Interval> box, std::vector<Interval>& slots) const;
  CPoly compile(const SymExpr& e,
                const std::unordered_map<const Atom*, std::int32_t>& slot_of) const;

  std::vector<const Atom*> dims_;
  std::vector<COpaque> opaques_;  // slot dims_.size() + i, in dependency order
  std::vector<CPoly> exprs_;
};

Interval sym_eval_interval(const SymExpr& e,
                           const std::unordered_map<const Atom*, Interval>& env);

}  // namespace fperr
