// SPDX-License-Identifier: Apache-2.0
#include "fperr/symbolic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <unordered_set>

namespace fperr {

struct SymExpr::Poly {
  std::vector<Term> terms;
  std::size_t hash = 0;
  std::uint64_t ops = 0;
};

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSat - b ? kSat : a + b; }

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
}

std::size_t coef_hash(const mpq_class& q) {
  auto low = [](const mpz_class& z) -> std::size_t {
    return mpz_size(z.get_mpz_t()) == 0 ? 0 : mpz_getlimbn(z.get_mpz_t(), 0);
  };
  std::size_t h = static_cast<std::size_t>(sgn(q) + 2);
  h = mix(h, low(q.get_num()));
  h = mix(h, low(q.get_den()));
  h = mix(h, mpz_size(q.get_num_mpz_t()));
  return h;
}

int key_compare(const std::vector<Factor>& a, const std::vector<Factor>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = atom_compare(a[i].atom, b[i].atom);
    if (c != 0) return c;
    if (a[i].power != b[i].power) return a[i].power > b[i].power ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

bool key_equal(const std::vector<Factor>& a, const std::vector<Factor>& b) { return a == b; }

std::uint64_t term_ops(const Term& t) {
  std::uint64_t factors = 0;
  std::uint64_t inner = 0;
  for (const auto& f : t.key) {
    factors = sat_add(factors, static_cast<std::uint64_t>(std::abs(f.power)));
    inner = sat_add(inner, f.atom->ops);
  }
  if (t.key.empty()) return 0;
  if (abs(t.coef) != 1) factors = sat_add(factors, 1);
  return sat_add(inner, factors - 1);
}

std::size_t term_hash(const Term& t) {
  std::size_t h = coef_hash(t.coef);
  for (const auto& f : t.key) {
    h = mix(h, f.atom->hash);
    h = mix(h, static_cast<std::size_t>(f.power + 1024));
  }
  return h;
}

// Sort, merge like terms and drop zeros.
std::vector<Term> canonicalize_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return key_compare(a.key, b.key) < 0; });
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && key_equal(out.back().key, t.key)) {
      out.back().coef += t.coef;
    } else {
      if (!out.empty() && sgn(out.back().coef) == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && sgn(out.back().coef) == 0) out.pop_back();
  return out;
}

std::vector<Factor> key_product(const std::vector<Factor>& a, const std::vector<Factor>& b) {
  std::vector<Factor> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) {
      out.push_back(a[i++]);
    } else if (i == a.size()) {
      out.push_back(b[j++]);
    } else if (a[i].atom == b[j].atom) {
      const int p = a[i].power + b[j].power;
      if (p != 0) out.push_back({a[i].atom, p});
      ++i;
      ++j;
    } else if (atom_less(a[i].atom, b[j].atom)) {
      out.push_back(a[i++]);
    } else {
      out.push_back(b[j++]);
    }
  }
  return out;
}

std::string coef_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  const double d = q.get_d();
  if (std::isfinite(d) && mpq_class(d) == q) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, r.ptr);
  }
  return q.get_str();
}

}  // namespace

const char* opaque_name(OpaqueFn fn) {
  switch (fn) {
    case OpaqueFn::mul: return "mul";
    case OpaqueFn::add: return "add";
    case OpaqueFn::recip: return "recip";
    case OpaqueFn::sqrt: return "sqrt";
    case OpaqueFn::exp: return "exp";
    case OpaqueFn::log: return "log";
    case OpaqueFn::sin: return "sin";
    case OpaqueFn::cos: return "cos";
  }
  return "?";
}

// ---------------------------------------------------------------- SymExpr

namespace {
const std::shared_ptr<const SymExpr::Poly>& zero_poly();
}

SymExpr::SymExpr() : p_(zero_poly()) {}

SymExpr::SymExpr(std::shared_ptr<const Poly> p) : p_(std::move(p)) {}

namespace {
const std::shared_ptr<const SymExpr::Poly>& zero_poly() {
  static const std::shared_ptr<const SymExpr::Poly> z = std::make_shared<SymExpr::Poly>();
  return z;
}
}  // namespace

SymExpr SymExpr::from_terms(std::vector<Term> terms) {
  if (terms.empty()) return SymExpr();
  auto p = std::make_shared<Poly>();
  std::size_t h = terms.size();
  std::uint64_t ops = terms.size() - 1;
  for (const auto& t : terms) {
    h = mix(h, term_hash(t));
    ops = sat_add(ops, term_ops(t));
  }
  p->terms = std::move(terms);
  p->hash = h;
  p->ops = ops;
  return SymExpr(std::move(p));
}

SymExpr SymExpr::constant(const mpq_class& c) {
  if (sgn(c) == 0) return SymExpr();
  std::vector<Term> t(1);
  t[0].coef = c;
  return from_terms(std::move(t));
}

SymExpr SymExpr::constant(double c) { return constant(mpq_class(c)); }

SymExpr SymExpr::atom(const Atom* a, int power) {
  if (power == 0) return constant(mpq_class(1));
  std::vector<Term> t(1);
  t[0].key.push_back({a, power});
  t[0].coef = 1;
  return from_terms(std::move(t));
}

const std::vector<Term>& SymExpr::terms() const { return p_->terms; }

bool SymExpr::is_constant() const {
  return terms().empty() || (terms().size() == 1 && terms()[0].key.empty());
}

mpq_class SymExpr::constant_term() const {
  if (!terms().empty() && terms()[0].key.empty()) return terms()[0].coef;
  return 0;
}

std::size_t SymExpr::hash() const { return p_->hash; }

std::uint64_t SymExpr::count_ops() const { return p_->ops; }

bool operator==(const SymExpr& a, const SymExpr& b) {
  if (a.p_ == b.p_) return true;
  if (a.p_->hash != b.p_->hash) return false;
  const auto& x = a.terms();
  const auto& y = b.terms();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].key != y[i].key || x[i].coef != y[i].coef) return false;
  }
  return true;
}

std::uint64_t count_ops(const SymExpr& e) { return e.count_ops(); }

// ------------------------------------------------------------- ordering

int atom_compare(const Atom* a, const Atom* b) {
  if (a == b) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (a->kind != AtomKind::opaque) {
    const int c = a->name.compare(b->name);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  if (a->fn != b->fn) return a->fn < b->fn ? -1 : 1;
  if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
  if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    const int c = expr_compare(a->args[i], b->args[i]);
    if (c != 0) return c;
  }
  return 0;
}

bool atom_less(const Atom* a, const Atom* b) { return atom_compare(a, b) < 0; }

int expr_compare(const SymExpr& a, const SymExpr& b) {
  if (a == b) return 0;
  const auto& x = a.terms();
  const auto& y = b.terms();
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int c = key_compare(x[i].key, y[i].key);
    if (c != 0) return c;
    const int d = cmp(x[i].coef, y[i].coef);
    if (d != 0) return d < 0 ? -1 : 1;
  }
  return 0;
}

// ------------------------------------------------------------- context

const Atom* SymContext::var(const std::string& name) {
  std::lock_guard lock(mu_);
  auto it = vars_.find(name);
  if (it != vars_.end()) return it->second;
  Atom& a = atoms_.emplace_back();
  a.kind = AtomKind::var;
  a.name = name;
  a.hash = mix(std::hash<std::string>{}(name), 1);
  vars_.emplace(name, &a);
  return &a;
}

const Atom* SymContext::absvar(const std::string& name) {
  std::lock_guard lock(mu_);
  auto it = absvars_.find(name);
  if (it != absvars_.end()) return it->second;
  Atom& a = atoms_.emplace_back();
  a.kind = AtomKind::absvar;
  a.name = name;
  a.hash = mix(std::hash<std::string>{}(name), 2);
  absvars_.emplace(name, &a);
  return &a;
}

const Atom* SymContext::opaque(OpaqueFn fn, std::vector<SymExpr> args) {
  std::size_t h = mix(3, static_cast<std::size_t>(fn));
  std::uint64_t ops = 1;
  for (const auto& e : args) {
    h = mix(h, e.hash());
    ops = sat_add(ops, e.count_ops());
  }
  std::lock_guard lock(mu_);
  auto [lo, hi] = opaques_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    const Atom* c = it->second;
    if (c->fn != fn || c->args.size() != args.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < args.size() && same; ++i) same = c->args[i] == args[i];
    if (same) return c;
  }
  Atom& a = atoms_.emplace_back();
  a.kind = AtomKind::opaque;
  a.fn = fn;
  a.args = std::move(args);
  a.hash = h;
  a.ops = ops;
  opaques_.emplace(h, &a);
  return &a;
}

SymExpr SymContext::gated_binary(OpaqueFn fn, const SymExpr& a, const SymExpr& b) {
  {
    std::lock_guard lock(mu_);
    ++gated_;
  }
  // Commutative: order the operands so a*b and b*a share one atom.
  std::vector<SymExpr> args = expr_compare(a, b) <= 0 ? std::vector<SymExpr>{a, b}
                                                      : std::vector<SymExpr>{b, a};
  return SymExpr::atom(opaque(fn, std::move(args)));
}

SymExpr SymContext::add(const SymExpr& a, const SymExpr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::vector<Term> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    int c;
    if (i == x.size()) {
      c = 1;
    } else if (j == y.size()) {
      c = -1;
    } else {
      c = key_compare(x[i].key, y[j].key);
    }
    if (c < 0) {
      out.push_back(x[i++]);
    } else if (c > 0) {
      out.push_back(y[j++]);
    } else {
      mpq_class s = x[i].coef + y[j].coef;
      if (sgn(s) != 0) out.push_back({x[i].key, std::move(s)});
      ++i;
      ++j;
    }
  }
  SymExpr r = SymExpr::from_terms(std::move(out));
  if (r.count_ops() > gate_ && !a.is_constant() && !b.is_constant()) {
    return gated_binary(OpaqueFn::add, a, b);
  }
  return r;
}

SymExpr SymContext::neg(const SymExpr& a) { return scale(a, mpq_class(-1)); }

SymExpr SymContext::sub(const SymExpr& a, const SymExpr& b) { return add(a, neg(b)); }

SymExpr SymContext::scale(const SymExpr& a, const mpq_class& c) {
  if (sgn(c) == 0 || a.is_zero()) return SymExpr();
  if (c == 1) return a;
  std::vector<Term> out = a.terms();
  for (auto& t : out) t.coef *= c;
  return SymExpr::from_terms(std::move(out));
}

SymExpr SymContext::mul(const SymExpr& a, const SymExpr& b) {
  if (a.is_zero() || b.is_zero()) return SymExpr();
  if (a.is_constant()) return scale(b, a.constant_term());
  if (b.is_constant()) return scale(a, b.constant_term());
  const auto& x = a.terms();
  const auto& y = b.terms();
  // Expanding produces at least max(|x|, |y|) terms and up to |x|*|y|; the
  // cheap pre-check avoids building products we would throw away.
  const double pairs = static_cast<double>(x.size()) * static_cast<double>(y.size());
  if (pairs > 4.0 * static_cast<double>(gate_) + 16.0) return gated_binary(OpaqueFn::mul, a, b);
  std::vector<Term> out;
  out.reserve(x.size() * y.size());
  for (const auto& s : x) {
    for (const auto& t : y) out.push_back({key_product(s.key, t.key), s.coef * t.coef});
  }
  SymExpr r = SymExpr::from_terms(canonicalize_terms(std::move(out)));
  if (r.count_ops() > gate_) return gated_binary(OpaqueFn::mul, a, b);
  return r;
}

SymExpr SymContext::div(const SymExpr& a, const SymExpr& b) {
  if (b.is_zero()) throw DomainError("symbolic division by zero");
  if (a.is_zero()) return SymExpr();
  if (b.is_monomial()) {
    const Term& t = b.terms()[0];
    std::vector<Term> inv(1);
    inv[0].coef = 1 / t.coef;
    inv[0].coef.canonicalize();
    for (const auto& f : t.key) inv[0].key.push_back({f.atom, -f.power});
    return mul(a, SymExpr::from_terms(std::move(inv)));
  }
  return mul(a, SymExpr::atom(opaque(OpaqueFn::recip, {b})));
}

SymExpr SymContext::pow(const SymExpr& a, int n) {
  if (n == 0) return SymExpr::constant(mpq_class(1));
  if (n < 0) return div(SymExpr::constant(mpq_class(1)), pow(a, -n));
  SymExpr result = SymExpr::constant(mpq_class(1));
  SymExpr base = a;
  for (unsigned k = static_cast<unsigned>(n);;) {
    if (k & 1U) result = mul(result, base);
    k >>= 1U;
    if (k == 0) break;
    base = mul(base, base);
  }
  return result;
}

SymExpr SymContext::apply(OpaqueFn fn, const SymExpr& a) {
  switch (fn) {
    case OpaqueFn::recip: return div(SymExpr::constant(mpq_class(1)), a);
    case OpaqueFn::mul:
    case OpaqueFn::add: throw std::invalid_argument("mul/add take two operands");
    default: break;
  }
  if (a.is_zero()) {
    if (fn == OpaqueFn::sqrt || fn == OpaqueFn::sin) return SymExpr();
    if (fn == OpaqueFn::exp || fn == OpaqueFn::cos) return SymExpr::constant(mpq_class(1));
  }
  if (fn == OpaqueFn::log && a.is_constant() && a.constant_term() == 1) return SymExpr();
  return SymExpr::atom(opaque(fn, {a}));
}

// ------------------------------------------------------- differentiation

namespace {

class Differ {
 public:
  Differ(SymContext& ctx, const Atom* wrt) : ctx_(ctx), wrt_(wrt) {}

  SymExpr expr(const SymExpr& e) {
    std::vector<Term> simple;
    SymExpr rest;
    for (const Term& t : e.terms()) {
      for (std::size_t i = 0; i < t.key.size(); ++i) {
        const Factor& f = t.key[i];
        const SymExpr da = atom(f.atom);
        if (da.is_zero()) continue;
        Term m;
        m.coef = t.coef * f.power;
        m.key = t.key;
        if (f.power == 1) {
          m.key.erase(m.key.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
          m.key[i].power -= 1;
        }
        if (da.is_constant()) {
          m.coef *= da.constant_term();
          simple.push_back(std::move(m));
        } else {
          rest = ctx_.add(rest, ctx_.mul(SymExpr::from_terms({std::move(m)}), da));
        }
      }
    }
    return ctx_.add(SymExpr::from_terms(canonicalize_terms(std::move(simple))), rest);
  }

  SymExpr atom(const Atom* a) {
    if (a == wrt_) return SymExpr::constant(mpq_class(1));
    if (a->kind != AtomKind::opaque) return SymExpr();
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    SymExpr r = opaque(a);
    memo_.emplace(a, r);
    return r;
  }

 private:
  SymExpr opaque(const Atom* a) {
    const SymExpr self = SymExpr::atom(a);
    const SymExpr d0 = expr(a->args[0]);
    switch (a->fn) {
      case OpaqueFn::mul: {
        const SymExpr d1 = expr(a->args[1]);
        return ctx_.add(ctx_.mul(d0, a->args[1]), ctx_.mul(a->args[0], d1));
      }
      case OpaqueFn::add: return ctx_.add(d0, expr(a->args[1]));
      default: break;
    }
    if (d0.is_zero()) return SymExpr();
    switch (a->fn) {
      case OpaqueFn::recip: return ctx_.mul(ctx_.neg(d0), SymExpr::atom(a, 2));
      case OpaqueFn::sqrt:
        return ctx_.mul(d0, ctx_.scale(SymExpr::atom(a, -1), mpq_class(1, 2)));
      case OpaqueFn::exp: return ctx_.mul(d0, self);
      case OpaqueFn::log: return ctx_.div(d0, a->args[0]);
      case OpaqueFn::sin: return ctx_.mul(d0, ctx_.apply(OpaqueFn::cos, a->args[0]));
      case OpaqueFn::cos: return ctx_.neg(ctx_.mul(d0, ctx_.apply(OpaqueFn::sin, a->args[0])));
      default: return SymExpr();
    }
  }

  SymContext& ctx_;
  const Atom* wrt_;
  std::unordered_map<const Atom*, SymExpr> memo_;
};

}  // namespace

SymExpr sym_diff(SymContext& ctx, const SymExpr& e, const Atom* wrt) {
  return Differ(ctx, wrt).expr(e);
}

// ---------------------------------------------------------- substitution

namespace {

class Substituter {
 public:
  Substituter(SymContext& ctx, const std::unordered_map<const Atom*, SymExpr>& b)
      : ctx_(ctx), bind_(b) {}

  SymExpr expr(const SymExpr& e) {
    std::vector<Term> kept;
    SymExpr rest;
    for (const Term& t : e.terms()) {
      bool changed = false;
      for (const auto& f : t.key) changed = changed || atom(f.atom).second;
      if (!changed) {
        kept.push_back(t);
        continue;
      }
      SymExpr m = SymExpr::constant(t.coef);
      for (const auto& f : t.key) m = ctx_.mul(m, ctx_.pow(atom(f.atom).first, f.power));
      rest = ctx_.add(rest, m);
    }
    return ctx_.add(SymExpr::from_terms(std::move(kept)), rest);
  }

  // (replacement, changed)
  std::pair<SymExpr, bool> atom(const Atom* a) {
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    std::pair<SymExpr, bool> r{SymExpr::atom(a), false};
    if (auto b = bind_.find(a); b != bind_.end()) {
      r = {b->second, !(b->second == r.first)};
    } else if (a->kind == AtomKind::opaque) {
      std::vector<SymExpr> args;
      bool changed = false;
      for (const auto& x : a->args) {
        args.push_back(expr(x));
        changed = changed || !(args.back() == x);
      }
      if (changed) {
        switch (a->fn) {
          case OpaqueFn::mul: r = {ctx_.mul(args[0], args[1]), true}; break;
          case OpaqueFn::add: r = {ctx_.add(args[0], args[1]), true}; break;
          default: r = {ctx_.apply(a->fn, args[0]), true};
        }
      }
    }
    memo_.emplace(a, r);
    return r;
  }

 private:
  SymContext& ctx_;
  const std::unordered_map<const Atom*, SymExpr>& bind_;
  std::unordered_map<const Atom*, std::pair<SymExpr, bool>> memo_;
};

}  // namespace

SymExpr sym_subst(SymContext& ctx, const SymExpr& e,
                  const std::unordered_map<const Atom*, SymExpr>& bindings) {
  if (bindings.empty()) return e;
  return Substituter(ctx, bindings).expr(e);
}

// --------------------------------------------------------------- building

std::vector<SymExpr> sym_build_all(SymContext& ctx, const ExprDag& dag,
                                   std::span<const NodeId> roots) {
  std::vector<bool> need(dag.size(), false);
  for (NodeId r : roots) need.at(r) = true;
  for (NodeId i = static_cast<NodeId>(dag.size()) - 1; i >= 0; --i) {
    if (!need[i]) continue;
    for (NodeId c : dag.nodes()[i].children()) need[c] = true;
  }
  std::vector<SymExpr> v(dag.size());
  for (std::size_t i = 0; i < dag.size(); ++i) {
    if (!need[i]) continue;
    const Node& n = dag.nodes()[i];
    const auto kid = [&](int k) -> const SymExpr& { return v[n.ch[k]]; };
    switch (n.op) {
      case OpKind::input: {
        const InputVar& in = dag.inputs()[n.input];
        v[i] = SymExpr::atom(in.abstracted ? ctx.absvar(in.name) : ctx.var(in.name));
        break;
      }
      case OpKind::cnst: v[i] = SymExpr::constant(n.literal); break;
      case OpKind::add: v[i] = ctx.add(kid(0), kid(1)); break;
      case OpKind::sub: v[i] = ctx.sub(kid(0), kid(1)); break;
      case OpKind::mul: v[i] = ctx.mul(kid(0), kid(1)); break;
      case OpKind::div: v[i] = ctx.div(kid(0), kid(1)); break;
      case OpKind::neg: v[i] = ctx.neg(kid(0)); break;
      case OpKind::sqrt: v[i] = ctx.apply(OpaqueFn::sqrt, kid(0)); break;
      case OpKind::exp: v[i] = ctx.apply(OpaqueFn::exp, kid(0)); break;
      case OpKind::log: v[i] = ctx.apply(OpaqueFn::log, kid(0)); break;
      case OpKind::sin: v[i] = ctx.apply(OpaqueFn::sin, kid(0)); break;
      case OpKind::cos: v[i] = ctx.apply(OpaqueFn::cos, kid(0)); break;
    }
  }
  return v;
}

SymExpr sym_build(SymContext& ctx, const ExprDag& dag, NodeId node) {
  const NodeId roots[] = {node};
  return sym_build_all(ctx, dag, roots)[node];
}

// ---------------------------------------------------------------- printing

namespace {

void print_expr(std::string& out, const SymExpr& e);

void print_atom(std::string& out, const Atom* a) {
  if (a->kind != AtomKind::opaque) {
    out += a->name;
    return;
  }
  out += opaque_name(a->fn);
  out += '(';
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (i) out += ", ";
    print_expr(out, a->args[i]);
  }
  out += ')';
}

void print_expr(std::string& out, const SymExpr& e) {
  if (e.is_zero()) {
    out += '0';
    return;
  }
  bool first = true;
  for (const Term& t : e.terms()) {
    const bool negative = sgn(t.coef) < 0;
    const mpq_class mag = abs(t.coef);
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    bool need_star = false;
    if (t.key.empty() || mag != 1) {
      out += coef_string(mag);
      need_star = true;
    }
    for (const auto& f : t.key) {
      if (need_star) out += '*';
      print_atom(out, f.atom);
      if (f.power != 1) out += '^' + std::to_string(f.power);
      need_star = true;
    }
  }
}

}  // namespace

std::string to_string(const SymExpr& e) {
  std::string s;
  print_expr(s, e);
  return s;
}

// -------------------------------------------------------------- evaluation

Interval to_interval(const mpq_class& q) {
  const double d = q.get_d();  // truncates toward zero
  if (!std::isfinite(d)) return sgn(q) > 0 ? Interval{std::numeric_limits<double>::max(), d}
                                           : Interval{d, -std::numeric_limits<double>::max()};
  if (mpq_class(d) == q) return Interval{d};
  constexpr double inf = std::numeric_limits<double>::infinity();
  return sgn(q) > 0 ? Interval{d, std::nextafter(d, inf)} : Interval{std::nextafter(d, -inf), d};
}

namespace {

void collect_atoms(const SymExpr& e, std::unordered_set<const Atom*>& seen,
                   std::vector<const Atom*>& leaves, std::vector<const Atom*>* opaques) {
  for (const Term& t : e.terms()) {
    for (const auto& f : t.key) {
      if (!seen.insert(f.atom).second) continue;
      if (f.atom->kind == AtomKind::opaque) {
        for (const auto& a : f.atom->args) collect_atoms(a, seen, leaves, opaques);
        if (opaques) opaques->push_back(f.atom);  // post-order: args first
      } else {
        leaves.push_back(f.atom);
      }
    }
  }
}

}  // namespace

std::vector<const Atom*> free_atoms(std::span<const SymExpr> exprs) {
  std::unordered_set<const Atom*> seen;
  std::vector<const Atom*> leaves;
  for (const auto& e : exprs) collect_atoms(e, seen, leaves, nullptr);
  std::sort(leaves.begin(), leaves.end(), atom_less);
  return leaves;
}

CompiledExprs::CompiledExprs(std::span<const SymExpr> exprs, std::vector<const Atom*> dims)
    : dims_(std::move(dims)) {
  std::unordered_set<const Atom*> seen;
  std::vector<const Atom*> leaves;
  std::vector<const Atom*> opaques;
  for (const auto& e : exprs) collect_atoms(e, seen, leaves, &opaques);
  std::unordered_map<const Atom*, std::int32_t> slot_of;
  for (std::size_t i = 0; i < dims_.size(); ++i) slot_of.emplace(dims_[i], static_cast<std::int32_t>(i));
  for (const Atom* a : leaves) {
    if (!slot_of.contains(a)) throw std::invalid_argument("unbound symbol " + a->name);
  }
  for (std::size_t i = 0; i < opaques.size(); ++i) {
    slot_of.emplace(opaques[i], static_cast<std::int32_t>(dims_.size() + i));
  }
  opaques_.reserve(opaques.size());
  for (const Atom* a : opaques) {
    COpaque c{a->fn, {}};
    for (const auto& x : a->args) c.args.push_back(compile(x, slot_of));
    opaques_.push_back(std::move(c));
  }
  exprs_.reserve(exprs.size());
  for (const auto& e : exprs) exprs_.push_back(compile(e, slot_of));
}

CompiledExprs::CPoly CompiledExprs::compile(
    const SymExpr& e, const std::unordered_map<const Atom*, std::int32_t>& slot_of) const {
  CPoly p;
  p.reserve(e.terms().size());
  for (const Term& t : e.terms()) {
    CTerm c;
    c.coef = to_interval(t.coef);
    for (const auto& f : t.key) c.factors.emplace_back(slot_of.at(f.atom), f.power);
    p.push_back(std::move(c));
  }
  return p;
}

Interval CompiledExprs::eval_poly(const CPoly& p, const std::vector<Interval>& slots) const {
  Interval acc{0.0};
  for (const CTerm& t : p) {
    Interval v = t.coef;
    for (const auto& [s, k] : t.factors) v = v * pow(slots[s], k);
    acc = acc + v;
  }
  return acc;
}

void CompiledExprs::fill_slots(std::span<const Interval> box, std::vector<Interval>& slots) const {
  if (box.size() != dims_.size()) throw std::invalid_argument("box dimension mismatch");
  slots.assign(dims_.size() + opaques_.size(), Interval{});
  std::copy(box.begin(), box.end(), slots.begin());
  for (std::size_t i = 0; i < opaques_.size(); ++i) {
    const COpaque& o = opaques_[i];
    const Interval a = eval_poly(o.args[0], slots);
    Interval r;
    switch (o.fn) {
      case OpaqueFn::mul: r = a * eval_poly(o.args[1], slots); break;
      case OpaqueFn::add: r = a + eval_poly(o.args[1], slots); break;
      case OpaqueFn::recip: r = Interval{1.0} / a; break;
      case OpaqueFn::sqrt: r = sqrt(a); break;
      case OpaqueFn::exp: r = exp(a); break;
      case OpaqueFn::log: r = log(a); break;
      case OpaqueFn::sin: r = sin(a); break;
      case OpaqueFn::cos: r = cos(a); break;
    }
    slots[dims_.size() + i] = r;
  }
}

void CompiledExprs::eval(std::span<const Interval> box, std::vector<Interval>& out) const {
  std::vector<Interval> slots;
  fill_slots(box, slots);
  out.resize(exprs_.size());
  for (std::size_t i = 0; i < exprs_.size(); ++i) out[i] = eval_poly(exprs_[i], slots);
}

Interval CompiledExprs::eval_one(std::size_t i, std::span<const Interval> box) const {
  std::vector<Interval> slots;
  fill_slots(box, slots);
  return eval_poly(exprs_.at(i), slots);
}

Interval sym_eval_interval(const SymExpr& e,
                           const std::unordered_map<const Atom*, Interval>& env) {
  std::vector<const Atom*> dims;
  std::vector<Interval> box;
  for (const auto& [a, iv] : env) dims.push_back(a);
  std::sort(dims.begin(), dims.end(), atom_less);
  for (const Atom* a : dims) box.push_back(env.at(a));
  const SymExpr one[] = {e};
  return CompiledExprs(one, dims).eval_one(0, box);
}

}  // namespace fperr
