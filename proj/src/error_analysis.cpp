// SPDX-License-Identifier: Apache-2.0
#include "fperr/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>

namespace fperr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact |fl(a op b) - (a op b)| for an arithmetic op on fixed operands,
// rounded upward to binary64.
double exact_rounding_error(OpKind op, Precision p, double a, double b) {
  const mpq_class qa(a), qb(b);
  mpq_class exact;
  switch (op) {
    case OpKind::add: exact = qa + qb; break;
    case OpKind::sub: exact = qa - qb; break;
    case OpKind::mul: exact = qa * qb; break;
    case OpKind::div: exact = qa / qb; break;
    default: return kInf;
  }
  const double got = fp_apply(op, p, a, b);
  if (!std::isfinite(got)) return kInf;
  const mpq_class err = abs(mpq_class(got) - exact);
  return to_interval(err).hi;
}

// Nodes whose subtree contains no input: their floating-point operands are
// fixed, so the rounding they commit can be computed exactly.
std::vector<bool> constant_subtrees(const ExprDag& dag) {
  std::vector<bool> c(dag.size(), false);
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const Node& n = dag.nodes()[i];
    if (n.op == OpKind::cnst) {
      c[i] = true;
    } else if (n.op != OpKind::input) {
      bool all = true;
      for (NodeId k : n.children()) all = all && c[k];
      c[i] = all;
    }
  }
  return c;
}

// |adj| over the whole box; falls back to branch and bound when plain
// interval evaluation hits a pole.
double adjoint_magnitude(const SymExpr& adj, const SymbolicDag& sd, const ExprDag& dag,
                         const OptConfig& ocfg) {
  if (adj.is_constant()) return mag(to_interval(adj.constant_term()));
  std::unordered_map<const Atom*, Interval> env;
  for (std::size_t i = 0; i < sd.input_atoms.size(); ++i) {
    env.emplace(sd.input_atoms[i], dag.inputs()[i].range);
  }
  try {
    return mag(sym_eval_interval(adj, env));
  } catch (const DomainError&) {
  }
  const auto dims = free_atoms(std::span<const SymExpr>(&adj, 1));
  SearchBox box;
  for (const Atom* a : dims) {
    box.atoms.push_back(a);
    box.ranges.push_back(env.at(a));
  }
  const OptResult hi = maximize(adj, box, ocfg);
  const OptResult lo = minimize(adj, box, ocfg);
  return std::max(std::fabs(hi.upper), std::fabs(lo.lower));
}

std::string describe_node(const ExprDag& dag, NodeId id) {
  const std::string& l = dag.label(id);
  return l.empty() ? std::string(op_name(dag.node(id).op)) + " node #" + std::to_string(id)
                   : "'" + l + "'";
}

// First node whose interval evaluation leaves its domain over the box.
std::string locate_domain_problem(const ExprDag& dag, NodeId output) {
  const auto mask = reachable_from(dag, output);
  std::vector<Interval> v(dag.size());
  for (std::size_t i = 0; i < dag.size(); ++i) {
    if (!mask[i]) continue;
    const Node& n = dag.nodes()[i];
    try {
      if (n.op == OpKind::cnst) {
        v[i] = Interval{n.literal};
      } else if (n.op == OpKind::input) {
        v[i] = dag.inputs()[n.input].range;
      } else {
        v[i] = iv_arith(n.op, v[n.ch[0]], n.nchildren == 2 ? v[n.ch[1]] : Interval{});
      }
    } catch (const DomainError& e) {
      return describe_node(dag, static_cast<NodeId>(i)) + " (" + e.what() + ")";
    }
  }
  return "output '" + dag.label(output) + "'";
}

}  // namespace

OptConfig AnalysisConfig::optimizer() const {
  OptConfig o;
  o.rel_tol = optimizer_tol;
  o.abs_tol = optimizer_abs_tol;
  o.max_boxes = optimizer_budget;
  o.deterministic = deterministic;
  o.threads = threads;
  return o;
}

SymbolicDag symbolic_values(SymContext& ctx, const ExprDag& dag, std::span<const NodeId> roots) {
  SymbolicDag sd;
  sd.values = sym_build_all(ctx, dag, roots);
  for (const InputVar& in : dag.inputs()) {
    sd.input_atoms.push_back(in.abstracted ? ctx.absvar(in.name) : ctx.var(in.name));
  }
  return sd;
}

LocalError local_error(const ExprDag& dag, NodeId node, const SymbolicDag& sd,
                       const RoundingFactors& rf) {
  const Node& n = dag.node(node);
  LocalError le;
  le.value = sd.values.at(node);
  le.rounding_factor = rf.of(n.op);
  le.precision = n.op == OpKind::input ? dag.inputs()[n.input].precision : n.prec;
  return le;
}

LocalError local_error(SymContext& ctx, const ExprDag& dag, NodeId node, const RoundingFactors& rf) {
  const NodeId roots[] = {node};
  return local_error(dag, node, symbolic_values(ctx, dag, roots), rf);
}

std::vector<ErrorTerm> node_errors(const ExprDag& dag, const SymbolicDag& sd,
                                   const AnalysisConfig& cfg) {
  std::vector<ErrorTerm> errs(dag.size());
  const auto konst = constant_subtrees(dag);
  std::vector<double> fixed(dag.size(), 0.0);
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const Node& n = dag.nodes()[i];
    if (konst[i]) {
      fixed[i] = n.op == OpKind::cnst ? n.literal
                                      : fp_apply(n.op, n.prec, fixed[n.ch[0]],
                                                 n.nchildren == 2 ? fixed[n.ch[1]] : 0.0);
    }
    if (n.op == OpKind::cnst) continue;
    if (n.op == OpKind::input) {
      const InputVar& in = dag.inputs()[n.input];
      ErrorTerm t = ErrorTerm::concrete_bound(mag(in.incoming_error));
      if (cfg.input_rounding && !in.abstracted) {
        t.expr = sd.values[i];
        t.scale = unit_roundoff(in.precision);
      }
      errs[i] = std::move(t);
      continue;
    }
    const double rf = cfg.rounding.of(n.op);
    if (rf == 0.0) continue;
    if (konst[i] && (n.op == OpKind::add || n.op == OpKind::sub || n.op == OpKind::mul ||
                     n.op == OpKind::div)) {
      const double e = exact_rounding_error(n.op, n.prec, fixed[n.ch[0]], fixed[n.ch[1]]);
      errs[i] = ErrorTerm::concrete_bound(e);
      continue;
    }
    errs[i] = ErrorTerm::symbolic(sd.values[i], rf * unit_roundoff(n.prec));
  }
  return errs;
}

std::vector<SymExpr> reverse_adjoints(SymContext& ctx, const ExprDag& dag, NodeId output,
                                      const SymbolicDag& sd, AdjointStats* stats) {
  (void)dag.node(output);
  std::vector<SymExpr> adj(dag.size());
  adj[output] = SymExpr::constant(1.0);
  const SymExpr one = SymExpr::constant(1.0);
  const auto& v = sd.values;
  for (NodeId i = output; i >= 0; --i) {
    if (adj[i].is_zero()) continue;
    const Node& n = dag.nodes()[i];
    if (n.is_leaf()) continue;
    const SymExpr& a = v[n.ch[0]];
    SymExpr d0, d1;
    switch (n.op) {
      case OpKind::add: d0 = one; d1 = one; break;
      case OpKind::sub: d0 = one; d1 = SymExpr::constant(-1.0); break;
      case OpKind::mul: d0 = v[n.ch[1]]; d1 = a; break;
      case OpKind::div:
        d0 = ctx.div(one, v[n.ch[1]]);
        d1 = ctx.neg(ctx.div(v[i], v[n.ch[1]]));
        break;
      case OpKind::neg: d0 = SymExpr::constant(-1.0); break;
      case OpKind::sqrt: d0 = ctx.div(SymExpr::constant(0.5), v[i]); break;
      case OpKind::exp: d0 = v[i]; break;
      case OpKind::log: d0 = ctx.div(one, a); break;
      case OpKind::sin: d0 = ctx.apply(OpaqueFn::cos, a); break;
      case OpKind::cos: d0 = ctx.neg(ctx.apply(OpaqueFn::sin, a)); break;
      case OpKind::cnst:
      case OpKind::input: break;
    }
    const SymExpr* partial[2] = {&d0, &d1};
    for (int k = 0; k < n.nchildren; ++k) {
      const NodeId c = n.ch[k];
      if (stats) ++stats->accumulations;
      if (dag.nodes()[c].op == OpKind::cnst) continue;
      adj[c] = ctx.add(adj[c], ctx.mul(adj[i], *partial[k]));
    }
  }
  return adj;
}

ErrorObjective assemble_objective(SymContext& ctx, const ExprDag& dag, NodeId output,
                                  const SymbolicDag& sd, std::span<const ErrorTerm> errors,
                                  std::span<const SymExpr> adjoints, bool abs_around_product) {
  (void)output;
  ErrorObjective obj;
  obj.abs_around_product = abs_around_product;
  AnalysisConfig defaults;
  const OptConfig ocfg = defaults.optimizer();
  std::vector<SymExpr> used;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const ErrorTerm& e = errors[i];
    if (e.empty()) continue;
    if (i >= adjoints.size()) throw AnalysisError("missing adjoint for an error-carrying node");
    const SymExpr& adj = adjoints[i];
    if (adj.is_zero()) continue;
    if (e.scale != 0.0 && !e.expr.is_zero()) {
      ObjectiveTerm t;
      t.node = static_cast<NodeId>(i);
      t.adjoint = adj;
      t.value = e.expr;
      t.scale = e.scale / kObjectiveUnit;
      if (abs_around_product) {
        t.product = ctx.mul(adj, e.expr);
        if (!t.product.is_zero()) {
          used.push_back(t.product);
          obj.terms.push_back(std::move(t));
        }
      } else {
        used.push_back(adj);
        used.push_back(e.expr);
        obj.terms.push_back(std::move(t));
      }
    }
    if (e.concrete > 0.0) {
      const double m = adjoint_magnitude(adj, sd, dag, ocfg);
      obj.concrete_part =
          obj.concrete_part + Interval{m} * Interval{std::ldexp(e.concrete, 53)};
    }
  }
  obj.dims = free_atoms(used);
  for (const Atom* a : obj.dims) {
    bool found = false;
    for (std::size_t k = 0; k < sd.input_atoms.size(); ++k) {
      if (sd.input_atoms[k] == a) {
        obj.ranges.push_back(dag.inputs()[k].range);
        found = true;
        break;
      }
    }
    if (!found) throw AnalysisError("objective refers to an unknown variable " + a->name);
  }
  return obj;
}

namespace {

bool is_affine(const SymExpr& e, const std::vector<const Atom*>& dims) {
  for (const Term& t : e.terms()) {
    if (t.key.size() > 1) return false;
    for (const Factor& f : t.key) {
      if (f.power != 1 || std::find(dims.begin(), dims.end(), f.atom) == dims.end()) {
        return false;
      }
    }
  }
  return true;
}

// Terms that go through the interval evaluator.
std::vector<std::size_t> slow_terms(const ErrorObjective& obj) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < obj.terms.size(); ++i) {
    if (!obj.abs_around_product || !is_affine(obj.terms[i].product, obj.dims)) idx.push_back(i);
  }
  return idx;
}

std::vector<SymExpr> objective_exprs(const ErrorObjective& obj) {
  std::vector<SymExpr> ex;
  for (std::size_t i : slow_terms(obj)) {
    const ObjectiveTerm& t = obj.terms[i];
    if (obj.abs_around_product) {
      ex.push_back(t.product);
    } else {
      ex.push_back(t.adjoint);
      ex.push_back(t.value);
    }
  }
  return ex;
}

constexpr double kU = 0x1p-53;
constexpr double kTiny = 0x1p-1000;  // covers underflow in the fast path; kept normal

double up_by(double v, double n) { return v * (1.0 + 2.0 * (n + 4.0) * kU) + n * kTiny; }
double down_by(double v, double n) { return v * (1.0 - 2.0 * (n + 4.0) * kU) - n * kTiny; }

}  // namespace

ErrorObjectiveFn::ErrorObjectiveFn(const ErrorObjective& obj)
    : ndims_(obj.dims.size()),
      code_(objective_exprs(obj), obj.dims),
      slow_(slow_terms(obj)),
      split_(!obj.abs_around_product),
      concrete_(obj.concrete_part) {
  for (const ObjectiveTerm& t : obj.terms) scales_.push_back(t.scale);
  vertex_.assign(ndims_, false);
  if (split_) return;
  std::unordered_map<const Atom*, std::int32_t> dim_of;
  for (std::size_t k = 0; k < ndims_; ++k) {
    dim_of.emplace(obj.dims[k], static_cast<std::int32_t>(k));
  }
  std::vector<bool> slow(obj.terms.size(), false);
  for (std::size_t i : slow_) slow[i] = true;
  // Proportional affine terms share one |p|: w1 |p| + w2 |c p| = (w1 + w2 |c|) |p|.
  // Key: coefficients divided by the leading one, constant at dim -1.
  using Key = std::vector<std::pair<std::int32_t, mpq_class>>;
  std::map<Key, Interval> merged;
  for (std::size_t i = 0; i < obj.terms.size(); ++i) {
    if (slow[i]) continue;
    Key key;
    for (const Term& t : obj.terms[i].product.terms()) {
      key.emplace_back(t.key.empty() ? -1 : dim_of.at(t.key[0].atom), t.coef);
    }
    if (key.empty()) continue;
    std::sort(key.begin(), key.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const mpq_class lead = key.back().second;
    for (auto& [d, c] : key) c /= lead;
    auto [it, fresh] = merged.emplace(std::move(key), Interval{0.0});
    it->second = it->second + Interval{scales_[i]} * abs(to_interval(lead));
  }
  for (const auto& [key, w] : merged) {
    AffineTerm at;
    at.begin = aff_dim_.size();
    for (const auto& [d, q] : key) {
      const Interval c = w * to_interval(q);
      const double m = c.mid();
      const double r = std::nextafter(std::max(c.hi - m, m - c.lo), kInf);
      if (d < 0) {
        at.c0 = m;
        at.c0_rad = r;
      } else {
        aff_dim_.push_back(d);
        aff_coef_.push_back(m);
        aff_rad_.push_back(r);
      }
    }
    at.end = aff_dim_.size();
    aff_.push_back(at);
  }

  std::map<std::vector<std::pair<std::int32_t, int>>, std::int32_t> mono_id;
  poly_.resize(slow_.size());
  for (std::size_t k = 0; k < slow_.size(); ++k) {
    const std::size_t i = slow_[k];
    PolyTerm& pt = poly_[k];
    pt.collectable = true;
    for (const Term& t : obj.terms[i].product.terms()) {
      std::vector<std::pair<std::int32_t, int>> key;
      for (const Factor& f : t.key) {
        const auto it = dim_of.find(f.atom);
        if (it == dim_of.end() || f.power < 1) {
          pt.collectable = false;
          break;
        }
        key.emplace_back(it->second, f.power);
      }
      if (!pt.collectable) break;
      std::sort(key.begin(), key.end());
      auto [m, fresh] = mono_id.emplace(key, static_cast<std::int32_t>(monos_.size()));
      if (fresh) monos_.push_back(Monomial{std::move(key)});
      pt.coefs.emplace_back(m->second, Interval{scales_[i]} * to_interval(t.coef));
    }
    if (!pt.collectable) pt.coefs.clear();
  }

  vertex_.assign(ndims_, true);
  for (std::size_t k = 0; k < slow_.size(); ++k) {
    if (poly_[k].collectable) {
      for (const auto& [mono, c] : poly_[k].coefs) {
        for (const auto& [d, pw] : monos_[mono].factors) {
          if (pw > 1) vertex_[d] = false;
        }
      }
    } else {
      const SymExpr& e = obj.terms[slow_[k]].product;
      for (const Atom* a : free_atoms(std::span<const SymExpr>(&e, 1))) {
        if (const auto it = dim_of.find(a); it != dim_of.end()) vertex_[it->second] = false;
      }
    }
  }
}

Interval ErrorObjectiveFn::eval(std::span<const Interval> box) const {
  std::vector<double> hint;
  return eval(box, hint);
}

Interval ErrorObjectiveFn::eval(std::span<const Interval> box, std::vector<double>& hint) const {
  hint.clear();
  if (box.size() != ndims_) throw std::invalid_argument("box dimension mismatch");
  std::vector<Interval> v;
  if (!slow_.empty()) code_.eval(box, v);
  Interval acc{concrete_.hi};
  if (split_) {
    for (std::size_t i = 0; i < scales_.size(); ++i) {
      acc = acc + Interval{scales_[i]} * (abs(v[2 * i]) * abs(v[2 * i + 1]));
    }
    return acc;
  }

  // Each |p| is bounded above by its chord k p + off over p's range.
  // Interval path first.
  std::vector<Interval> collected(monos_.size(), Interval{0.0});
  Interval offsets{0.0}, termwise{0.0};
  for (std::size_t k = 0; k < slow_.size(); ++k) {
    const Interval& r = v[k];
    const Interval m = Interval{scales_[slow_[k]]} * abs(r);
    if (!poly_[k].collectable || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
      acc = acc + m;
      continue;
    }
    termwise = termwise + m;
    double kk = 1.0, off = 0.0;
    if (r.hi <= 0.0) {
      kk = -1.0;
    } else if (r.lo < 0.0) {
      kk = (std::fabs(r.hi) - std::fabs(r.lo)) / (r.hi - r.lo);
      off = std::max((Interval{-r.lo} - Interval{kk} * Interval{r.lo}).hi,
                     (Interval{r.hi} - Interval{kk} * Interval{r.hi}).hi);
    }
    if (off != 0.0) offsets = offsets + Interval{scales_[slow_[k]]} * Interval{off};
    const Interval ki{kk};
    for (const auto& [mono, c] : poly_[k].coefs) collected[mono] = collected[mono] + ki * c;
  }
  Interval chords = offsets;
  std::vector<double> slope(ndims_, 0.0);
  for (std::size_t mono = 0; mono < monos_.size(); ++mono) {
    const Interval& c = collected[mono];
    if (c.lo == 0.0 && c.hi == 0.0) continue;
    Interval x{1.0};
    for (const auto& [d, pw] : monos_[mono].factors) x = x * pow(box[d], pw);
    chords = chords + c * x;
    if (monos_[mono].factors.size() == 1 && monos_[mono].factors[0].second == 1) {
      slope[monos_[mono].factors[0].first] = c.mid();
    }
  }

  // Affine terms in plain arithmetic. Every sum below has fewer than `n`
  // rounded operations, so its error is below 2 n u times the sum of the
  // magnitudes involved; up_by and down_by apply that bound.
  double tw_lo = 0.0, tw_hi = 0.0;  // sum of min and max of |p|
  double ch_const = 0.0, ch_mag = 0.0;
  std::vector<double> g(ndims_, 0.0);
  bool finite = true;
  for (const AffineTerm& at : aff_) {
    double lo = at.c0, hi = at.c0, mag = std::fabs(at.c0), rad = at.c0_rad;
    for (std::size_t e = at.begin; e < at.end; ++e) {
      const Interval& x = box[aff_dim_[e]];
      const double a = aff_coef_[e];
      const double xm = std::max(std::fabs(x.lo), std::fabs(x.hi));
      lo += a > 0 ? a * x.lo : a * x.hi;
      hi += a > 0 ? a * x.hi : a * x.lo;
      mag += std::fabs(a) * xm;
      rad += aff_rad_[e] * xm;
    }
    const double n = static_cast<double>(at.end - at.begin) + 2.0;
    const double err = up_by(mag, n) - mag + up_by(rad, n);
    lo -= err;
    hi += err;
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      finite = false;
      break;
    }
    tw_hi += std::max(std::fabs(lo), std::fabs(hi));
    tw_lo += lo > 0 ? lo : (hi < 0 ? -hi : 0.0);
    double kk = 1.0, off = 0.0;
    if (hi <= 0.0) {
      kk = -1.0;
    } else if (lo < 0.0) {
      kk = (hi + lo) / (hi - lo);
      off = std::max(-lo - kk * lo, hi - kk * hi) + 4.0 * kU * (hi - lo);
    }
    ch_const += kk * at.c0 + off;
    ch_mag += std::fabs(kk) * (mag + std::fabs(at.c0)) + off + up_by(rad, n);
    for (std::size_t e = at.begin; e < at.end; ++e) g[aff_dim_[e]] += kk * aff_coef_[e];
  }
  double fast_lo = 0.0, fast_hi = 0.0;
  if (!aff_.empty()) {
    const double terms = static_cast<double>(aff_.size());
    if (finite) {
      double ch = ch_const;
      for (std::size_t d = 0; d < ndims_; ++d) {
        if (g[d] != 0.0) ch += std::max(g[d] * box[d].lo, g[d] * box[d].hi);
      }
      const double total = static_cast<double>(aff_dim_.size() + ndims_) + terms;
      ch += 2.0 * (up_by(ch_mag, total) - ch_mag);
      fast_hi = std::min(up_by(tw_hi, terms), std::max(ch, 0.0));
      fast_lo = std::max(0.0, down_by(tw_lo, terms));
    } else {
      fast_hi = kInf;
    }
  }

  for (std::size_t d = 0; d < ndims_; ++d) slope[d] += g[d];
  hint.resize(ndims_);
  for (std::size_t d = 0; d < ndims_; ++d) {
    hint[d] = slope[d] > 0 ? box[d].hi : (slope[d] < 0 ? box[d].lo : box[d].mid());
  }
  const double slow_hi = std::min(termwise.hi, chords.hi);
  const Interval rest = Interval{termwise.lo, slow_hi} + Interval{fast_lo, fast_hi};
  return acc + rest;
}

PreparedBound prepare_bound(SymContext& ctx, const ExprDag& dag, NodeId output,
                            const SymbolicDag& sd, std::span<const ErrorTerm> errors,
                            const AnalysisConfig& cfg) {
  PreparedBound pb;
  pb.output = output;
  AdjointStats st;
  const auto adj = reverse_adjoints(ctx, dag, output, sd, &st);
  pb.adjoint_accumulations = st.accumulations;
  pb.objective = assemble_objective(ctx, dag, output, sd, errors, adj, cfg.abs_around_product);
  pb.value = sd.values.at(output);
  for (const Atom* a : free_atoms(std::span<const SymExpr>(&pb.value, 1))) {
    for (std::size_t k = 0; k < sd.input_atoms.size(); ++k) {
      if (sd.input_atoms[k] == a) {
        pb.value_box.atoms.push_back(a);
        pb.value_box.ranges.push_back(dag.inputs()[k].range);
      }
    }
  }
  return pb;
}

BoundResult solve_bound(const PreparedBound& pb, const ExprDag& dag, const AnalysisConfig& cfg) {
  BoundResult r;
  r.adjoint_accumulations = pb.adjoint_accumulations;
  r.objective_terms = pb.objective.terms.size();
  const ErrorObjective& obj = pb.objective;
  const OptConfig ocfg = cfg.optimizer();
  auto error_query = [&]() {
    OptResult o;
    if (obj.terms.empty()) {
      o.lower = o.upper = obj.concrete_part.hi;
      o.converged = true;
      return o;
    }
    const ErrorObjectiveFn f(obj);
    return maximize(f, obj.ranges, ocfg);
  };
  OptConfig rcfg = ocfg;
  rcfg.abs_tol = 1e-12;
  auto range_query = [&](bool upper) {
    if (pb.value.is_constant()) {
      const Interval c = to_interval(pb.value.constant_term());
      OptResult o;
      o.lower = c.lo;
      o.upper = c.hi;
      o.converged = true;
      return o;
    }
    return upper ? maximize(pb.value, pb.value_box, rcfg) : minimize(pb.value, pb.value_box, rcfg);
  };

  if (cfg.threads > 1) {
    auto fe = std::async(std::launch::async, error_query);
    auto fmax = std::async(std::launch::async, range_query, true);
    r.min_opt = range_query(false);
    r.max_opt = fmax.get();
    r.error_opt = fe.get();
  } else {
    r.error_opt = error_query();
    r.max_opt = range_query(true);
    r.min_opt = range_query(false);
  }

  r.bound = r.error_opt.upper * kObjectiveUnit;
  r.range = Interval{r.min_opt.lower, r.max_opt.upper};
  r.converged = r.error_opt.converged && r.max_opt.converged && r.min_opt.converged;
  if (!std::isfinite(r.bound) || std::isnan(r.range.lo) || std::isnan(r.range.hi)) {
    throw AnalysisError("error bound is unbounded: domain problem at " +
                        locate_domain_problem(dag, pb.output));
  }
  return r;
}

BoundResult bound_total_error(SymContext& ctx, const ExprDag& dag, NodeId output,
                              const SymbolicDag& sd, const AnalysisConfig& cfg) {
  const auto errors = node_errors(dag, sd, cfg);
  return solve_bound(prepare_bound(ctx, dag, output, sd, errors, cfg), dag, cfg);
}

BoundResult bound_total_error(const ExprDag& dag, NodeId output, const AnalysisConfig& cfg) {
  SymContext ctx(cfg.max_opcount);
  const NodeId roots[] = {output};
  const SymbolicDag sd = symbolic_values(ctx, dag, roots);
  return bound_total_error(ctx, dag, output, sd, cfg);
}

}  // namespace fperr
