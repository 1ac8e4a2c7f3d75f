// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <cstdio>
#include <functional>
#include <sstream>

namespace fperr::testing {

Big big_apply(OpKind op, const Big& a, const Big& b) {
  Big r;
  switch (op) {
    case OpKind::add: mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN); break;
    case OpKind::sub: mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN); break;
    case OpKind::mul: mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN); break;
    case OpKind::div: mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN); break;
    case OpKind::neg: mpfr_neg(r.get(), a.get(), MPFR_RNDN); break;
    case OpKind::sqrt: mpfr_sqrt(r.get(), a.get(), MPFR_RNDN); break;
    case OpKind::exp: mpfr_exp(r.get(), a.get(), MPFR_RNDN); break;
    case OpKind::log: mpfr_log(r.get(), a.get(), MPFR_RNDN); break;
    case OpKind::sin: mpfr_sin(r.get(), a.get(), MPFR_RNDN); break;
    case OpKind::cos: mpfr_cos(r.get(), a.get(), MPFR_RNDN); break;
    default: mpfr_set(r.get(), a.get(), MPFR_RNDN);
  }
  return r;
}

std::vector<Big> big_eval(const ExprDag& dag, const std::vector<double>& point) {
  std::vector<Big> v(dag.size());
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const Node& n = dag.nodes()[i];
    if (n.op == OpKind::cnst) {
      v[i] = Big(n.literal);
    } else if (n.op == OpKind::input) {
      v[i] = Big(point.at(n.input));
    } else {
      v[i] = big_apply(n.op, v[n.ch[0]], n.nchildren == 2 ? v[n.ch[1]] : Big());
    }
  }
  return v;
}

namespace {

std::string fmt(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

}  // namespace

std::string random_program(std::mt19937_64& rng, int max_depth, int max_inputs) {
  std::uniform_int_distribution<int> n_in(1, max_inputs);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int m = n_in(rng);
  std::ostringstream os;
  os << "INPUTS {\n";
  for (int i = 0; i < m; ++i) {
    const double lo = 0.5 + 1.5 * unit(rng);
    const double w = unit(rng) < 0.1 ? 0.0 : 2.0 * unit(rng);
    os << "  x" << i << " fl64 : (" << fmt(lo) << ", " << fmt(lo + w) << ");\n";
  }
  os << "}\nOUTPUTS { f; }\nEXPRS {\n";

  std::vector<std::string> pos_names;  // names known to be positive
  std::vector<std::string> any_names;
  for (int i = 0; i < m; ++i) pos_names.push_back("x" + std::to_string(i));
  any_names = pos_names;

  const double consts[] = {0.1, 0.5, 1.0, 2.0, 3.0, 0.3, 1.5, 7.0};
  std::function<std::string(int, bool)> gen = [&](int depth, bool positive) -> std::string {
    if (depth == 0 || unit(rng) < 0.2) {
      if (unit(rng) < 0.15) return fmt(consts[rng() % 8]);
      const auto& pool = positive ? pos_names : any_names;
      return pool[rng() % pool.size()];
    }
    const int pick = static_cast<int>(rng() % 4);
    if (positive || pick == 0) {
      const int p2 = static_cast<int>(rng() % 3);
      const std::string a = gen(depth - 1, true);
      const std::string b = gen(depth - 1, true);
      const char op = p2 == 0 ? '+' : (p2 == 1 ? '*' : '/');
      return "(" + a + " " + op + " " + b + ")";
    }
    if (pick == 3) {
      return "(" + gen(depth - 1, false) + " / " + gen(depth - 1, true) + ")";
    }
    const char op = pick == 1 ? '-' : (unit(rng) < 0.5 ? '*' : '+');
    return "(" + gen(depth - 1, false) + " " + op + " " + gen(depth - 1, false) + ")";
  };

  const int temps = static_cast<int>(rng() % 3);
  int depth_left = max_depth;
  for (int t = 0; t < temps && depth_left > 2; ++t) {
    const int d = 1 + static_cast<int>(rng() % 2);
    const bool positive = unit(rng) < 0.5;
    const std::string name = "t" + std::to_string(t);
    os << "  " << name << " = " << gen(d, positive) << ";\n";
    (positive ? pos_names : any_names).push_back(name);
    if (positive) any_names.push_back(name);
    depth_left -= d;
  }
  os << "  f = " << gen(std::max(1, depth_left), false) << ";\n}\n";
  return os.str();
}

}  // namespace fperr::testing

namespace fperr::testing {

namespace {

Big big_eval_atom(const Atom* a, const std::unordered_map<const Atom*, Big>& env,
                  std::unordered_map<const Atom*, Big>& memo) {
  if (a->kind != AtomKind::opaque) return env.at(a);
  if (auto it = memo.find(a); it != memo.end()) return it->second;
  std::vector<Big> args;
  for (const auto& x : a->args) args.push_back(big_eval_sym(x, env));
  Big r;
  switch (a->fn) {
    case OpaqueFn::mul: r = big_apply(OpKind::mul, args[0], args[1]); break;
    case OpaqueFn::add: r = big_apply(OpKind::add, args[0], args[1]); break;
    case OpaqueFn::recip: r = big_apply(OpKind::div, Big(1.0), args[0]); break;
    case OpaqueFn::sqrt: r = big_apply(OpKind::sqrt, args[0], Big()); break;
    case OpaqueFn::exp: r = big_apply(OpKind::exp, args[0], Big()); break;
    case OpaqueFn::log: r = big_apply(OpKind::log, args[0], Big()); break;
    case OpaqueFn::sin: r = big_apply(OpKind::sin, args[0], Big()); break;
    case OpaqueFn::cos: r = big_apply(OpKind::cos, args[0], Big()); break;
  }
  memo.emplace(a, r);
  return r;
}

}  // namespace

Big big_eval_sym(const SymExpr& e, const std::unordered_map<const Atom*, Big>& env) {
  std::unordered_map<const Atom*, Big> memo;
  Big acc;
  for (const Term& t : e.terms()) {
    Big m;
    mpfr_set_q(m.get(), t.coef.get_mpq_t(), MPFR_RNDN);
    for (const auto& f : t.key) {
      const Big base = big_eval_atom(f.atom, env, memo);
      Big p;
      mpfr_pow_si(p.get(), base.get(), f.power, MPFR_RNDN);
      mpfr_mul(m.get(), m.get(), p.get(), MPFR_RNDN);
    }
    mpfr_add(acc.get(), acc.get(), m.get(), MPFR_RNDN);
  }
  return acc;
}

double central_difference(const ExprDag& dag, NodeId out, std::vector<double> point, int k,
                          double h) {
  const double x = point.at(k);
  point[k] = x + h;
  const Big fp = big_eval(dag, point)[out];
  point[k] = x - h;
  const Big fm = big_eval(dag, point)[out];
  Big d;
  mpfr_sub(d.get(), fp.get(), fm.get(), MPFR_RNDN);
  // The actual step is (x+h)-(x-h) as represented in binary64.
  Big step;
  mpfr_set_d(step.get(), x + h, MPFR_RNDN);
  Big lo;
  mpfr_set_d(lo.get(), x - h, MPFR_RNDN);
  mpfr_sub(step.get(), step.get(), lo.get(), MPFR_RNDN);
  mpfr_div(d.get(), d.get(), step.get(), MPFR_RNDN);
  return d.to_double();
}

}  // namespace fperr::testing
