// SPDX-License-Identifier: Apache-2.0
// Shared oracles for the test suites.
#pragma once

#include <mpfr.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fperr/expr_ir.hpp"

namespace fperr::testing {

/// 200-bit MPFR number with RAII.
class Big {
 public:
  Big() { mpfr_init2(v_, 200); mpfr_set_zero(v_, 1); }
  explicit Big(double d) : Big() { mpfr_set_d(v_, d, MPFR_RNDN); }
  Big(const Big& o) : Big() { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Big& operator=(const Big& o) { mpfr_set(v_, o.v_, MPFR_RNDN); return *this; }
  ~Big() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

/// Apply an OpKind in 200-bit arithmetic.
Big big_apply(OpKind op, const Big& a, const Big& b);

/// Evaluate every node of the DAG at `point` in 200-bit arithmetic.
std::vector<Big> big_eval(const ExprDag& dag, const std::vector<double>& point);

/// Random straight-line program over +,-,*,/ with at most `max_inputs`
/// positive-range inputs and expression depth <= `max_depth`. Divisors are
/// kept away from zero by construction.
std::string random_program(std::mt19937_64& rng, int max_depth, int max_inputs);

}  // namespace fperr::testing

#include <unordered_map>

#include "fperr/symbolic.hpp"

namespace fperr::testing {

/// Evaluate a canonical expression at a point (Var/AbsVar -> value) in
/// 200-bit arithmetic.
Big big_eval_sym(const SymExpr& e, const std::unordered_map<const Atom*, Big>& env);

/// Central difference of a DAG output with respect to input `k` in quad
/// precision, step h.
double central_difference(const ExprDag& dag, NodeId out, std::vector<double> point, int k,
                          double h);

}  // namespace fperr::testing
