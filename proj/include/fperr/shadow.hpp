// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fperr/expr_ir.hpp"

namespace fperr {

/// IEEE binary128 (113-bit significand) via libquadmath.
using HPValue = __float128;

HPValue hp_apply(OpKind op, HPValue a, HPValue b = 0);
/// Every node in binary128 at `point` (indexed like dag.inputs()).
std::vector<HPValue> eval_hp(const ExprDag& dag, std::span<const double> point);
std::string hp_to_string(HPValue v);

struct EvalPair {
  std::vector<double> fp;   // per output
  std::vector<HPValue> hp;  // per output
  bool finite = true;
};

EvalPair eval_pair(const ExprDag& dag, std::span<const double> point);

struct SampleReport {
  std::string output;
  std::int64_t n_samples = 0;  // valid samples
  std::int64_t excluded = 0;   // non-finite or below the profile floor
  std::uint64_t seed = 0;
  double max_abs_error = 0.0;
  std::vector<double> argmax_point;
  // Relative profile (only filled by relative_profile).
  double bound = 0.0;
  double q_min = 0.0;
  double q_median = 0.0;
  double q_max = 0.0;
  double bits_lost_max = 0.0;
};

struct SampleConfig {
  std::int64_t n = 10000;
  std::uint64_t seed = 1;
  bool corners = true;  // also probe all 2^m corners when m <= 12
  int threads = 1;
};

/// The i-th sample point (uniform per dimension, then rounded into the
/// declared precision without leaving the box). Depends only on (seed, i).
std::vector<double> sample_point(const ExprDag& dag, std::uint64_t seed, std::int64_t index);

/// Max |hp - fp| per output over random samples (and box corners).
std::vector<SampleReport> sample_max_error(const ExprDag& dag, const SampleConfig& cfg);

/// Runtime relative-error profile of one output against an absolute bound:
/// Q = bound/|fp| - |hp - fp|/|hp| and bits lost per sample. When `csv` is
/// given, one row per valid sample is written.
SampleReport relative_profile(const ExprDag& dag, NodeId output, double bound,
                              const SampleConfig& cfg, std::ostream* csv = nullptr);

/// p - log2(re/u), clamped to [0, p].
double bits_lost(double relative_error, Precision p);

}  // namespace fperr
