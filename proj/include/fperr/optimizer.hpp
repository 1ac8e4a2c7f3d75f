// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "fperr/interval.hpp"
#include "fperr/symbolic.hpp"

namespace fperr {

/// Anything the branch-and-bound search can bound over a box.
class Objective {
 public:
  virtual ~Objective() = default;
  [[nodiscard]] virtual std::size_t dims() const = 0;
  /// Enclosure of the objective over the box. May throw DomainError.
  [[nodiscard]] virtual Interval eval(std::span<const Interval> box) const = 0;
  /// Same enclosure, plus optionally a point of the box worth probing as a
  /// likely maximizer (left empty when there is none).
  virtual Interval eval(std::span<const Interval> box, std::vector<double>& hint) const {
    hint.clear();
    return eval(box);
  }
  /// True when, with every other coordinate fixed, the objective is convex
  /// along coordinate d on the whole search box. Its maximum over any box is
  /// then attained on one of the two faces x_d = lo, x_d = hi, so the search
  /// splits such a dimension into those faces instead of halves.
  [[nodiscard]] virtual bool vertex_dim(std::size_t d) const {
    (void)d;
    return false;
  }
};

/// A single symbolic expression, optionally negated (for minimization).
class ExprObjective final : public Objective {
 public:
  ExprObjective(const SymExpr& e, std::vector<const Atom*> dims, bool negate = false);
  [[nodiscard]] std::size_t dims() const override { return code_.dims().size(); }
  [[nodiscard]] Interval eval(std::span<const Interval> box) const override;

 private:
  CompiledExprs code_;
  bool negate_;
};

struct SearchBox {
  std::vector<const Atom*> atoms;
  std::vector<Interval> ranges;

  static SearchBox from_env(const std::unordered_map<const Atom*, Interval>& env);
};

struct OptConfig {
  double abs_tol = 1e-6;
  double rel_tol = 1e-3;
  std::int64_t max_boxes = 50000;
  /// Boxes narrower than this fraction of the root box in every dimension
  /// are not split again.
  double min_box_width = 1e-12;
  bool deterministic = true;
  int threads = 1;  // ignored in deterministic mode
};

struct OptResult {
  double lower = 0.0;  // attained (certified) at `argmax`
  double upper = 0.0;  // sound bound on the global maximum
  std::int64_t boxes_processed = 0;
  bool converged = false;
  std::vector<double> argmax;
};

/// Called after every processed box with the running (lower, upper).
using OptTrace = std::function<void(double lower, double upper, std::int64_t boxes)>;

OptResult maximize(const Objective& f, std::span<const Interval> box, const OptConfig& cfg,
                   const OptTrace& trace = {});
OptResult maximize(const SymExpr& e, const SearchBox& box, const OptConfig& cfg,
                   const OptTrace& trace = {});
/// `lower` is the sound bound on the minimum, `upper` the value attained at
/// `argmax` (the minimizer).
OptResult minimize(const SymExpr& e, const SearchBox& box, const OptConfig& cfg,
                   const OptTrace& trace = {});

}  // namespace fperr
