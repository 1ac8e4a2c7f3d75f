// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#include "fperr/optimizer.hpp"
#include "fperr/symbolic.hpp"

using namespace fperr;

namespace {

struct Fixture {
  SymContext ctx;
  const Atom* x = ctx.var("x");
  SymExpr X = SymExpr::atom(x);
};

}  // namespace

TEST(Optimizer, SquareOnSymmetricBox) {
  Fixture f;
  const SymExpr e = f.ctx.mul(f.X, f.X);
  const SearchBox box{{f.x}, {Interval{-1, 1}}};
  const OptConfig cfg;
  const OptResult r = maximize(e, box, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.upper, 1.0);
  EXPECT_LE(r.upper, 1.0 + cfg.rel_tol);
  EXPECT_GE(r.lower, 1.0 - cfg.rel_tol);
  EXPECT_LE(r.lower, r.upper);

  const OptResult m = minimize(e, box, cfg);
  EXPECT_LE(m.lower, 0.0);
  EXPECT_GE(m.lower, -cfg.abs_tol);
  EXPECT_LE(m.upper, cfg.abs_tol);
}

TEST(Optimizer, LogisticPeak) {
  Fixture f;
  const SymExpr e = f.ctx.mul(f.X, f.ctx.sub(SymExpr::constant(1.0), f.X));
  const OptConfig cfg;
  const OptResult r = maximize(e, SearchBox{{f.x}, {Interval{0, 1}}}, cfg);
  // x(1-x) peaks at x = 1/2 with value 1/4.
  EXPECT_GE(r.upper, 0.25);
  EXPECT_LE(r.upper, 0.25 + std::max(cfg.abs_tol, cfg.rel_tol * 0.25));
  EXPECT_GE(r.lower, 0.25 - std::max(cfg.abs_tol, cfg.rel_tol * 0.25));
}

TEST(Optimizer, MinimizeLinearAndSine) {
  Fixture f;
  const OptConfig cfg;
  const OptResult lin = minimize(f.X, SearchBox{{f.x}, {Interval{2, 3}}}, cfg);
  EXPECT_EQ(lin.lower, 2.0);
  EXPECT_EQ(lin.upper, 2.0);

  const SymExpr s = f.ctx.apply(OpaqueFn::sin, f.X);
  const OptResult r = minimize(s, SearchBox{{f.x}, {Interval{0, std::numbers::pi}}}, cfg);
  // sin is nonnegative on [0, pi] with zeros at both endpoints; pi is
  // rounded down, so sin(fl(pi)) ~ 1.2e-16 > 0.
  EXPECT_LE(r.lower, 0.0);
  EXPECT_GE(r.lower, -cfg.abs_tol);
  EXPECT_LE(r.upper, cfg.abs_tol);
  EXPECT_GE(r.upper, 0.0);
}

TEST(Optimizer, DegenerateBoxIsExact) {
  Fixture f;
  const SymExpr e = f.ctx.mul(f.X, f.X);
  const OptResult r = maximize(e, SearchBox{{f.x}, {Interval{3}}}, OptConfig{});
  EXPECT_EQ(r.upper, 9.0);
  EXPECT_EQ(r.lower, 9.0);
  EXPECT_TRUE(r.converged);
}

TEST(Optimizer, DivisionAcrossZeroIsSplitNotDropped) {
  // 1/(x^2 + 1) over [-1, 1]: the divisor never vanishes but is built
  // through an opaque reciprocal; the maximum 1 sits at x = 0.
  Fixture f;
  const SymExpr e = f.ctx.div(SymExpr::constant(1.0),
                              f.ctx.add(f.ctx.mul(f.X, f.X), SymExpr::constant(1.0)));
  const OptResult r = maximize(e, SearchBox{{f.x}, {Interval{-1, 1}}}, OptConfig{});
  EXPECT_GE(r.upper, 1.0);
  EXPECT_LE(r.upper, 1.001);
}

TEST(Optimizer, PoleKeepsInfiniteUpperBound) {
  // 1/x on [-1, 1] is unbounded; the optimizer must never report a finite
  // upper bound for it.
  Fixture f;
  const SymExpr e = f.ctx.div(SymExpr::constant(1.0), f.X);
  OptConfig cfg;
  cfg.max_boxes = 2000;
  const OptResult r = maximize(e, SearchBox{{f.x}, {Interval{-1, 1}}}, cfg);
  EXPECT_GE(r.upper, 1e12);
  EXPECT_FALSE(r.converged);
}

namespace {

// Random polynomial in up to 3 variables with integer coefficients.
SymExpr random_poly(SymContext& ctx, std::mt19937_64& rng, const std::vector<const Atom*>& v) {
  std::uniform_int_distribution<int> nterms(1, 6), coef(-9, 9), pw(0, 4);
  SymExpr acc;
  const int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    SymExpr m = SymExpr::constant(static_cast<double>(coef(rng)));
    for (const Atom* a : v) m = ctx.mul(m, ctx.pow(SymExpr::atom(a), pw(rng)));
    acc = ctx.add(acc, m);
  }
  return acc;
}

double eval_point(const SymExpr& e, const std::vector<const Atom*>& v,
                  const std::vector<double>& p) {
  double sum = 0.0;
  for (const Term& t : e.terms()) {
    double m = t.coef.get_d();
    for (const Factor& fa : t.key) {
      const auto it = std::find(v.begin(), v.end(), fa.atom);
      m *= std::pow(p[it - v.begin()], fa.power);
    }
    sum += m;
  }
  return sum;
}

}  // namespace

TEST(Optimizer, SoundnessOnRandomPolynomials) {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> lo(-3.0, 2.0), wid(0.0, 3.0), unit(0.0, 1.0);
  int violations = 0;
  for (int k = 0; k < 200; ++k) {
    SymContext ctx;
    std::vector<const Atom*> vars = {ctx.var("a"), ctx.var("b"), ctx.var("c")};
    vars.resize(1 + k % 3);
    const SymExpr e = random_poly(ctx, rng, vars);
    SearchBox box;
    for (const Atom* a : free_atoms(std::span<const SymExpr>(&e, 1))) {
      const double l = lo(rng);
      box.atoms.push_back(a);
      box.ranges.push_back(Interval{l, l + wid(rng)});
    }
    OptConfig cfg;
    cfg.max_boxes = 5000;
    const OptResult r = maximize(e, box, cfg);
    ASSERT_LE(r.lower, r.upper);
    double best = -INFINITY;
    std::vector<double> p(vars.size(), 0.0);
    for (int s = 0; s < 100000; ++s) {
      for (std::size_t i = 0; i < box.atoms.size(); ++i) {
        const auto it = std::find(vars.begin(), vars.end(), box.atoms[i]);
        p[it - vars.begin()] = box.ranges[i].lo + unit(rng) * box.ranges[i].width();
      }
      best = std::max(best, eval_point(e, vars, p));
    }
    // Sampled values carry their own rounding; allow a few ulps of the value.
    const double slack = 64 * std::numeric_limits<double>::epsilon() * (1 + std::fabs(best));
    if (r.upper + slack < best) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(Optimizer, MonotoneRefinement) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    SymContext ctx;
    const std::vector<const Atom*> vars = {ctx.var("a"), ctx.var("b")};
    const SymExpr e = random_poly(ctx, rng, vars);
    const auto dims = free_atoms(std::span<const SymExpr>(&e, 1));
    SearchBox box{dims, std::vector<Interval>(dims.size(), Interval{-2, 1.5})};
    double last_lo = -INFINITY, last_up = INFINITY;
    bool ok = true;
    OptConfig cfg;
    cfg.max_boxes = 3000;
    maximize(e, box, cfg, [&](double lo, double up, std::int64_t) {
      ok = ok && lo >= last_lo && up <= last_up;
      last_lo = lo;
      last_up = up;
    });
    EXPECT_TRUE(ok) << to_string(e);
  }
}

TEST(Optimizer, DeterministicAcrossRunsAndThreadCounts) {
  SymContext ctx;
  const Atom* a = ctx.var("a");
  const Atom* b = ctx.var("b");
  const SymExpr A = SymExpr::atom(a), B = SymExpr::atom(b);
  // sin(a*b) + a^2 - b: several local maxima.
  const SymExpr e =
      ctx.sub(ctx.add(ctx.apply(OpaqueFn::sin, ctx.mul(A, B)), ctx.mul(A, A)), B);
  const SearchBox box{{a, b}, {Interval{-3, 3}, Interval{-3, 3}}};
  OptConfig cfg;
  cfg.rel_tol = 1e-9;
  cfg.abs_tol = 1e-12;
  cfg.max_boxes = 4000;
  const OptResult r1 = maximize(e, box, cfg);
  cfg.threads = 4;
  const OptResult r2 = maximize(e, box, cfg);
  EXPECT_EQ(r1.upper, r2.upper);
  EXPECT_EQ(r1.lower, r2.lower);
  EXPECT_EQ(r1.boxes_processed, r2.boxes_processed);
  EXPECT_EQ(r1.argmax, r2.argmax);

  // Free-running workers agree on soundness, not on the trajectory.
  cfg.deterministic = false;
  const OptResult r3 = maximize(e, box, cfg);
  EXPECT_GE(r3.upper, r1.lower);
  EXPECT_LE(r3.lower, r1.upper);
}

namespace {

// |x - y| + (x + y)^2 / 4 on a box: convex in x, y treated as general.
// Records every x interval it is asked about.
class FaceProbe final : public Objective {
 public:
  std::size_t dims() const override { return 2; }
  bool vertex_dim(std::size_t d) const override { return d == 0; }
  Interval eval(std::span<const Interval> b) const override {
    {
      std::lock_guard lk(mu_);
      seen_.push_back(b[0]);
    }
    const Interval s = b[0] + b[1];
    return abs(b[0] - b[1]) + s * s * Interval{0.25};
  }
  std::vector<Interval> seen() const { return seen_; }

 private:
  mutable std::mutex mu_;
  mutable std::vector<Interval> seen_;
};

}  // namespace

TEST(Optimizer, ConvexDimensionSplitsIntoFaces) {
  const FaceProbe f;
  const std::vector<Interval> box{Interval{-1.0, 2.0}, Interval{-0.5, 0.5}};
  OptConfig cfg;
  cfg.rel_tol = 1e-6;
  const OptResult r = maximize(f, box, cfg);
  // Max at x = 2: |2 - y| + (2 + y)^2 / 4, largest at y = 0.5 (1.5 + 1.5625).
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.upper, 3.0625);
  EXPECT_LE(r.upper, 3.0625 * (1 + 1e-5));
  for (const Interval& x : f.seen()) {
    // the whole range, a face, or a probe point: never a half
    const bool whole = x.lo == -1.0 && x.hi == 2.0;
    EXPECT_TRUE(whole || x.lo == x.hi) << "[" << x.lo << ", " << x.hi << "]";
  }
}
