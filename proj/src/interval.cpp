// SPDX-License-Identifier: Apache-2.0
#include "fperr/interval.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <numbers>

namespace fperr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double next_down(double x) { return std::nextafter(x, -kInf); }
double next_up(double x) { return std::nextafter(x, kInf); }

bool is_nan(const Interval& a) { return std::isnan(a.lo) || std::isnan(a.hi); }

Interval sanitize(Interval r) {
  if (std::isnan(r.lo) || std::isnan(r.hi)) return Interval::entire();
  return r;
}

// Error-free transformation checks: true when the rounded result equals the
// real result.
bool sum_exact(double a, double b, double s) {
  if (!std::isfinite(s)) return !std::isnan(s) && (std::isinf(a) || std::isinf(b));
  const double bv = s - a;
  const double av = s - bv;
  return (a - av) + (b - bv) == 0.0;
}

bool product_exact(double a, double b, double p) {
  if (!std::isfinite(p)) return !std::isnan(p) && (std::isinf(a) || std::isinf(b));
  if (p != 0.0 && std::fabs(p) < std::numeric_limits<double>::min()) return false;
  return std::fma(a, b, -p) == 0.0;
}

bool quotient_exact(double a, double b, double q) {
  if (!std::isfinite(q)) return !std::isnan(q) && std::isinf(a);
  if (q != 0.0 && std::fabs(q) < std::numeric_limits<double>::min()) return false;
  if (q == 0.0) return a == 0.0 || std::isinf(b);
  return std::fma(q, b, -a) == 0.0;
}

// 0 * inf is 0 here: an infinite endpoint stands for "unbounded", and every
// real number times zero is zero.
double mul_nan_safe(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

double mul_down(double a, double b) {
  const double p = mul_nan_safe(a, b);
  return round_down(p, p == 0.0 || product_exact(a, b, p));
}

double mul_up(double a, double b) {
  const double p = mul_nan_safe(a, b);
  return round_up(p, p == 0.0 || product_exact(a, b, p));
}

// |x|^n for x >= 0, rounded in the requested direction.
double pow_nonneg(double x, int n, bool up) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r = up ? mul_up(r, x) : mul_down(r, x);
  return r;
}

// Widen a transcendental result by two ULPs in the given direction.
double widen(double v, int ulps, bool up) {
  for (int i = 0; i < ulps; ++i) v = up ? next_up(v) : next_down(v);
  return v;
}

// True when [lo, hi] may contain a point offset + k * period for some integer
// k. Errs on the side of "yes" near the boundaries.
bool may_contain_periodic(double lo, double hi, double offset, double period) {
  const long double l = (static_cast<long double>(lo) - offset) / period;
  const long double h = (static_cast<long double>(hi) - offset) / period;
  const long double slack = 1e-9L;
  return std::floor(h + slack) >= std::ceil(l - slack);
}

}  // namespace

double round_down(double nearest, bool exact) {
  if (std::isnan(nearest)) return -kInf;
  return exact ? nearest : next_down(nearest);
}

double round_up(double nearest, bool exact) {
  if (std::isnan(nearest)) return kInf;
  return exact ? nearest : next_up(nearest);
}

double Interval::mid() const {
  if (std::isinf(lo) && std::isinf(hi)) return 0.0;
  if (std::isinf(lo)) return -std::numeric_limits<double>::max();
  if (std::isinf(hi)) return std::numeric_limits<double>::max();
  const double m = 0.5 * lo + 0.5 * hi;
  return std::clamp(m, lo, hi);
}

Interval operator+(const Interval& a, const Interval& b) {
  if (is_nan(a) || is_nan(b)) return Interval::entire();
  const double l = a.lo + b.lo;
  const double h = a.hi + b.hi;
  return sanitize({round_down(l, sum_exact(a.lo, b.lo, l)),
                   round_up(h, sum_exact(a.hi, b.hi, h))});
}

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b) {
  if (is_nan(a) || is_nan(b)) return Interval::entire();
  const std::array<double, 4> lows = {mul_down(a.lo, b.lo), mul_down(a.lo, b.hi),
                                      mul_down(a.hi, b.lo), mul_down(a.hi, b.hi)};
  const std::array<double, 4> highs = {mul_up(a.lo, b.lo), mul_up(a.lo, b.hi),
                                       mul_up(a.hi, b.lo), mul_up(a.hi, b.hi)};
  return sanitize({*std::min_element(lows.begin(), lows.end()),
                   *std::max_element(highs.begin(), highs.end())});
}

Interval operator/(const Interval& a, const Interval& b) {
  if (is_nan(a) || is_nan(b)) return Interval::entire();
  if (b.contains_zero()) {
    throw DomainSplit("division by an interval containing zero: " + to_string(b));
  }
  double lo = kInf;
  double hi = -kInf;
  for (double x : {a.lo, a.hi}) {
    for (double y : {b.lo, b.hi}) {
      const double q = (x == 0.0) ? 0.0 : x / y;
      const bool exact = x == 0.0 || quotient_exact(x, y, q);
      lo = std::min(lo, round_down(q, exact));
      hi = std::max(hi, round_up(q, exact));
    }
  }
  return sanitize({lo, hi});
}

Interval sqrt(const Interval& a) {
  if (is_nan(a)) return Interval::entire();
  if (a.hi < 0.0) throw DomainError("sqrt of a negative interval " + to_string(a));
  const double l = std::max(a.lo, 0.0);
  auto root = [](double v, bool up) {
    if (std::isinf(v)) return v;
    const double s = std::sqrt(v);
    const bool exact = std::fma(s, s, -v) == 0.0;
    return up ? round_up(s, exact) : std::max(0.0, round_down(s, exact));
  };
  return {root(l, false), root(a.hi, true)};
}

Interval exp(const Interval& a) {
  if (is_nan(a)) return Interval::entire();
  auto lower = [](double x) {
    if (x == 0.0) return 1.0;
    return std::max(0.0, widen(std::exp(x), 2, false));
  };
  auto upper = [](double x) {
    if (x == 0.0) return 1.0;
    return widen(std::exp(x), 2, true);
  };
  return {lower(a.lo), upper(a.hi)};
}

Interval log(const Interval& a) {
  if (is_nan(a)) return Interval::entire();
  if (a.hi <= 0.0) throw DomainError("log of a non-positive interval " + to_string(a));
  auto lower = [](double x) {
    if (x <= 0.0) return -kInf;
    if (x == 1.0) return 0.0;
    return widen(std::log(x), 2, false);
  };
  auto upper = [](double x) {
    if (x == 1.0) return 0.0;
    return widen(std::log(x), 2, true);
  };
  return {lower(a.lo), upper(a.hi)};
}

Interval sin(const Interval& a) {
  if (is_nan(a) || a.overflowed()) return {-1.0, 1.0};
  constexpr double kPi = std::numbers::pi;
  if (a.width() >= 2.0 * kPi) return {-1.0, 1.0};
  const double s1 = std::sin(a.lo);
  const double s2 = std::sin(a.hi);
  double lo = std::max(-1.0, widen(std::min(s1, s2), 2, false));
  double hi = std::min(1.0, widen(std::max(s1, s2), 2, true));
  if (a.lo == 0.0 && a.hi == 0.0) return {0.0, 0.0};
  if (may_contain_periodic(a.lo, a.hi, kPi / 2, 2 * kPi)) hi = 1.0;
  if (may_contain_periodic(a.lo, a.hi, -kPi / 2, 2 * kPi)) lo = -1.0;
  return {lo, hi};
}

Interval cos(const Interval& a) {
  if (is_nan(a) || a.overflowed()) return {-1.0, 1.0};
  constexpr double kPi = std::numbers::pi;
  if (a.width() >= 2.0 * kPi) return {-1.0, 1.0};
  if (a.lo == 0.0 && a.hi == 0.0) return {1.0, 1.0};
  const double c1 = std::cos(a.lo);
  const double c2 = std::cos(a.hi);
  double lo = std::max(-1.0, widen(std::min(c1, c2), 2, false));
  double hi = std::min(1.0, widen(std::max(c1, c2), 2, true));
  if (may_contain_periodic(a.lo, a.hi, 0.0, 2 * kPi)) hi = 1.0;
  if (may_contain_periodic(a.lo, a.hi, kPi, 2 * kPi)) lo = -1.0;
  return {lo, hi};
}

Interval pow(const Interval& a, int n) {
  if (is_nan(a)) return Interval::entire();
  if (n == 0) return {1.0, 1.0};
  if (n == 1) return a;
  if (n < 0) {
    const Interval p = pow(a, -n);
    return Interval{1.0} / p;
  }
  if (n % 2 == 0) {
    const double lo = pow_nonneg(mig(a), n, false);
    const double hi = pow_nonneg(mag(a), n, true);
    return {lo, hi};
  }
  auto odd_down = [n](double x) {
    return x >= 0.0 ? pow_nonneg(x, n, false) : -pow_nonneg(-x, n, true);
  };
  auto odd_up = [n](double x) {
    return x >= 0.0 ? pow_nonneg(x, n, true) : -pow_nonneg(-x, n, false);
  };
  return {odd_down(a.lo), odd_up(a.hi)};
}

double mag(const Interval& a) { return std::max(std::fabs(a.lo), std::fabs(a.hi)); }

double mig(const Interval& a) {
  if (a.contains_zero()) return 0.0;
  return std::min(std::fabs(a.lo), std::fabs(a.hi));
}

Interval abs(const Interval& a) { return {mig(a), mag(a)}; }

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval intersect(const Interval& a, const Interval& b) {
  const Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (r.lo > r.hi) throw DomainError("empty intersection");
  return r;
}

std::string to_string(const Interval& a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", a.lo, a.hi);
  return buf;
}

}  // namespace fperr
