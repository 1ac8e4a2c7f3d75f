// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fperr {

/// Thrown when an interval operation is undefined on the whole argument
/// (sqrt/log of a strictly negative interval, 0/0, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by division when the divisor interval contains zero. Callers that
/// can bisect (the optimizer) treat it as "split further".
class DomainSplit : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Closed binary64 interval [lo, hi]. Endpoints may be infinite, which is how
/// overflow is represented; NaN endpoints never escape an operation.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double point) : lo(point), hi(point) {}  // NOLINT
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  static constexpr Interval entire() {
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }

  [[nodiscard]] bool is_point() const { return lo == hi; }
  [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
  [[nodiscard]] bool contains(const Interval& o) const {
    return lo <= o.lo && o.hi <= hi;
  }
  [[nodiscard]] bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  [[nodiscard]] bool overflowed() const {
    return std::isinf(lo) || std::isinf(hi);
  }
  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double mid() const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Arithmetic with outward rounding. Every endpoint that is not exactly
// representable is stepped one ULP away from the enclosed set.
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

Interval sqrt(const Interval& a);
Interval exp(const Interval& a);
Interval log(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);

/// Dependency-aware integer power. Negative exponents go through 1/a^|n|.
Interval pow(const Interval& a, int n);

/// max(|lo|, |hi|)
double mag(const Interval& a);
/// min |x| over the interval (0 when it straddles zero).
double mig(const Interval& a);
Interval abs(const Interval& a);
Interval hull(const Interval& a, const Interval& b);
/// Empty intersections throw DomainError.
Interval intersect(const Interval& a, const Interval& b);

/// Round-to-nearest result widened outward by one ULP unless exact.
double round_down(double nearest, bool exact);
double round_up(double nearest, bool exact);

std::string to_string(const Interval& a);

}  // namespace fperr
