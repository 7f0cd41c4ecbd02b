#pragma once

#include <cmath>
#include <cstdint>

namespace riesz::seq {

/// Positive rational kept as a pair of doubles so that products and
/// inversions cancel exactly: (r) * (1/r) compares equal to 1 even when
/// r has no finite binary representation.  num == 0 encodes the
/// eventually-zero sentinel used for finitely supported sequences.
struct Ratio {
  double num = 1.0;
  double den = 1.0;

  static Ratio of(double r) { return {r, 1.0}; }

  double value() const { return num / den; }
  bool is_zero() const { return num == 0.0; }
  bool less_than_one() const { return num < den; }
  bool equal_one() const { return num == den; }
  bool greater_than_one() const { return num > den; }

  Ratio times(const Ratio& o) const {
    Ratio r{num * o.num, den * o.den};
    if (r.num == r.den) return {1.0, 1.0};
    return r;
  }
  Ratio inverse() const { return {den, num}; }

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.num * b.den == b.num * a.den;
  }
};

enum class Exactness {
  ExactAsymptotic,  ///< the order (r, p) is tight in both directions
  UpperBound        ///< only |s_n| <= C r^n (n+1)^p is claimed
};

/// Growth envelope |s_n| <= C * r^n * (n+1)^p.  With ExactAsymptotic the
/// order is two-sided (liminf |s_n| / (r^n (n+1)^p) > 0), which is what
/// licenses divergence verdicts.  C is a certified pointwise constant for
/// the pristine closed-form kinds; for derived sequences it tracks the
/// asymptotic scale.
struct GrowthAnnotation {
  Ratio ratio;
  double exponent = 0.0;
  double constant = 1.0;
  Exactness exactness = Exactness::ExactAsymptotic;

  bool eventually_zero() const { return ratio.is_zero(); }
  bool exact() const { return exactness == Exactness::ExactAsymptotic; }

  friend bool operator==(const GrowthAnnotation& a, const GrowthAnnotation& b) {
    return a.ratio == b.ratio && a.exponent == b.exponent &&
           a.constant == b.constant && a.exactness == b.exactness;
  }
};

}  // namespace riesz::seq
