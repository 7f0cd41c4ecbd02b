#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "riesz/growth.hpp"
#include "riesz/verdict.hpp"

namespace riesz::seq {

using cplx = std::complex<double>;
using index_t = std::int64_t;

/// Raised lazily when a reciprocal sequence is evaluated at an index where
/// the underlying term is exactly zero.
class ReciprocalOfZero : public std::runtime_error {
 public:
  explicit ReciprocalOfZero(index_t n);
  index_t index() const { return index_; }

 private:
  index_t index_;
};

/// Canonical monomial form for the closed-form fragment of the sequence
/// algebra:
///
///   s(n) = 0                                   for n < zero_prefix
///   s(n) = scalar * ratio^n * prod (n+a)^q     for n >= zero_prefix
///
/// Two sequences built from the same vocabulary compare equal exactly when
/// their canonical forms match field-for-field; shared factors such as
/// t_n / t_n cancel during construction, so the comparison is exact.
struct CanonicalForm {
  index_t zero_prefix = 0;
  cplx scalar = 1.0;
  Ratio ratio = {1.0, 1.0};
  std::map<int, double> monomials;  // offset a -> exponent q

  cplx value_at(index_t n) const;
  friend bool operator==(const CanonicalForm& x, const CanonicalForm& y) {
    return x.zero_prefix == y.zero_prefix && x.scalar == y.scalar &&
           x.ratio == y.ratio && x.monomials == y.monomials;
  }
};

namespace detail {
struct Node;
}

/// Immutable complex coefficient sequence over n = 0, 1, 2, ...
///
/// Construction vocabulary:
///  - finite_support(values)          explicit prefix, exact zero tail
///  - geometric(r, c)                 c * r^n, r > 0
///  - polynomial_power(p, c)          c * (n+1)^p
///  - sqrt_index()                    sqrt(n), 0 at n = 0
///  - constant(c)
///  - tabulated(values, tail)         explicit prefix plus a declared tail
///                                    annotation that drives summability
///                                    verdicts; eval beyond the list is 0
///
/// combined with product / shift_by / conjugate / reciprocal (and an
/// internal difference used by operator band arithmetic).  Every closed
/// form carries an exact growth annotation and the combinators compose
/// annotations (ratios multiply, exponents add, shifts preserve the order,
/// reciprocal inverts it for exact inputs).
class Sequence {
 public:
  static Sequence finite_support(std::vector<cplx> values);
  static Sequence geometric(double ratio, cplx scale = 1.0);
  static Sequence polynomial_power(double exponent, cplx scale = 1.0);
  static Sequence sqrt_index();
  static Sequence constant(cplx value);
  static Sequence tabulated(std::vector<cplx> values, GrowthAnnotation tail);

  /// n-th coefficient; total for n >= 0 apart from lazy reciprocal-of-zero.
  cplx eval(index_t n) const;

  std::optional<GrowthAnnotation> growth() const;
  std::optional<CanonicalForm> canonical() const;

  bool is_zero() const;

  friend Sequence product(const Sequence& a, const Sequence& b);
  friend Sequence shift_by(int k, const Sequence& a);
  friend Sequence conjugate(const Sequence& a);
  friend Sequence reciprocal(const Sequence& a);
  friend Sequence sum(const Sequence& a, const Sequence& b);
  friend Sequence difference(const Sequence& a, const Sequence& b);

 private:
  explicit Sequence(std::shared_ptr<const detail::Node> node);
  std::shared_ptr<const detail::Node> node_;
};

Sequence product(const Sequence& a, const Sequence& b);
Sequence shift_by(int k, const Sequence& a);
Sequence conjugate(const Sequence& a);
Sequence reciprocal(const Sequence& a);
Sequence sum(const Sequence& a, const Sequence& b);
Sequence difference(const Sequence& a, const Sequence& b);

std::optional<GrowthAnnotation> growth_of(const Sequence& s);

/// True when both sides reduce to the same canonical form.
bool symbolically_equal(const Sequence& a, const Sequence& b);

/// Attempts to fold a - b into a closed form (constant, finite support or
/// geometric).  Returns nullopt when the difference stays symbolic.
std::optional<Sequence> simplify_difference(const Sequence& a, const Sequence& b);

/// Summability of sum |s_n|^2: the annotation rule when an annotation is
/// present, the numeric probe otherwise.
Verdict l2_summable(const Sequence& s);

}  // namespace riesz::seq
