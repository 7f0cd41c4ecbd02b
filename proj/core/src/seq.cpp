#include "riesz/seq.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "riesz/domain.hpp"

namespace riesz::seq {

ReciprocalOfZero::ReciprocalOfZero(index_t n)
    : std::runtime_error("reciprocal of exactly-zero term at index " +
                         std::to_string(n)),
      index_(n) {}

namespace detail {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct FiniteSupport {
  std::vector<cplx> values;
};
struct Geometric {
  double ratio;
  cplx scale;
};
struct PolynomialPower {
  double exponent;
  cplx scale;
};
struct SqrtIndex {};
struct Constant {
  cplx value;
};
struct Tabulated {
  std::vector<cplx> values;
  GrowthAnnotation tail;
};
struct Product {
  NodePtr a, b;
};
struct ShiftBy {
  int k;
  NodePtr a;
};
struct Conjugate {
  NodePtr a;
};
struct Reciprocal {
  NodePtr a;
};
struct Sum {
  NodePtr a, b;
};
struct Difference {
  NodePtr a, b;
};

using Expr = std::variant<FiniteSupport, Geometric, PolynomialPower, SqrtIndex,
                          Constant, Tabulated, Product, ShiftBy, Conjugate,
                          Reciprocal, Sum, Difference>;

struct Node {
  Expr expr;
  std::optional<GrowthAnnotation> annotation;
};

namespace {

bool all_zero(const std::vector<cplx>& v) {
  return std::all_of(v.begin(), v.end(), [](cplx c) { return c == cplx{}; });
}

std::optional<GrowthAnnotation> eventually_zero_annotation(double constant) {
  return GrowthAnnotation{Ratio{0.0, 1.0}, 0.0, std::max(constant, 1.0),
                          Exactness::ExactAsymptotic};
}

std::optional<GrowthAnnotation> annotate(const Expr& e) {
  return std::visit(
      [](const auto& x) -> std::optional<GrowthAnnotation> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FiniteSupport>) {
          double c = 0.0;
          for (const auto& v : x.values) c = std::max(c, std::abs(v));
          return eventually_zero_annotation(c);
        } else if constexpr (std::is_same_v<T, Geometric>) {
          if (x.scale == cplx{}) return eventually_zero_annotation(1.0);
          return GrowthAnnotation{Ratio::of(x.ratio), 0.0, std::abs(x.scale),
                                  Exactness::ExactAsymptotic};
        } else if constexpr (std::is_same_v<T, PolynomialPower>) {
          if (x.scale == cplx{}) return eventually_zero_annotation(1.0);
          return GrowthAnnotation{Ratio{1.0, 1.0}, x.exponent,
                                  std::abs(x.scale),
                                  Exactness::ExactAsymptotic};
        } else if constexpr (std::is_same_v<T, SqrtIndex>) {
          return GrowthAnnotation{Ratio{1.0, 1.0}, 0.5, 1.0,
                                  Exactness::ExactAsymptotic};
        } else if constexpr (std::is_same_v<T, Constant>) {
          if (x.value == cplx{}) return eventually_zero_annotation(1.0);
          return GrowthAnnotation{Ratio{1.0, 1.0}, 0.0, std::abs(x.value),
                                  Exactness::ExactAsymptotic};
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          return x.tail;
        } else if constexpr (std::is_same_v<T, Product>) {
          const auto& ga = x.a->annotation;
          const auto& gb = x.b->annotation;
          if (!ga || !gb) return std::nullopt;
          Exactness ex = (ga->exact() && gb->exact())
                             ? Exactness::ExactAsymptotic
                             : Exactness::UpperBound;
          return GrowthAnnotation{ga->ratio.times(gb->ratio),
                                  ga->exponent + gb->exponent,
                                  ga->constant * gb->constant, ex};
        } else if constexpr (std::is_same_v<T, ShiftBy>) {
          const auto& g = x.a->annotation;
          if (!g) return std::nullopt;
          GrowthAnnotation out = *g;
          if (!g->eventually_zero()) {
            double rk = g->ratio.equal_one()
                            ? 1.0
                            : std::pow(g->ratio.value(), double(x.k));
            out.constant = g->constant * rk *
                           std::pow(1.0 + std::abs(double(x.k)),
                                    std::abs(g->exponent));
          }
          return out;
        } else if constexpr (std::is_same_v<T, Conjugate>) {
          return x.a->annotation;
        } else if constexpr (std::is_same_v<T, Reciprocal>) {
          const auto& g = x.a->annotation;
          if (!g || !g->exact() || g->eventually_zero()) return std::nullopt;
          return GrowthAnnotation{g->ratio.inverse(), -g->exponent,
                                  1.0 / g->constant,
                                  Exactness::ExactAsymptotic};
        } else {  // Sum, Difference
          const auto& ga = x.a->annotation;
          const auto& gb = x.b->annotation;
          if (!ga || !gb) return std::nullopt;
          if (ga->eventually_zero() && gb->eventually_zero())
            return eventually_zero_annotation(ga->constant + gb->constant);
          bool a_dominates = ga->ratio.num * gb->ratio.den >=
                             gb->ratio.num * ga->ratio.den;
          Ratio r = a_dominates ? ga->ratio : gb->ratio;
          if (r.is_zero()) r = a_dominates ? gb->ratio : ga->ratio;
          return GrowthAnnotation{r, std::max(ga->exponent, gb->exponent),
                                  ga->constant + gb->constant,
                                  Exactness::UpperBound};
        }
      },
      e);
}

NodePtr make(Expr e) {
  auto ann = annotate(e);
  return std::make_shared<const Node>(Node{std::move(e), ann});
}

cplx eval_node(const Node& node, index_t n);

cplx eval_node(const NodePtr& p, index_t n) { return eval_node(*p, n); }

cplx eval_node(const Node& node, index_t n) {
  return std::visit(
      [n](const auto& x) -> cplx {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FiniteSupport>) {
          return n < index_t(x.values.size()) ? x.values[size_t(n)] : cplx{};
        } else if constexpr (std::is_same_v<T, Geometric>) {
          return x.scale * std::pow(x.ratio, double(n));
        } else if constexpr (std::is_same_v<T, PolynomialPower>) {
          return x.scale * std::pow(double(n + 1), x.exponent);
        } else if constexpr (std::is_same_v<T, SqrtIndex>) {
          return std::sqrt(double(n));
        } else if constexpr (std::is_same_v<T, Constant>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          return n < index_t(x.values.size()) ? x.values[size_t(n)] : cplx{};
        } else if constexpr (std::is_same_v<T, Product>) {
          return eval_node(x.a, n) * eval_node(x.b, n);
        } else if constexpr (std::is_same_v<T, ShiftBy>) {
          if (x.k < 0 && n < -index_t(x.k)) return cplx{};
          return eval_node(x.a, n + x.k);
        } else if constexpr (std::is_same_v<T, Conjugate>) {
          return std::conj(eval_node(x.a, n));
        } else if constexpr (std::is_same_v<T, Reciprocal>) {
          cplx v = eval_node(x.a, n);
          if (v == cplx{}) throw ReciprocalOfZero(n);
          return 1.0 / v;
        } else if constexpr (std::is_same_v<T, Sum>) {
          return eval_node(x.a, n) + eval_node(x.b, n);
        } else {
          return eval_node(x.a, n) - eval_node(x.b, n);
        }
      },
      node.expr);
}

void guard_monomials(CanonicalForm& f) {
  for (auto it = f.monomials.begin(); it != f.monomials.end();) {
    if (it->second == 0.0) {
      it = f.monomials.erase(it);
      continue;
    }
    // (n+a)^q needs n+a >= 1 for q < 0 and vanishes at n+a = 0 for q > 0;
    // raising the prefix in the latter case keeps the value unchanged and
    // makes pointwise-equal forms compare equal.
    f.zero_prefix = std::max(f.zero_prefix, 1 - index_t(it->first));
    ++it;
  }
}

CanonicalForm zero_form() { return CanonicalForm{0, cplx{}, Ratio{1.0, 1.0}, {}}; }

std::optional<CanonicalForm> canon_node(const Node& node);

std::optional<CanonicalForm> canon_node(const NodePtr& p) {
  return canon_node(*p);
}

std::optional<CanonicalForm> canon_node(const Node& node) {
  return std::visit(
      [](const auto& x) -> std::optional<CanonicalForm> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FiniteSupport> ||
                      std::is_same_v<T, Tabulated>) {
          if (all_zero(x.values)) return zero_form();
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Geometric>) {
          if (x.scale == cplx{}) return zero_form();
          return CanonicalForm{0, x.scale, Ratio::of(x.ratio), {}};
        } else if constexpr (std::is_same_v<T, PolynomialPower>) {
          if (x.scale == cplx{}) return zero_form();
          CanonicalForm f{0, x.scale, Ratio{1.0, 1.0}, {}};
          if (x.exponent != 0.0) f.monomials[1] = x.exponent;
          guard_monomials(f);
          return f;
        } else if constexpr (std::is_same_v<T, SqrtIndex>) {
          return CanonicalForm{0, 1.0, Ratio{1.0, 1.0}, {{0, 0.5}}};
        } else if constexpr (std::is_same_v<T, Constant>) {
          if (x.value == cplx{}) return zero_form();
          return CanonicalForm{0, x.value, Ratio{1.0, 1.0}, {}};
        } else if constexpr (std::is_same_v<T, Product>) {
          auto fa = canon_node(x.a);
          auto fb = canon_node(x.b);
          if (!fa || !fb) return std::nullopt;
          if (fa->scalar == cplx{} || fb->scalar == cplx{}) return zero_form();
          CanonicalForm f;
          f.zero_prefix = std::max(fa->zero_prefix, fb->zero_prefix);
          f.scalar = fa->scalar * fb->scalar;
          f.ratio = fa->ratio.times(fb->ratio);
          f.monomials = fa->monomials;
          for (const auto& [a, q] : fb->monomials) f.monomials[a] += q;
          guard_monomials(f);
          return f;
        } else if constexpr (std::is_same_v<T, ShiftBy>) {
          auto fa = canon_node(x.a);
          if (!fa) return std::nullopt;
          if (fa->scalar == cplx{}) return zero_form();
          CanonicalForm f;
          f.zero_prefix = std::max<index_t>(
              0, std::max(fa->zero_prefix - x.k, index_t(-x.k)));
          double rk = fa->ratio.equal_one()
                          ? 1.0
                          : std::pow(fa->ratio.value(), double(x.k));
          f.scalar = fa->scalar * rk;
          f.ratio = fa->ratio;
          for (const auto& [a, q] : fa->monomials) f.monomials[a + x.k] += q;
          guard_monomials(f);
          return f;
        } else if constexpr (std::is_same_v<T, Conjugate>) {
          auto fa = canon_node(x.a);
          if (!fa) return std::nullopt;
          fa->scalar = std::conj(fa->scalar);
          return fa;
        } else if constexpr (std::is_same_v<T, Reciprocal>) {
          auto fa = canon_node(x.a);
          if (!fa) return std::nullopt;
          if (fa->zero_prefix > 0 || fa->scalar == cplx{}) return std::nullopt;
          CanonicalForm f;
          f.scalar = 1.0 / fa->scalar;
          f.ratio = fa->ratio.inverse();
          for (const auto& [a, q] : fa->monomials) f.monomials[a] = -q;
          guard_monomials(f);
          return f;
        } else {
          return std::nullopt;  // Sum, Difference
        }
      },
      node.expr);
}

}  // namespace
}  // namespace detail

using detail::make;
using detail::Node;
using detail::NodePtr;

cplx CanonicalForm::value_at(index_t n) const {
  if (n < zero_prefix) return cplx{};
  cplx v = scalar;
  if (!ratio.equal_one()) v *= std::pow(ratio.value(), double(n));
  for (const auto& [a, q] : monomials) v *= std::pow(double(n + a), q);
  return v;
}

Sequence::Sequence(NodePtr node) : node_(std::move(node)) {}

Sequence Sequence::finite_support(std::vector<cplx> values) {
  return Sequence(make(detail::FiniteSupport{std::move(values)}));
}

Sequence Sequence::geometric(double ratio, cplx scale) {
  if (!(ratio > 0.0))
    throw std::invalid_argument("geometric sequence needs ratio > 0");
  return Sequence(make(detail::Geometric{ratio, scale}));
}

Sequence Sequence::polynomial_power(double exponent, cplx scale) {
  return Sequence(make(detail::PolynomialPower{exponent, scale}));
}

Sequence Sequence::sqrt_index() {
  return Sequence(make(detail::SqrtIndex{}));
}

Sequence Sequence::constant(cplx value) {
  return Sequence(make(detail::Constant{value}));
}

Sequence Sequence::tabulated(std::vector<cplx> values, GrowthAnnotation tail) {
  return Sequence(make(detail::Tabulated{std::move(values), tail}));
}

cplx Sequence::eval(index_t n) const {
  if (n < 0) throw std::invalid_argument("sequence index must be >= 0");
  return detail::eval_node(*node_, n);
}

std::optional<GrowthAnnotation> Sequence::growth() const {
  return node_->annotation;
}

std::optional<CanonicalForm> Sequence::canonical() const {
  return detail::canon_node(*node_);
}

bool Sequence::is_zero() const {
  if (const auto* c = std::get_if<detail::Constant>(&node_->expr))
    return c->value == cplx{};
  if (const auto* f = std::get_if<detail::FiniteSupport>(&node_->expr))
    return detail::all_zero(f->values);
  auto cf = canonical();
  return cf && cf->scalar == cplx{};
}

Sequence product(const Sequence& a, const Sequence& b) {
  using namespace detail;
  const Expr& ea = a.node_->expr;
  const Expr& eb = b.node_->expr;

  auto scale_of = [](const Expr& e) -> std::optional<cplx> {
    if (const auto* c = std::get_if<Constant>(&e)) return c->value;
    return std::nullopt;
  };

  if (auto ca = scale_of(ea)) {
    if (auto cb = scale_of(eb)) return Sequence::constant(*ca * *cb);
    if (const auto* g = std::get_if<Geometric>(&eb))
      return Sequence::geometric(g->ratio, *ca * g->scale);
    if (const auto* p = std::get_if<PolynomialPower>(&eb))
      return Sequence::polynomial_power(p->exponent, *ca * p->scale);
  }
  if (auto cb = scale_of(eb)) {
    if (const auto* g = std::get_if<Geometric>(&ea))
      return Sequence::geometric(g->ratio, *cb * g->scale);
    if (const auto* p = std::get_if<PolynomialPower>(&ea))
      return Sequence::polynomial_power(p->exponent, *cb * p->scale);
  }
  if (const auto* ga = std::get_if<Geometric>(&ea)) {
    if (const auto* gb = std::get_if<Geometric>(&eb))
      return Sequence::geometric(ga->ratio * gb->ratio, ga->scale * gb->scale);
  }
  if (const auto* pa = std::get_if<PolynomialPower>(&ea)) {
    if (const auto* pb = std::get_if<PolynomialPower>(&eb))
      return Sequence::polynomial_power(pa->exponent + pb->exponent,
                                        pa->scale * pb->scale);
  }
  if (const auto* fa = std::get_if<FiniteSupport>(&ea)) {
    if (const auto* fb = std::get_if<FiniteSupport>(&eb)) {
      size_t n = std::min(fa->values.size(), fb->values.size());
      std::vector<cplx> v(n);
      for (size_t i = 0; i < n; ++i) v[i] = fa->values[i] * fb->values[i];
      return Sequence::finite_support(std::move(v));
    }
  }
  return Sequence(make(Product{a.node_, b.node_}));
}

Sequence shift_by(int k, const Sequence& a) {
  using namespace detail;
  if (k == 0) return a;
  const Expr& e = a.node_->expr;

  if (const auto* f = std::get_if<FiniteSupport>(&e)) {
    std::vector<cplx> v;
    if (k > 0) {
      if (size_t(k) < f->values.size())
        v.assign(f->values.begin() + k, f->values.end());
    } else {
      v.assign(size_t(-k), cplx{});
      v.insert(v.end(), f->values.begin(), f->values.end());
    }
    return Sequence::finite_support(std::move(v));
  }
  if (k > 0) {
    if (const auto* g = std::get_if<Geometric>(&e))
      return Sequence::geometric(g->ratio,
                                 g->scale * std::pow(g->ratio, double(k)));
    if (std::holds_alternative<Constant>(e)) return a;
    if (const auto* t = std::get_if<Tabulated>(&e)) {
      std::vector<cplx> v;
      if (size_t(k) < t->values.size())
        v.assign(t->values.begin() + k, t->values.end());
      GrowthAnnotation tail = t->tail;
      if (!tail.eventually_zero()) {
        double rk = tail.ratio.equal_one()
                        ? 1.0
                        : std::pow(tail.ratio.value(), double(k));
        tail.constant *= rk * std::pow(1.0 + k, std::abs(tail.exponent));
      }
      return Sequence::tabulated(std::move(v), tail);
    }
  }
  if (const auto* s = std::get_if<ShiftBy>(&e)) {
    if (!(s->k > 0 && k < 0)) {
      int kk = s->k + k;
      Sequence inner(s->a);
      return kk == 0 ? inner : Sequence(make(ShiftBy{kk, s->a}));
    }
  }
  return Sequence(make(ShiftBy{k, a.node_}));
}

Sequence conjugate(const Sequence& a) {
  using namespace detail;
  const Expr& e = a.node_->expr;
  if (const auto* f = std::get_if<FiniteSupport>(&e)) {
    std::vector<cplx> v(f->values.size());
    std::transform(f->values.begin(), f->values.end(), v.begin(),
                   [](cplx c) { return std::conj(c); });
    return Sequence::finite_support(std::move(v));
  }
  if (const auto* g = std::get_if<Geometric>(&e))
    return Sequence::geometric(g->ratio, std::conj(g->scale));
  if (const auto* p = std::get_if<PolynomialPower>(&e))
    return Sequence::polynomial_power(p->exponent, std::conj(p->scale));
  if (std::holds_alternative<SqrtIndex>(e)) return a;
  if (const auto* c = std::get_if<Constant>(&e))
    return Sequence::constant(std::conj(c->value));
  if (const auto* t = std::get_if<Tabulated>(&e)) {
    std::vector<cplx> v(t->values.size());
    std::transform(t->values.begin(), t->values.end(), v.begin(),
                   [](cplx c) { return std::conj(c); });
    return Sequence::tabulated(std::move(v), t->tail);
  }
  if (const auto* cj = std::get_if<Conjugate>(&e)) return Sequence(cj->a);
  return Sequence(make(Conjugate{a.node_}));
}

Sequence reciprocal(const Sequence& a) {
  using namespace detail;
  const Expr& e = a.node_->expr;
  if (const auto* g = std::get_if<Geometric>(&e)) {
    double inv = 1.0 / g->ratio;
    if (1.0 / inv == g->ratio && g->scale != cplx{})
      return Sequence::geometric(inv, 1.0 / g->scale);
  }
  if (const auto* c = std::get_if<Constant>(&e)) {
    if (c->value != cplx{}) return Sequence::constant(1.0 / c->value);
  }
  if (const auto* p = std::get_if<PolynomialPower>(&e)) {
    if (p->scale != cplx{})
      return Sequence::polynomial_power(-p->exponent, 1.0 / p->scale);
  }
  if (const auto* r = std::get_if<Reciprocal>(&e)) return Sequence(r->a);
  return Sequence(make(Reciprocal{a.node_}));
}

Sequence sum(const Sequence& a, const Sequence& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Sequence(detail::make(detail::Sum{a.node_, b.node_}));
}

Sequence difference(const Sequence& a, const Sequence& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return product(Sequence::constant(-1.0), b);
  return Sequence(detail::make(detail::Difference{a.node_, b.node_}));
}

std::optional<GrowthAnnotation> growth_of(const Sequence& s) {
  return s.growth();
}

bool symbolically_equal(const Sequence& a, const Sequence& b) {
  auto fa = a.canonical();
  auto fb = b.canonical();
  return fa && fb && *fa == *fb;
}

namespace {

// Expands scalar * prod (n+a)^q into polynomial coefficients in n, when all
// exponents are small nonnegative integers.
std::optional<std::vector<cplx>> expand_poly(const CanonicalForm& f) {
  std::vector<cplx> coeffs{f.scalar};
  double total = 0.0;
  for (const auto& [a, q] : f.monomials) {
    if (q < 0.0 || q != std::floor(q)) return std::nullopt;
    total += q;
    if (total > 16.0) return std::nullopt;
    for (int rep = 0; rep < int(q); ++rep) {
      std::vector<cplx> next(coeffs.size() + 1, cplx{});
      for (size_t i = 0; i < coeffs.size(); ++i) {
        next[i] += coeffs[i] * double(a);
        next[i + 1] += coeffs[i];
      }
      coeffs = std::move(next);
    }
  }
  return coeffs;
}

}  // namespace

std::optional<Sequence> simplify_difference(const Sequence& a,
                                            const Sequence& b) {
  auto fa = a.canonical();
  auto fb = b.canonical();
  if (!fa || !fb) return std::nullopt;
  if (*fa == *fb) return Sequence::constant(0.0);
  if (!(fa->ratio == fb->ratio)) return std::nullopt;

  auto pa = expand_poly(*fa);
  auto pb = expand_poly(*fb);
  if (!pa || !pb) return std::nullopt;

  index_t zm = std::max(fa->zero_prefix, fb->zero_prefix);
  std::vector<cplx> prefix(static_cast<std::size_t>(zm));
  for (index_t n = 0; n < zm; ++n)
    prefix[size_t(n)] = fa->value_at(n) - fb->value_at(n);

  std::vector<cplx> coeffs(std::max(pa->size(), pb->size()), cplx{});
  for (size_t i = 0; i < pa->size(); ++i) coeffs[i] += (*pa)[i];
  for (size_t i = 0; i < pb->size(); ++i) coeffs[i] -= (*pb)[i];
  while (!coeffs.empty() && coeffs.back() == cplx{}) coeffs.pop_back();

  if (coeffs.empty()) {
    while (!prefix.empty() && prefix.back() == cplx{}) prefix.pop_back();
    return Sequence::finite_support(std::move(prefix));
  }
  if (coeffs.size() == 1) {
    cplx c = coeffs[0];
    if (fa->ratio.equal_one()) {
      bool flat = std::all_of(prefix.begin(), prefix.end(),
                              [&](cplx v) { return v == c; });
      if (flat) return Sequence::constant(c);
    } else {
      double r = fa->ratio.value();
      bool geo = true;
      for (index_t n = 0; n < zm; ++n)
        geo = geo && prefix[size_t(n)] == c * std::pow(r, double(n));
      if (geo) return Sequence::geometric(r, c);
    }
  }
  return std::nullopt;
}

Verdict l2_summable(const Sequence& s) {
  if (auto g = s.growth()) return domain::classify_annotation(*g);
  return domain::probe_l2(s);
}

}  // namespace riesz::seq
