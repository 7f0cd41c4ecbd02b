#include "riesz/operator_core.hpp"

#include <cmath>

namespace riesz::ops {

namespace {

Sequence band_weight(CoreKind kind, const Sequence& alpha,
                     const Sequence& scale_weights) {
  using seq::product;
  using seq::reciprocal;
  using seq::shift_by;
  switch (kind) {
    case CoreKind::Diagonal:
      // t_n * alpha_n / t_n: the scale cancels identically.
      return alpha;
    case CoreKind::LowerShift:
      // w(n) = alpha_{n+1} t_n / t_{n+1}
      return product(product(shift_by(1, alpha), scale_weights),
                     reciprocal(shift_by(1, scale_weights)));
    case CoreKind::RaiseShift: {
      // w(n) = alpha_n t_n / t_{n-1} for n >= 1, w(0) = 0
      auto u = product(product(shift_by(1, alpha), shift_by(1, scale_weights)),
                       reciprocal(scale_weights));
      return shift_by(-1, u);
    }
  }
  throw std::logic_error("unreachable core kind");
}

int band_offset(CoreKind kind) {
  switch (kind) {
    case CoreKind::Diagonal: return 0;
    case CoreKind::LowerShift: return 1;
    case CoreKind::RaiseShift: return -1;
  }
  throw std::logic_error("unreachable core kind");
}

}  // namespace

ScaleOperator::ScaleOperator(Sequence weights) : weights_(std::move(weights)) {
  auto g = weights_.growth();
  if (!g || !g->exact() || g->eventually_zero())
    throw std::invalid_argument(
        "scale weights need a two-sided growth annotation");
  for (index_t n = 0; n < 64; ++n) {
    cplx v = weights_.eval(n);
    if (!(v.real() > 0.0) || v.imag() != 0.0)
      throw std::invalid_argument(
          "scale weights must be strictly positive reals");
  }
}

double ScaleOperator::weight(index_t n) const {
  return weights_.eval(n).real();
}

namespace {
bool annotation_bounded(const seq::GrowthAnnotation& g) {
  return g.ratio.less_than_one() ||
         (g.ratio.equal_one() && g.exponent <= 0.0);
}
}  // namespace

bool ScaleOperator::forward_bounded() const {
  return annotation_bounded(*weights_.growth());
}

bool ScaleOperator::inverse_bounded() const {
  auto g = inverse_weights().growth();
  return g && annotation_bounded(*g);
}

bool ScaleOperator::same_as(const ScaleOperator& other) const {
  if (seq::symbolically_equal(weights_, other.weights_)) return true;
  auto ga = weights_.growth();
  auto gb = other.weights_.growth();
  if (!(ga && gb && *ga == *gb)) return false;
  for (index_t n = 0; n < 64; ++n)
    if (weights_.eval(n) != other.weights_.eval(n)) return false;
  return true;
}

OperatorSpec::OperatorSpec(ScaleOperator scale, bool dagger, Form form,
                           std::vector<std::vector<CoreTerm>> chains,
                           std::map<int, Sequence> bands)
    : scale_(std::move(scale)),
      dagger_(dagger),
      form_(form),
      chains_(std::move(chains)),
      bands_(std::move(bands)) {}

Sequence OperatorSpec::effective_scale_weights() const {
  return dagger_ ? scale_.inverse_weights() : scale_.weights();
}

Vector Vector::from_values(std::vector<cplx> values) {
  return Vector{Sequence::finite_support(std::move(values))};
}

Vector Vector::basis(index_t n, cplx scale) {
  std::vector<cplx> v(static_cast<std::size_t>(n) + 1, cplx{});
  v[size_t(n)] = scale;
  return Vector{Sequence::finite_support(std::move(v))};
}

OperatorSpec make_operator(CoreKind core, Sequence alpha, ScaleOperator scale,
                           Form form, bool dagger) {
  CoreKind eff_kind = core;
  Sequence eff_alpha = alpha;
  if (dagger) {
    eff_alpha = seq::conjugate(alpha);
    if (core == CoreKind::LowerShift)
      eff_kind = CoreKind::RaiseShift;
    else if (core == CoreKind::RaiseShift)
      eff_kind = CoreKind::LowerShift;
  }
  Sequence s = dagger ? scale.inverse_weights() : scale.weights();
  std::map<int, Sequence> bands;
  bands.emplace(band_offset(eff_kind), band_weight(eff_kind, eff_alpha, s));
  return OperatorSpec(std::move(scale), dagger, form,
                      {{CoreTerm{eff_kind, eff_alpha}}}, std::move(bands));
}

std::vector<cplx> apply(const OperatorSpec& op, const Vector& xi,
                        index_t n_out) {
  std::vector<cplx> out(static_cast<std::size_t>(n_out), cplx{});
  for (const auto& [d, w] : op.bands()) {
    for (index_t m = 0; m < n_out; ++m) {
      index_t src = m + d;
      if (src < 0) continue;
      cplx weight = w.eval(m);
      if (weight == cplx{}) continue;
      out[size_t(m)] += weight * xi.coeffs.eval(src);
    }
  }
  return out;
}

std::pair<Vector, Vector> basis_vectors(const ScaleOperator& scale,
                                        index_t n) {
  double t = scale.weight(n);
  return {Vector::basis(n, t), Vector::basis(n, 1.0 / t)};
}

cplx inner(const Vector& x, const Vector& y, index_t depth) {
  cplx acc{};
  for (index_t n = 0; n < depth; ++n)
    acc += x.coeffs.eval(n) * std::conj(y.coeffs.eval(n));
  return acc;
}

double biorthogonality_check(const ScaleOperator& scale, index_t count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  std::vector<Vector> phis, psis;
  phis.reserve(size_t(count));
  psis.reserve(size_t(count));
  for (index_t n = 0; n < count; ++n) {
    auto [phi, psi] = basis_vectors(scale, n);
    phis.push_back(std::move(phi));
    psis.push_back(std::move(psi));
  }
  double worst = 0.0;
  for (index_t n = 0; n < count; ++n)
    for (index_t m = 0; m < count; ++m) {
      cplx g = inner(phis[size_t(n)], psis[size_t(m)], count);
      double target = (n == m) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g - target));
    }
  return worst;
}

namespace {

void check_compatible(const OperatorSpec& a, const OperatorSpec& b) {
  if (a.dagger() != b.dagger() || !a.scale().same_as(b.scale()))
    throw ScaleMismatch();
}

}  // namespace

OperatorSpec compose(const OperatorSpec& a, const OperatorSpec& b) {
  check_compatible(a, b);
  if (a.chains().size() != 1 || b.chains().size() != 1)
    throw std::invalid_argument("compose expects single-chain operands");

  std::map<int, Sequence> bands;
  for (const auto& [da, wa] : a.bands()) {
    for (const auto& [db, wb] : b.bands()) {
      int d = da + db;
      Sequence w = seq::product(wa, seq::shift_by(da, wb));
      auto it = bands.find(d);
      if (it == bands.end())
        bands.emplace(d, std::move(w));
      else
        it->second = seq::sum(it->second, w);
    }
  }

  std::vector<CoreTerm> chain = b.chains()[0];
  chain.insert(chain.end(), a.chains()[0].begin(), a.chains()[0].end());
  return OperatorSpec(a.scale(), a.dagger(), Form::Conjugated,
                      {std::move(chain)}, std::move(bands));
}

OperatorSpec commutator(const OperatorSpec& a, const OperatorSpec& b) {
  OperatorSpec ab = compose(a, b);
  OperatorSpec ba = compose(b, a);

  std::map<int, Sequence> bands;
  for (const auto& [d, w] : ab.bands()) {
    auto it = ba.bands().find(d);
    if (it == ba.bands().end()) {
      if (!w.is_zero()) bands.emplace(d, w);
      continue;
    }
    auto simplified = seq::simplify_difference(w, it->second);
    Sequence diff =
        simplified ? *simplified : seq::difference(w, it->second);
    if (!diff.is_zero()) bands.emplace(d, std::move(diff));
  }
  for (const auto& [d, w] : ba.bands()) {
    if (ab.bands().count(d) || w.is_zero()) continue;
    bands.emplace(d, seq::product(Sequence::constant(-1.0), w));
  }

  std::vector<std::vector<CoreTerm>> chains{ab.chains()[0], ba.chains()[0]};
  return OperatorSpec(a.scale(), a.dagger(), Form::Conjugated,
                      std::move(chains), std::move(bands));
}

}  // namespace riesz::ops
