#include "riesz/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "riesz/seq.hpp"

namespace riesz::hermite {

namespace {

constexpr double kPiQuarterInv = 0.7511255444649425;  // pi^{-1/4}

// f_m and f_{m-1} without the public index cap; used by rule construction.
std::pair<double, double> hermite_pair(int m, double t) {
  double f0 = kPiQuarterInv * std::exp(-0.5 * t * t);
  if (m == 0) return {f0, 0.0};
  double prev = f0;
  double cur = std::sqrt(2.0) * t * f0;
  for (int n = 1; n < m; ++n) {
    double next = std::sqrt(2.0 / (n + 1)) * t * cur -
                  std::sqrt(double(n) / (n + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

// Eigenvalue count below x for the Jacobi matrix of the rule (zero
// diagonal, off-diagonal b_k = sqrt(k/2)), by Sturm sequence.  A vanishing
// pivot counts as negative.
int sturm_count(int m, double x) {
  int count = 0;
  double d = -x;
  if (d == 0.0) d = -1e-300;
  if (d < 0.0) ++count;
  for (int k = 1; k < m; ++k) {
    d = -x - (0.5 * k) / d;
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

}  // namespace

RulePtr gauss_hermite_rule(int node_count) {
  if (node_count < 2) throw std::invalid_argument("need at least two nodes");
  const int m = node_count;
  const double bound = std::sqrt(2.0 * m) + 1.0;

  auto rule = std::make_shared<QuadratureRule>();
  rule->kind = QuadratureRule::Kind::GaussHermite;
  rule->nodes.resize(size_t(m));
  rule->weights.resize(size_t(m));

  for (int k = 0; k < m; ++k) {
    double lo = -bound, hi = bound;
    while (hi - lo > 1e-13) {
      double mid = 0.5 * (lo + hi);
      if (sturm_count(m, mid) <= k)
        lo = mid;
      else
        hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {  // Newton polish on the Hermite function
      auto [fm, fm1] = hermite_pair(m, x);
      double deriv = std::sqrt(2.0 * m) * fm1 - x * fm;
      if (deriv == 0.0) break;
      double next = x - fm / deriv;
      if (next < lo - 1e-10 || next > hi + 1e-10) break;  // keep the bracket
      x = next;
    }
    auto [fm, fm1] = hermite_pair(m, x);
    (void)fm;
    rule->nodes[size_t(k)] = x;
    rule->weights[size_t(k)] = 1.0 / (m * fm1 * fm1);
  }
  return rule;
}

RulePtr uniform_rule(int node_count, double half_width) {
  if (node_count < 2) throw std::invalid_argument("need at least two nodes");
  auto rule = std::make_shared<QuadratureRule>();
  rule->kind = QuadratureRule::Kind::Uniform;
  rule->half_width = half_width;
  const double h = 2.0 * half_width / (node_count - 1);
  rule->nodes.resize(size_t(node_count));
  rule->weights.resize(size_t(node_count));
  for (int i = 0; i < node_count; ++i) {
    rule->nodes[size_t(i)] = -half_width + h * i;
    rule->weights[size_t(i)] =
        (i == 0 || i == node_count - 1) ? 0.5 * h : h;
  }
  return rule;
}

bool same_rule(const QuadratureRule& a, const QuadratureRule& b) {
  return a.kind == b.kind && a.nodes.size() == b.nodes.size() &&
         a.half_width == b.half_width;
}

double hermite_eval(int n, double t) {
  if (n < 0 || n > 128)
    throw std::invalid_argument("hermite index must lie in [0, 128]");
  return hermite_pair(n, t).first;
}

GridFunction sample(RulePtr rule, int hermite_index) {
  GridFunction f;
  f.rule = rule;
  f.values.resize(rule->nodes.size());
  for (std::size_t i = 0; i < rule->nodes.size(); ++i)
    f.values[i] = hermite_eval(hermite_index, rule->nodes[i]);
  return f;
}

GridFunction sample_fn(RulePtr rule, const std::vector<cplx>& coefficients) {
  GridFunction f;
  f.rule = rule;
  f.values.assign(rule->nodes.size(), cplx{});
  for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
    double t = rule->nodes[i];
    double prev = kPiQuarterInv * std::exp(-0.5 * t * t);
    double cur = std::sqrt(2.0) * t * prev;
    for (std::size_t n = 0; n < coefficients.size(); ++n) {
      double fn = n == 0 ? prev : cur;
      f.values[i] += coefficients[n] * fn;
      if (n >= 1) {
        double next = std::sqrt(2.0 / double(n + 1)) * t * cur -
                      std::sqrt(double(n) / double(n + 1)) * prev;
        prev = cur;
        cur = next;
      }
    }
  }
  return f;
}

cplx l2_inner(const GridFunction& f, const GridFunction& g) {
  if (!same_rule(*f.rule, *g.rule)) throw RuleMismatch();
  cplx acc{};
  for (std::size_t i = 0; i < f.values.size(); ++i)
    acc += f.rule->weights[i] * f.values[i] * std::conj(g.values[i]);
  return acc;
}

double l2_norm(const GridFunction& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    acc += f.rule->weights[i] * std::norm(f.values[i]);
  return std::sqrt(acc);
}

namespace {

GridFunction derivative(const GridFunction& f) {
  GridFunction out;
  out.rule = f.rule;
  out.values.assign(f.values.size(), cplx{});
  if (f.rule->kind == QuadratureRule::Kind::GaussHermite) {
    const int count = int(std::min<std::size_t>(f.rule->nodes.size(), 130));
    auto coeffs = coefficientize(f, count);
    std::vector<cplx> d(static_cast<std::size_t>(count), cplx{});
    auto c = [&](int j) -> cplx {
      return (j >= 0 && j < count) ? coeffs.coeffs.eval(j) : cplx{};
    };
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < count; ++i)
      d[size_t(i)] = inv_sqrt2 * (std::sqrt(double(i + 1)) * c(i + 1) -
                                  std::sqrt(double(i)) * c(i - 1));
    return sample_fn(f.rule, d);
  }
  const auto& x = f.rule->nodes;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0)
      out.values[i] = (f.values[1] - f.values[0]) / (x[1] - x[0]);
    else if (i == n - 1)
      out.values[i] = (f.values[n - 1] - f.values[n - 2]) / (x[n - 1] - x[n - 2]);
    else
      out.values[i] = (f.values[i + 1] - f.values[i - 1]) / (x[i + 1] - x[i - 1]);
  }
  return out;
}

}  // namespace

GridFunction ladder_apply(LadderMode mode, const GridFunction& f) {
  if (mode == LadderMode::Number)
    return ladder_apply(LadderMode::Lower, ladder_apply(LadderMode::Raise, f));
  GridFunction d = derivative(f);
  GridFunction out;
  out.rule = f.rule;
  out.values.resize(f.values.size());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double sign = (mode == LadderMode::Lower) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    out.values[i] = inv_sqrt2 * (f.rule->nodes[i] * f.values[i] +
                                 sign * d.values[i]);
  return out;
}

ops::Vector coefficientize(const GridFunction& f, int count) {
  if (count > 128 + 1)
    throw std::invalid_argument("coefficient count exceeds the basis range");
  std::vector<cplx> c(static_cast<std::size_t>(count), cplx{});
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double t = f.rule->nodes[i];
    cplx wf = f.rule->weights[i] * f.values[i];
    double prev = kPiQuarterInv * std::exp(-0.5 * t * t);
    double cur = std::sqrt(2.0) * t * prev;
    for (int n = 0; n < count; ++n) {
      double fn = n == 0 ? prev : cur;
      c[size_t(n)] += wf * fn;
      if (n >= 1) {
        double next = std::sqrt(2.0 / double(n + 1)) * t * cur -
                      std::sqrt(double(n) / double(n + 1)) * prev;
        prev = cur;
        cur = next;
      }
    }
  }
  return ops::Vector::from_values(std::move(c));
}

GridFunction reconstruct(const ops::Vector& coefficients, int count,
                         RulePtr rule) {
  std::vector<cplx> c(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) c[size_t(n)] = coefficients.coeffs.eval(n);
  return sample_fn(std::move(rule), c);
}

Example34Report example34_scenario(const ops::ScaleOperator& scale,
                                   int count) {
  if (count > 64) throw std::invalid_argument("count must be <= 64");
  using seq::Sequence;

  auto h = ops::make_operator(ops::CoreKind::Diagonal,
                              Sequence::polynomial_power(1.0), scale,
                              ops::Form::Conjugated);
  auto a = ops::make_operator(ops::CoreKind::LowerShift,
                              Sequence::sqrt_index(), scale,
                              ops::Form::Conjugated);
  auto b = ops::make_operator(ops::CoreKind::RaiseShift,
                              Sequence::sqrt_index(), scale,
                              ops::Form::Conjugated);

  Example34Report rep;
  const seq::index_t depth = count + 2;
  auto defect = [&](const std::vector<cplx>& got, seq::index_t idx, cplx want) {
    double worst = 0.0;
    for (seq::index_t m = 0; m < seq::index_t(got.size()); ++m) {
      cplx expect = (m == idx) ? want : cplx{};
      worst = std::max(worst, std::abs(got[size_t(m)] - expect));
    }
    return worst / std::abs(want);
  };

  for (seq::index_t n = 0; n < count; ++n) {
    auto [phi_n, psi_n] = ops::basis_vectors(scale, n);
    auto [phi_n1, psi_n1] = ops::basis_vectors(scale, n + 1);
    double tn = scale.weight(n);
    double tn1 = scale.weight(n + 1);

    rep.eigen_residual = std::max(
        rep.eigen_residual,
        defect(ops::apply(h, phi_n, depth), n, double(n + 1) * tn));
    rep.lower_residual = std::max(
        rep.lower_residual,
        defect(ops::apply(a, phi_n1, depth), n, std::sqrt(double(n + 1)) * tn));
    rep.raise_residual = std::max(
        rep.raise_residual,
        defect(ops::apply(b, phi_n, depth), n + 1,
               std::sqrt(double(n + 1)) * tn1));
  }

  auto comm = ops::commutator(a, b);
  rep.commutator_identity_band =
      comm.bands().size() == 1 && comm.bands().count(0) == 1 &&
      seq::symbolically_equal(comm.bands().at(0), Sequence::constant(1.0));

  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int rep_i = 0; rep_i < 20; ++rep_i) {
    std::vector<cplx> coeffs(static_cast<std::size_t>(count));
    for (auto& v : coeffs) v = cplx(unit(rng), unit(rng));
    auto xi = ops::Vector::from_values(coeffs);
    auto out = ops::apply(comm, xi, count);
    for (int m = 0; m < count; ++m)
      rep.commutator_apply_defect =
          std::max(rep.commutator_apply_defect,
                   std::abs(out[size_t(m)] - coeffs[size_t(m)]));
  }
  return rep;
}

void export_csv(std::ostream& out, int hermite_index,
                const QuadratureRule& rule) {
  out << "t,re,im\n";
  for (double t : rule.nodes) {
    double v = hermite_eval(hermite_index, t);
    out << t << "," << v << "," << 0.0 << "\n";
  }
}

}  // namespace riesz::hermite
