#include "doctest.h"

#include <cmath>
#include <sstream>

#include "riesz/hermite.hpp"

using namespace riesz;
using hermite::GridFunction;
using hermite::LadderMode;
using seq::cplx;
using seq::Sequence;

namespace {

constexpr double kPiQuarterInv = 0.7511255444649425;

GridFunction minus(GridFunction f, const GridFunction& g, double factor) {
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] -= factor * g.values[i];
  return f;
}

}  // namespace

TEST_CASE("basis function values at the origin") {
  CHECK(hermite::hermite_eval(0, 0.0) ==
        doctest::Approx(kPiQuarterInv).epsilon(1e-12));
  CHECK(hermite::hermite_eval(1, 0.0) == 0.0);
  CHECK(hermite::hermite_eval(2, 0.0) ==
        doctest::Approx(-kPiQuarterInv / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("recurrence matches the generating construction for small orders") {
  // (t - d/dt)^n applied to the gaussian, normalized: spot values obtained
  // by expanding the first few orders by hand
  auto f1 = [](double t) {
    return kPiQuarterInv * std::sqrt(2.0) * t * std::exp(-0.5 * t * t);
  };
  auto f2 = [](double t) {
    return kPiQuarterInv / std::sqrt(2.0) * (2.0 * t * t - 1.0) *
           std::exp(-0.5 * t * t);
  };
  for (double t : {-2.5, -1.0, -0.25, 0.5, 1.75, 3.0}) {
    CHECK(hermite::hermite_eval(1, t) == doctest::Approx(f1(t)).epsilon(1e-12));
    CHECK(hermite::hermite_eval(2, t) == doctest::Approx(f2(t)).epsilon(1e-12));
  }
}

TEST_CASE("two-point rule sits at the roots of the second basis function") {
  auto rule = hermite::gauss_hermite_rule(2);
  REQUIRE(rule->nodes.size() == 2);
  double root = 1.0 / std::sqrt(2.0);
  CHECK(rule->nodes[0] == doctest::Approx(-root).epsilon(1e-13));
  CHECK(rule->nodes[1] == doctest::Approx(root).epsilon(1e-13));

  // integrates gaussian moments exactly up to degree 2m-1 = 3
  double m0 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    double x = rule->nodes[i], w = rule->weights[i];
    m0 += w * std::exp(-x * x);
    m2 += w * x * x * std::exp(-x * x);
  }
  CHECK(m0 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("uniform rule is the trapezoid on the symmetric interval") {
  auto rule = hermite::uniform_rule(3, 1.0);
  CHECK(rule->nodes == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(rule->weights == std::vector<double>{0.5, 1.0, 0.5});
}

TEST_CASE("quadrature reproduces orthonormality") {
  auto rule = hermite::gauss_hermite_rule(64);
  auto f0 = hermite::sample(rule, 0);
  auto f1 = hermite::sample(rule, 1);
  auto f3 = hermite::sample(rule, 3);
  auto f5 = hermite::sample(rule, 5);
  auto f7 = hermite::sample(rule, 7);

  CHECK(std::abs(hermite::l2_inner(f0, f0) - cplx(1.0, 0.0)) <= 1e-10);
  CHECK(std::abs(hermite::l2_inner(f1, f0)) <= 1e-12);
  CHECK(std::abs(hermite::l2_inner(f3, f3) - cplx(1.0, 0.0)) <= 1e-9);
  CHECK(std::abs(hermite::l2_inner(f5, f7)) <= 1e-10);

  // cross-check the vanishing cross moment on a denser rule
  auto dense = hermite::gauss_hermite_rule(128);
  CHECK(std::abs(hermite::l2_inner(hermite::sample(dense, 5),
                                   hermite::sample(dense, 7))) <= 1e-10);
}

TEST_CASE("normalization survives on modest rules") {
  auto rule = hermite::gauss_hermite_rule(32);
  auto f0 = hermite::sample(rule, 0);
  CHECK(std::abs(hermite::l2_inner(f0, f0) - cplx(1.0, 0.0)) <= 1e-10);
}

TEST_CASE("rule mismatch is rejected") {
  auto a = hermite::gauss_hermite_rule(32);
  auto b = hermite::gauss_hermite_rule(48);
  CHECK_THROWS_AS(
      hermite::l2_inner(hermite::sample(a, 0), hermite::sample(b, 0)),
      hermite::RuleMismatch);
}

TEST_CASE("index and size preconditions") {
  CHECK_THROWS_AS(hermite::hermite_eval(-1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hermite::hermite_eval(129, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hermite::gauss_hermite_rule(1), std::invalid_argument);
  CHECK_THROWS_AS(hermite::uniform_rule(1, 5.0), std::invalid_argument);
  auto scale = ops::ScaleOperator(seq::Sequence::constant(1.0));
  CHECK_THROWS_AS(hermite::example34_scenario(scale, 65),
                  std::invalid_argument);
}

TEST_CASE("analytic ladder actions on sampled basis functions") {
  auto rule = hermite::gauss_hermite_rule(96);
  auto f0 = hermite::sample(rule, 0);
  auto f1 = hermite::sample(rule, 1);

  auto lowered = hermite::ladder_apply(LadderMode::Lower, f1);
  CHECK(hermite::l2_norm(minus(lowered, f0, 1.0)) <= 1e-6);

  auto annihilated = hermite::ladder_apply(LadderMode::Lower, f0);
  CHECK(hermite::l2_norm(annihilated) <= 1e-6);

  auto counted = hermite::ladder_apply(LadderMode::Number, f0);
  CHECK(hermite::l2_norm(minus(counted, f0, 1.0)) <= 1e-6);
}

TEST_CASE("ladder residuals across the low basis") {
  auto rule = hermite::gauss_hermite_rule(96);
  std::vector<GridFunction> f;
  for (int k = 0; k <= 21; ++k) f.push_back(hermite::sample(rule, k));

  for (int k = 0; k <= 20; ++k) {
    auto low = hermite::ladder_apply(LadderMode::Lower, f[size_t(k)]);
    if (k > 0)
      low = minus(low, f[size_t(k - 1)], std::sqrt(double(k)));
    CHECK(hermite::l2_norm(low) <= 1e-6);

    if (k <= 19) {
      auto high = hermite::ladder_apply(LadderMode::Raise, f[size_t(k)]);
      high = minus(high, f[size_t(k + 1)], std::sqrt(double(k + 1)));
      CHECK(hermite::l2_norm(high) <= 1e-6);
    }

    auto num = hermite::ladder_apply(LadderMode::Number, f[size_t(k)]);
    num = minus(num, f[size_t(k)], double(k + 1));
    CHECK(hermite::l2_norm(num) <= 1e-5);
  }
}

TEST_CASE("uniform rules integrate and differentiate the decaying basis") {
  // trapezoid sums of rapidly decaying smooth functions converge fast; the
  // centered-difference ladder is only second order in the step
  auto rule = hermite::uniform_rule(2001, 10.0);
  auto f0 = hermite::sample(rule, 0);
  auto f1 = hermite::sample(rule, 1);
  CHECK(std::abs(hermite::l2_inner(f0, f0) - cplx(1.0, 0.0)) <= 1e-10);

  auto lowered = hermite::ladder_apply(hermite::LadderMode::Lower, f1);
  CHECK(hermite::l2_norm(minus(lowered, f0, 1.0)) <= 1e-3);
}

TEST_CASE("coefficient extraction inverts sampling") {
  auto rule = hermite::gauss_hermite_rule(96);

  auto f2 = hermite::sample(rule, 2);
  auto c = hermite::coefficientize(f2, 8);
  for (seq::index_t n = 0; n < 8; ++n) {
    cplx want = n == 2 ? cplx(1.0, 0.0) : cplx{};
    CHECK(std::abs(c.coeffs.eval(n) - want) <= 1e-9);
  }

  // linear combination (f0 + f1) / sqrt(2)
  GridFunction mix;
  mix.rule = rule;
  mix.values.resize(rule->nodes.size());
  auto f0 = hermite::sample(rule, 0);
  auto f1 = hermite::sample(rule, 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < mix.values.size(); ++i)
    mix.values[i] = inv_sqrt2 * (f0.values[i] + f1.values[i]);
  auto cm = hermite::coefficientize(mix, 4);
  CHECK(std::abs(cm.coeffs.eval(0) - cplx(inv_sqrt2, 0.0)) <= 1e-10);
  CHECK(std::abs(cm.coeffs.eval(1) - cplx(inv_sqrt2, 0.0)) <= 1e-10);
  CHECK(std::abs(cm.coeffs.eval(2)) <= 1e-10);

  // multiplication by the coordinate sends f0 to f1 / sqrt(2)
  GridFunction tf0;
  tf0.rule = rule;
  tf0.values.resize(rule->nodes.size());
  for (std::size_t i = 0; i < tf0.values.size(); ++i)
    tf0.values[i] = rule->nodes[i] * f0.values[i];
  auto ct = hermite::coefficientize(tf0, 6);
  CHECK(std::abs(ct.coeffs.eval(1) - cplx(inv_sqrt2, 0.0)) <= 1e-9);
  for (seq::index_t n : {0, 2, 3, 4, 5})
    CHECK(std::abs(ct.coeffs.eval(n)) <= 1e-9);
}

TEST_CASE("reconstruction is the identity on the truncated span") {
  auto rule = hermite::gauss_hermite_rule(96);
  std::vector<cplx> coeffs = {{0.5, 0.0}, {0.0, -0.25}, {1.0, 1.0}, {0.0, 0.0},
                              {-0.75, 0.0}};
  auto f = hermite::sample_fn(rule, coeffs);
  auto back = hermite::coefficientize(f, 5);
  for (seq::index_t n = 0; n < 5; ++n)
    CHECK(std::abs(back.coeffs.eval(n) - coeffs[size_t(n)]) <= 1e-9);

  auto again = hermite::reconstruct(back, 5, rule);
  double defect = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    defect = std::max(defect, std::abs(again.values[i] - f.values[i]));
  CHECK(defect <= 1e-9);
}

TEST_CASE("gram matrix of the low basis is the identity") {
  auto rule = hermite::gauss_hermite_rule(96);
  std::vector<GridFunction> f;
  for (int k = 0; k <= 20; ++k) f.push_back(hermite::sample(rule, k));
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      cplx g = hermite::l2_inner(f[size_t(i)], f[size_t(j)]);
      worst = std::max(worst, std::abs(g - (i == j ? cplx(1.0, 0.0) : cplx{})));
    }
  CHECK(worst <= 1e-8);
}

TEST_CASE("oscillator scenario holds for three scale families") {
  using ops::ScaleOperator;
  std::vector<ScaleOperator> scales = {
      ScaleOperator(Sequence::constant(1.0)),
      ScaleOperator(Sequence::geometric(2.0)),
      ScaleOperator(Sequence::polynomial_power(1.0)),
  };
  for (const auto& scale : scales) {
    auto rep = hermite::example34_scenario(scale, 16);
    CHECK(rep.eigen_residual <= 1e-12);
    CHECK(rep.lower_residual <= 1e-12);
    CHECK(rep.raise_residual <= 1e-12);
    CHECK(rep.commutator_identity_band);
    CHECK(rep.commutator_apply_defect <= 1e-12);
  }
}

TEST_CASE("identity scale reproduces the bare relations exactly") {
  auto rep = hermite::example34_scenario(
      ops::ScaleOperator(Sequence::constant(1.0)), 12);
  CHECK(rep.eigen_residual == 0.0);
  CHECK(rep.lower_residual == 0.0);
  CHECK(rep.raise_residual == 0.0);
}

TEST_CASE("csv export writes one sample per node") {
  auto rule = hermite::gauss_hermite_rule(8);
  std::ostringstream out;
  hermite::export_csv(out, 0, *rule);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,re,im");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 8);
}
