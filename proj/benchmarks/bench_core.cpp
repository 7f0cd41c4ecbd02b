#include <benchmark/benchmark.h>

#include <random>

#include "riesz/domain.hpp"
#include "riesz/finite.hpp"
#include "riesz/hermite.hpp"
#include "riesz/operator_core.hpp"
#include "riesz/seq.hpp"

namespace {

using riesz::seq::cplx;
using riesz::seq::Sequence;

riesz::ops::ScaleOperator geometric_scale() {
  return riesz::ops::ScaleOperator(Sequence::geometric(2.0));
}

void BM_ApplyLadder(benchmark::State& state) {
  const auto n = riesz::seq::index_t(state.range(0));
  auto scale = geometric_scale();
  auto a = riesz::ops::make_operator(riesz::ops::CoreKind::LowerShift,
                                     Sequence::sqrt_index(), scale,
                                     riesz::ops::Form::Conjugated);
  std::vector<cplx> coeffs(size_t(n), cplx{0.25, -0.5});
  auto xi = riesz::ops::Vector::from_values(coeffs);
  for (auto _ : state) {
    auto out = riesz::ops::apply(a, xi, n);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ApplyLadder)->Arg(256)->Arg(1024)->Arg(4096);

void BM_Membership(benchmark::State& state) {
  auto scale = geometric_scale();
  auto h = riesz::ops::make_operator(riesz::ops::CoreKind::Diagonal,
                                     Sequence::sqrt_index(), scale,
                                     riesz::ops::Form::Conjugated);
  riesz::ops::Vector xi{Sequence::geometric(0.5)};
  for (auto _ : state) {
    auto rep = riesz::domain::membership(h, xi);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_Membership);

void BM_SvdSmall(benchmark::State& state) {
  const auto n = size_t(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  riesz::finite::DenseMatrix m(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m.at(i, j) = cplx(unit(rng), unit(rng));
  for (auto _ : state) {
    auto svd = riesz::finite::svd_small(m);
    benchmark::DoNotOptimize(svd);
  }
}
BENCHMARK(BM_SvdSmall)->Arg(8)->Arg(16)->Arg(32);

void BM_GaussHermiteRule(benchmark::State& state) {
  const int m = int(state.range(0));
  for (auto _ : state) {
    auto rule = riesz::hermite::gauss_hermite_rule(m);
    benchmark::DoNotOptimize(rule);
  }
}
BENCHMARK(BM_GaussHermiteRule)->Arg(64)->Arg(128)->Arg(256);

void BM_CommutatorBand(benchmark::State& state) {
  auto scale = geometric_scale();
  auto a = riesz::ops::make_operator(riesz::ops::CoreKind::LowerShift,
                                     Sequence::sqrt_index(), scale,
                                     riesz::ops::Form::Conjugated);
  auto b = riesz::ops::make_operator(riesz::ops::CoreKind::RaiseShift,
                                     Sequence::sqrt_index(), scale,
                                     riesz::ops::Form::Conjugated);
  for (auto _ : state) {
    auto comm = riesz::ops::commutator(a, b);
    benchmark::DoNotOptimize(comm);
  }
}
BENCHMARK(BM_CommutatorBand);

}  // namespace

BENCHMARK_MAIN();
