#include "riesz/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riesz {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Converges: return "converges";
    case Outcome::Diverges: return "diverges";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace riesz

namespace riesz::domain {

using seq::cplx;
using seq::GrowthAnnotation;
using seq::index_t;
using seq::Sequence;

Verdict classify_annotation(const GrowthAnnotation& g) {
  auto verdict = [&](Outcome o, const char* rule) {
    return Verdict{o, AnnotationEvidence{g, rule}};
  };
  if (g.eventually_zero()) return verdict(Outcome::Converges, "eventually zero");
  if (g.ratio.less_than_one())
    return verdict(Outcome::Converges, "geometric decay, r < 1");
  if (g.ratio.equal_one()) {
    if (g.exponent < -0.5)
      return verdict(Outcome::Converges, "p-series, 2p < -1");
    if (g.exact())
      return verdict(Outcome::Diverges, "p-series, 2p >= -1, order tight");
    return verdict(Outcome::Inconclusive, "upper bound with r = 1, p >= -1/2");
  }
  if (g.exact())
    return verdict(Outcome::Diverges, "geometric growth, r > 1, order tight");
  return verdict(Outcome::Inconclusive, "upper bound with r > 1");
}

Verdict probe_l2(const Sequence& s) {
  constexpr index_t kDepths[3] = {index_t(1) << 10, index_t(1) << 14,
                                  index_t(1) << 17};
  const index_t n_max = kDepths[2];
  const index_t window = n_max / 2;

  ProbeEvidence ev;
  double sum = 0.0;
  int depth_slot = 0;
  index_t last_nonzero = -1;
  double prev_mag = 0.0;
  bool saw_nonfinite = false;
  bool ratio_irregular = false;
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  double min_mag = std::numeric_limits<double>::infinity();
  double min_u = std::numeric_limits<double>::infinity();
  bool u_nondecreasing = true;
  double prev_u = -1.0;
  double last_mag = 0.0;

  for (index_t n = 0; n < n_max; ++n) {
    double mag = std::abs(s.eval(n));
    if (!std::isfinite(mag)) saw_nonfinite = true;
    sum += mag * mag;
    if (mag > 0.0) last_nonzero = n;
    if (n + 1 == kDepths[depth_slot]) {
      ev.partial_sums[size_t(depth_slot)] = {kDepths[depth_slot], sum};
      if (depth_slot < 2) ++depth_slot;
    }
    if (n >= window) {
      min_mag = std::min(min_mag, mag);
      if (n > window) {
        if (prev_mag == 0.0) {
          if (mag != 0.0) ratio_irregular = true;
        } else {
          double r = mag / prev_mag;
          rmin = std::min(rmin, r);
          rmax = std::max(rmax, r);
        }
      }
      double u = mag * mag * double(n + 1);
      min_u = std::min(min_u, u);
      if (prev_u >= 0.0 && u < prev_u * (1.0 - 1e-12)) u_nondecreasing = false;
      prev_u = u;
    }
    prev_mag = mag;
    if (n == n_max - 1) last_mag = mag;
  }
  ev.ratio_min = std::isfinite(rmin) ? rmin : 0.0;
  ev.ratio_max = rmax;

  auto verdict = [&](Outcome o, const char* rule,
                     std::optional<double> bound = std::nullopt) {
    ev.rule = rule;
    ev.tail_bound = bound;
    return Verdict{o, ev};
  };

  if (saw_nonfinite)
    return verdict(Outcome::Diverges, "terms exceed the floating-point range");
  if (last_nonzero < window)
    return verdict(Outcome::Converges, "zero tail", 0.0);
  if (!ratio_irregular && min_mag > 0.0 && rmax <= 0.995) {
    double q = rmax;
    double bound = last_mag * last_mag * q * q / (1.0 - q * q);
    return verdict(Outcome::Converges, "geometric tail bound", bound);
  }
  if (min_mag >= 1e-9 && rmin >= 1.0 - 1e-12)
    return verdict(Outcome::Diverges, "terms bounded below");
  if (min_u >= 1e-12 && u_nondecreasing)
    return verdict(Outcome::Diverges,
                   "harmonic comparison: |s_n|^2 (n+1) bounded below and "
                   "non-decreasing");
  return verdict(Outcome::Inconclusive, "no comparison bound closed the tail");
}

namespace {

Sequence apply_core_symbolic(const ops::CoreTerm& core, const Sequence& sigma) {
  using seq::product;
  using seq::shift_by;
  switch (core.kind) {
    case ops::CoreKind::Diagonal:
      return product(core.alpha, sigma);
    case ops::CoreKind::LowerShift:
      return product(shift_by(1, core.alpha), shift_by(1, sigma));
    case ops::CoreKind::RaiseShift:
      return shift_by(-1, product(shift_by(1, core.alpha), sigma));
  }
  throw std::logic_error("unreachable core kind");
}

Outcome fold_conditions(const std::vector<Condition>& conditions) {
  bool all_converge = true;
  for (const auto& c : conditions) {
    if (c.verdict.diverges()) return Outcome::Diverges;
    if (!c.verdict.converges()) all_converge = false;
  }
  return all_converge ? Outcome::Converges : Outcome::Inconclusive;
}

}  // namespace

MembershipReport membership(const ops::OperatorSpec& op, const ops::Vector& xi) {
  MembershipReport rep;
  Sequence s = op.effective_scale_weights();
  Sequence u = seq::product(xi.coeffs, seq::reciprocal(s));

  if (op.form() == ops::Form::Conjugated) {
    rep.conditions.push_back(
        {"C1", "sum |xi_n / t_n|^2 (xi in the domain of the inverse conjugator)",
         seq::l2_summable(u)});
    int step = 0;
    for (const auto& chain : op.chains()) {
      Sequence sigma = u;
      for (const auto& core : chain) {
        sigma = apply_core_symbolic(core, sigma);
        ++step;
        std::string tag = op.chains().size() > 1 || chain.size() > 1
                              ? "." + std::to_string(step)
                              : "";
        rep.conditions.push_back(
            {"C2" + tag, "core series coefficients lie in l2",
             seq::l2_summable(sigma)});
        rep.conditions.push_back(
            {"C3" + tag, "sum |t_m sigma_m|^2 (series lies in D(T))",
             seq::l2_summable(seq::product(s, sigma))});
      }
    }
    rep.note =
        "diagonal model: the weak-convergence characterization of the "
        "domain coincides with C3 and is reported through it";
  } else {
    Sequence sigma = u;
    for (const auto& core : op.chains()[0]) sigma = apply_core_symbolic(core, sigma);
    rep.conditions.push_back(
        {"S1", "sum of squared term norms of the formal series",
         seq::l2_summable(seq::product(s, sigma))});
  }
  rep.overall = fold_conditions(rep.conditions);
  return rep;
}

DomainComparison compare_domains(const ops::OperatorSpec& a,
                                 const ops::OperatorSpec& b,
                                 const std::vector<ops::Vector>& candidates) {
  if (!a.scale().same_as(b.scale()))
    throw ops::ScaleMismatch();
  {
    const auto& ba = a.bands();
    const auto& bb = b.bands();
    bool shared = ba.size() == bb.size();
    for (auto ia = ba.begin(), ib = bb.begin(); shared && ia != ba.end();
         ++ia, ++ib) {
      shared = ia->first == ib->first;
      auto ca = ia->second.canonical();
      auto cb = ib->second.canonical();
      if (shared && ca && cb) shared = *ca == *cb;
    }
    if (!shared)
      throw std::invalid_argument(
          "compare_domains expects operators with a shared core");
  }
  DomainComparison out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto ma = membership(a, candidates[i]);
    auto mb = membership(b, candidates[i]);
    if (ma.overall == Outcome::Inconclusive ||
        mb.overall == Outcome::Inconclusive) {
      out.undecided.push_back(i);
      continue;
    }
    bool in_a = ma.member();
    bool in_b = mb.member();
    if (in_a && in_b)
      out.in_both.push_back(i);
    else if (in_a)
      out.in_a_only.push_back(i);
    else if (in_b)
      out.in_b_only.push_back(i);
    else
      out.in_neither.push_back(i);
  }
  return out;
}

namespace {

// Rank of the first `rows` coordinates of the test vectors, by Gaussian
// elimination with a fixed pivot tolerance.
int coordinate_rank(const std::vector<ops::Vector>& vectors, index_t rows) {
  const std::size_t cols = vectors.size();
  std::vector<std::vector<cplx>> m(static_cast<std::size_t>(rows), std::vector<cplx>(cols));
  for (index_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m[size_t(i)][j] = vectors[j].coeffs.eval(i);

  int rank = 0;
  std::size_t col = 0;
  for (index_t row = 0; row < rows && col < cols; ++col) {
    index_t pivot = -1;
    double best = 1e-12;
    for (index_t r = row; r < rows; ++r) {
      double mag = std::abs(m[size_t(r)][col]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[size_t(row)], m[size_t(pivot)]);
    for (index_t r = 0; r < rows; ++r) {
      if (r == row) continue;
      cplx f = m[size_t(r)][col] / m[size_t(row)][col];
      for (std::size_t c = col; c < cols; ++c)
        m[size_t(r)][c] -= f * m[size_t(row)][c];
    }
    ++rank;
    ++row;
  }
  return rank;
}

}  // namespace

WeakProbeResult weak_convergence_probe(
    const std::vector<ops::Vector>& partial_sums,
    const std::vector<ops::Vector>& test_vectors) {
  constexpr index_t kSpanCoords = 32;
  constexpr index_t kPairingDepth = 512;

  if (partial_sums.size() < 2)
    throw std::invalid_argument("need at least two partial sums");
  if (coordinate_rank(test_vectors, kSpanCoords) < kSpanCoords)
    throw std::invalid_argument(
        "test vectors must span at least the first 32 coordinates");

  WeakProbeResult res;
  const std::size_t k_total = partial_sums.size();
  const std::size_t k_half = k_total / 2;

  double worst = 0.0;
  for (const auto& tv : test_vectors) {
    cplx last = ops::inner(tv, partial_sums.back(), kPairingDepth);
    for (std::size_t k = k_half; k + 1 < k_total; ++k) {
      cplx p = ops::inner(tv, partial_sums[k], kPairingDepth);
      worst = std::max(worst, std::abs(p - last));
    }
  }
  res.max_pairing_delta = worst;

  if (worst <= kPairingStabilizationTol) {
    res.outcome = Outcome::Converges;
    res.limit_coefficients.resize(size_t(kSpanCoords));
    for (index_t i = 0; i < kSpanCoords; ++i)
      res.limit_coefficients[size_t(i)] = partial_sums.back().coeffs.eval(i);
    res.note = "all pairings stabilized; limit identified coordinate-wise";
  } else {
    res.outcome = Outcome::Inconclusive;
    res.note =
        "pairings did not stabilize within tolerance; finite probes cannot "
        "certify weak divergence";
  }
  return res;
}

namespace {

bool annotation_bounded(const GrowthAnnotation& g) {
  return g.ratio.less_than_one() || (g.ratio.equal_one() && g.exponent <= 0.0);
}

}  // namespace

std::optional<ClosednessWitness> closedness_witness(const ops::OperatorSpec& op) {
  if (op.form() != ops::Form::Conjugated) return std::nullopt;
  Sequence s = op.effective_scale_weights();
  auto gs = s.growth();
  auto gsi = seq::reciprocal(s).growth();
  if (!gs || !gsi) return std::nullopt;
  // Non-closed regime: conjugator bounded, inverse conjugator unbounded.
  if (!annotation_bounded(*gs) || annotation_bounded(*gsi)) return std::nullopt;

  const std::vector<Sequence> family = {
      Sequence::constant(1.0), Sequence::polynomial_power(-0.5)};

  for (const auto& u : family) {
    Sequence xi = seq::product(s, u);
    if (!seq::l2_summable(xi).converges()) continue;       // xi must lie in H
    if (!seq::l2_summable(u).diverges()) continue;         // C1 must fail
    Sequence sigma = u;
    for (const auto& core : op.chains()[0]) sigma = apply_core_symbolic(core, sigma);
    if (!seq::l2_summable(seq::product(s, sigma)).converges()) continue;

    // Numeric verification of the graph-limit escape.  The annotation
    // verdicts already certify both limits; the truncation family must in
    // addition show the tails and image gaps actually shrinking.
    const index_t levels[4] = {128, 256, 512, 1024};
    const index_t image_depth = levels[3] + 2;
    std::vector<std::vector<cplx>> images;
    std::array<double, 4> tails{};
    for (std::size_t i = 0; i < 4; ++i) {
      index_t k = levels[i];
      std::vector<cplx> prefix(static_cast<std::size_t>(k));
      for (index_t n = 0; n < k; ++n) prefix[size_t(n)] = xi.eval(n);
      images.push_back(
          ops::apply(op, ops::Vector::from_values(std::move(prefix)),
                     image_depth));
      double acc = 0.0;
      for (index_t n = k; n < levels[3] * 8; ++n) acc += std::norm(xi.eval(n));
      tails[i] = std::sqrt(acc);
    }
    std::array<double, 3> gaps{};
    for (std::size_t i = 0; i < 3; ++i) {
      double acc = 0.0;
      for (index_t n = 0; n < image_depth; ++n)
        acc += std::norm(images[i + 1][size_t(n)] - images[i][size_t(n)]);
      gaps[i] = std::sqrt(acc);
    }
    bool tail_shrinks =
        tails[3] <= 1e-6 ||
        (tails[3] < tails[2] && tails[2] < tails[1] && tails[1] < tails[0] &&
         tails[3] <= 0.8 * tails[1]);
    bool gap_shrinks =
        gaps[2] <= 1e-9 ||
        (gaps[2] < gaps[1] && gaps[1] < gaps[0] && gaps[2] <= 0.8 * gaps[0]);

    auto limit_rep = membership(op, ops::Vector{xi});
    if (!tail_shrinks || !gap_shrinks ||
        limit_rep.overall != Outcome::Diverges)
      continue;

    ClosednessWitness w{ops::Vector{xi},
                        std::vector<cplx>(images[3].begin(),
                                          images[3].begin() + 64),
                        std::move(limit_rep),
                        tails[3],
                        gaps[2],
                        "truncations converge to xi and their images "
                        "converge, but xi fails C1: the operator admits a "
                        "graph-limit escape and is not closed"};
    return w;
  }
  return std::nullopt;
}

}  // namespace riesz::domain
