#include "riesz/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "riesz/domain.hpp"
#include "riesz/finite.hpp"
#include "riesz/hermite.hpp"
#include "riesz/operator_core.hpp"
#include "riesz/version.hpp"

namespace riesz::cli {

using json = nlohmann::ordered_json;
using seq::Sequence;

SeqDesc SeqDesc::geometric(double ratio, cplx scale) {
  SeqDesc d;
  d.kind = "geometric";
  d.ratio = ratio;
  d.scale = scale;
  return d;
}

SeqDesc SeqDesc::polynomial_power(double exponent, cplx scale) {
  SeqDesc d;
  d.kind = "polynomial-power";
  d.exponent = exponent;
  d.scale = scale;
  return d;
}

SeqDesc SeqDesc::sqrt_index() {
  SeqDesc d;
  d.kind = "sqrt-index";
  return d;
}

SeqDesc SeqDesc::constant(cplx value) {
  SeqDesc d;
  d.kind = "constant";
  d.value = value;
  return d;
}

SeqDesc SeqDesc::finite_support(std::vector<cplx> values) {
  SeqDesc d;
  d.kind = "finite-support";
  d.values = std::move(values);
  return d;
}

Sequence build_sequence(const SeqDesc& d) {
  if (d.kind == "finite-support") return Sequence::finite_support(d.values);
  if (d.kind == "geometric") return Sequence::geometric(d.ratio, d.scale);
  if (d.kind == "polynomial-power")
    return Sequence::polynomial_power(d.exponent, d.scale);
  if (d.kind == "sqrt-index") return Sequence::sqrt_index();
  if (d.kind == "constant") return Sequence::constant(d.value);
  if (d.kind == "tabulated") {
    if (!d.tail) throw SchemaError("tabulated", "missing tail annotation");
    seq::GrowthAnnotation tail{seq::Ratio::of(d.tail->ratio), d.tail->exponent,
                               d.tail->constant,
                               d.tail->exact ? seq::Exactness::ExactAsymptotic
                                             : seq::Exactness::UpperBound};
    if (d.tail->ratio == 0.0) tail.ratio = seq::Ratio{0.0, 1.0};
    return Sequence::tabulated(d.values, tail);
  }
  if (d.kind == "product") {
    if (d.args.size() != 2) throw SchemaError("product", "needs two operands");
    return seq::product(build_sequence(d.args[0]), build_sequence(d.args[1]));
  }
  if (d.kind == "shift-by") {
    if (d.args.size() != 1) throw SchemaError("shift-by", "needs one operand");
    return seq::shift_by(d.k, build_sequence(d.args[0]));
  }
  if (d.kind == "conjugate") {
    if (d.args.size() != 1) throw SchemaError("conjugate", "needs one operand");
    return seq::conjugate(build_sequence(d.args[0]));
  }
  if (d.kind == "reciprocal") {
    if (d.args.size() != 1)
      throw SchemaError("reciprocal", "needs one operand");
    return seq::reciprocal(build_sequence(d.args[0]));
  }
  throw SchemaError("kind", "unknown sequence kind '" + d.kind + "'");
}

namespace {

json complex_to_json(cplx z) {
  if (z.imag() == 0.0) return json(z.real());
  return json::array({z.real(), z.imag()});
}

cplx complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw SchemaError(path, "expected a number or [re, im]");
}

json desc_to_json(const SeqDesc& d) {
  json j;
  j["kind"] = d.kind;
  if (d.kind == "finite-support" || d.kind == "tabulated") {
    json vals = json::array();
    for (cplx v : d.values) vals.push_back(complex_to_json(v));
    j["values"] = std::move(vals);
  }
  if (d.kind == "geometric") {
    j["ratio"] = d.ratio;
    if (d.scale != cplx{1.0, 0.0}) j["scale"] = complex_to_json(d.scale);
  }
  if (d.kind == "polynomial-power") {
    j["exponent"] = d.exponent;
    if (d.scale != cplx{1.0, 0.0}) j["scale"] = complex_to_json(d.scale);
  }
  if (d.kind == "constant") j["value"] = complex_to_json(d.value);
  if (d.kind == "tabulated" && d.tail) {
    j["tail"] = json{{"ratio", d.tail->ratio},
                     {"exponent", d.tail->exponent},
                     {"constant", d.tail->constant},
                     {"exact", d.tail->exact}};
  }
  if (d.kind == "shift-by") j["k"] = d.k;
  if (!d.args.empty()) {
    if (d.kind == "product") {
      j["a"] = desc_to_json(d.args[0]);
      j["b"] = desc_to_json(d.args[1]);
    } else {
      j["a"] = desc_to_json(d.args[0]);
    }
  }
  return j;
}

SeqDesc desc_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw SchemaError(path + ".kind", "missing sequence kind");
  SeqDesc d;
  d.kind = j["kind"].get<std::string>();

  auto need = [&](const char* field) -> const json& {
    if (!j.contains(field))
      throw SchemaError(path + "." + field, "required for kind " + d.kind);
    return j[field];
  };
  auto values_of = [&](const json& arr, const std::string& p) {
    if (!arr.is_array()) throw SchemaError(p, "expected an array");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(complex_from_json(arr[i], p + "[" + std::to_string(i) + "]"));
    return out;
  };

  if (d.kind == "finite-support") {
    d.values = values_of(need("values"), path + ".values");
  } else if (d.kind == "geometric") {
    d.ratio = need("ratio").get<double>();
    if (j.contains("scale")) d.scale = complex_from_json(j["scale"], path + ".scale");
  } else if (d.kind == "polynomial-power") {
    d.exponent = need("exponent").get<double>();
    if (j.contains("scale")) d.scale = complex_from_json(j["scale"], path + ".scale");
  } else if (d.kind == "sqrt-index") {
    // nothing further
  } else if (d.kind == "constant") {
    d.value = complex_from_json(need("value"), path + ".value");
  } else if (d.kind == "tabulated") {
    d.values = values_of(need("values"), path + ".values");
    const json& t = need("tail");
    if (!t.is_object()) throw SchemaError(path + ".tail", "expected an object");
    SeqDesc::Tail tail;
    tail.ratio = t.value("ratio", 1.0);
    tail.exponent = t.value("exponent", 0.0);
    tail.constant = t.value("constant", 1.0);
    tail.exact = t.value("exact", true);
    d.tail = tail;
  } else if (d.kind == "product") {
    d.args.push_back(desc_from_json(need("a"), path + ".a"));
    d.args.push_back(desc_from_json(need("b"), path + ".b"));
  } else if (d.kind == "shift-by") {
    d.k = need("k").get<int>();
    d.args.push_back(desc_from_json(need("a"), path + ".a"));
  } else if (d.kind == "conjugate" || d.kind == "reciprocal") {
    d.args.push_back(desc_from_json(need("a"), path + ".a"));
  } else {
    throw SchemaError(path + ".kind", "unknown sequence kind '" + d.kind + "'");
  }
  return d;
}

json check_to_json(const CheckSpec& c) {
  json j;
  j["type"] = c.type;
  if (c.n != 0) j["n"] = c.n;
  if (c.order != 0) j["order"] = c.order;
  if (c.count != 0) j["count"] = c.count;
  if (c.m != 0) j["m"] = c.m;
  if (c.csv_n != 0) j["csv-n"] = c.csv_n;
  if (c.seed != 0) j["seed"] = c.seed;
  if (c.dagger) j["dagger"] = true;
  if (!c.core.empty()) j["core"] = c.core;
  if (!c.form.empty()) j["form"] = c.form;
  if (!c.expect.empty()) j["expect"] = c.expect;
  if (!c.csv.empty()) j["csv"] = c.csv;
  if (c.vector) j["vector"] = desc_to_json(*c.vector);
  if (c.tolerance != 0.0) j["tolerance"] = c.tolerance;
  return j;
}

CheckSpec check_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  if (!j.contains("type") || !j["type"].is_string())
    throw SchemaError(path + ".type", "missing check type");
  CheckSpec c;
  c.type = j["type"].get<std::string>();
  c.n = j.value("n", std::int64_t{0});
  c.order = j.value("order", std::int64_t{0});
  c.count = j.value("count", std::int64_t{0});
  c.m = j.value("m", std::int64_t{0});
  c.csv_n = j.value("csv-n", std::int64_t{0});
  c.seed = j.value("seed", std::uint64_t{0});
  c.dagger = j.value("dagger", false);
  c.core = j.value("core", std::string{});
  c.form = j.value("form", std::string{});
  c.expect = j.value("expect", std::string{});
  c.csv = j.value("csv", std::string{});
  if (j.contains("vector")) c.vector = desc_from_json(j["vector"], path + ".vector");
  c.tolerance = j.value("tolerance", 0.0);

  static const std::vector<std::string> kKnown = {
      "biorthogonality",    "ladder",        "commutator",
      "membership",         "compare-domains", "lemma22",
      "riesz-consistency",  "hermite-demo",  "closedness-witness"};
  if (std::find(kKnown.begin(), kKnown.end(), c.type) == kKnown.end())
    throw SchemaError(path + ".type", "unknown check type '" + c.type + "'");
  if (c.tolerance < 0.0)
    throw SchemaError(path + ".tolerance", "tolerances must be positive");
  return c;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw SchemaError("$", std::string("invalid json: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("$", "expected a top-level object");
  Scenario s;
  if (!j.contains("scale")) throw SchemaError("scale", "required");
  s.scale = desc_from_json(j["scale"], "scale");
  if (!j.contains("alpha")) throw SchemaError("alpha", "required");
  s.alpha = desc_from_json(j["alpha"], "alpha");
  if (j.contains("candidates")) {
    if (!j["candidates"].is_array())
      throw SchemaError("candidates", "expected an array");
    for (std::size_t i = 0; i < j["candidates"].size(); ++i)
      s.candidates.push_back(desc_from_json(
          j["candidates"][i], "candidates[" + std::to_string(i) + "]"));
  }
  if (j.contains("checks")) {
    if (!j["checks"].is_array()) throw SchemaError("checks", "expected an array");
    for (std::size_t i = 0; i < j["checks"].size(); ++i)
      s.checks.push_back(
          check_from_json(j["checks"][i], "checks[" + std::to_string(i) + "]"));
  }
  s.seed = j.value("seed", std::uint64_t{1});
  s.tolerance_scale = j.value("tolerance-scale", 1.0);
  if (!(s.tolerance_scale > 0.0))
    throw SchemaError("tolerance-scale", "must be positive");
  return s;
}

std::string emit_scenario(const Scenario& s) {
  json j;
  j["scale"] = desc_to_json(s.scale);
  j["alpha"] = desc_to_json(s.alpha);
  json cands = json::array();
  for (const auto& c : s.candidates) cands.push_back(desc_to_json(c));
  j["candidates"] = std::move(cands);
  json checks = json::array();
  for (const auto& c : s.checks) checks.push_back(check_to_json(c));
  j["checks"] = std::move(checks);
  j["seed"] = s.seed;
  j["tolerance-scale"] = s.tolerance_scale;
  return j.dump(2) + "\n";
}

Scenario scenario_defaults() {
  Scenario s;
  s.scale = SeqDesc::geometric(2.0);
  s.alpha = SeqDesc::sqrt_index();
  s.candidates = {SeqDesc::geometric(0.5)};
  CheckSpec bio;
  bio.type = "biorthogonality";
  bio.n = 32;
  CheckSpec ladder;
  ladder.type = "ladder";
  ladder.n = 32;
  CheckSpec comm;
  comm.type = "commutator";
  comm.n = 32;
  s.checks = {bio, ladder, comm};
  return s;
}

Scenario demo_corollary33_scenario() {
  Scenario s;
  s.scale = SeqDesc::geometric(2.0);
  s.alpha = SeqDesc::sqrt_index();
  CheckSpec comm;
  comm.type = "commutator";
  comm.n = 32;
  comm.count = 100;
  s.checks = {comm};
  return s;
}

Scenario demo_hermite_scenario() {
  Scenario s;
  s.scale = SeqDesc::polynomial_power(1.0);
  s.alpha = SeqDesc::sqrt_index();
  CheckSpec h;
  h.type = "hermite-demo";
  h.n = 16;
  s.checks = {h};
  return s;
}

Scenario lemma22_scenario(std::int64_t order, std::uint64_t seed) {
  Scenario s;
  s.scale = SeqDesc::geometric(2.0);
  s.alpha = SeqDesc::sqrt_index();
  s.seed = seed ? seed : 1;
  CheckSpec l;
  l.type = "lemma22";
  l.order = order;
  l.count = 100;
  s.checks = {l};
  return s;
}

namespace {

struct RunContext {
  ops::ScaleOperator scale;
  Sequence alpha;
  std::vector<ops::Vector> candidates;
  double tolerance_scale;
  std::uint64_t seed;
};

std::uint64_t seed_for(const RunContext& ctx, const CheckSpec& c,
                       std::size_t index) {
  if (c.seed != 0) return c.seed;
  return ctx.seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
}

double tol_for(const RunContext& ctx, const CheckSpec& c, double fallback) {
  double base = c.tolerance > 0.0 ? c.tolerance : fallback;
  return base * ctx.tolerance_scale;
}

ops::CoreKind core_of(const std::string& name) {
  if (name.empty() || name == "diagonal") return ops::CoreKind::Diagonal;
  if (name == "lower-shift") return ops::CoreKind::LowerShift;
  if (name == "raise-shift") return ops::CoreKind::RaiseShift;
  throw SchemaError("core", "unknown core '" + name + "'");
}

ops::Form form_of(const std::string& name) {
  if (name.empty() || name == "conjugated") return ops::Form::Conjugated;
  if (name == "formal-series") return ops::Form::FormalSeries;
  throw SchemaError("form", "unknown form '" + name + "'");
}

json verdict_to_json(const Verdict& v) {
  json j;
  j["outcome"] = to_string(v.outcome);
  if (const auto* a = std::get_if<AnnotationEvidence>(&v.evidence)) {
    j["evidence"] = "annotation";
    j["rule"] = a->rule;
    j["ratio"] = a->annotation.ratio.value();
    j["exponent"] = a->annotation.exponent;
    j["exact"] = a->annotation.exact();
  } else if (const auto* p = std::get_if<ProbeEvidence>(&v.evidence)) {
    j["evidence"] = "probe";
    j["rule"] = p->rule;
    json sums = json::array();
    for (auto [depth, sum] : p->partial_sums)
      sums.push_back(json::array({depth, sum}));
    j["partial-sums"] = std::move(sums);
    j["ratio-window"] = json::array({p->ratio_min, p->ratio_max});
    if (p->tail_bound) j["tail-bound"] = *p->tail_bound;
  }
  return j;
}

json membership_to_json(const domain::MembershipReport& rep) {
  json j;
  json conds = json::array();
  for (const auto& c : rep.conditions) {
    json cj;
    cj["name"] = c.name;
    cj["series"] = c.series;
    cj["verdict"] = verdict_to_json(c.verdict);
    conds.push_back(std::move(cj));
  }
  j["conditions"] = std::move(conds);
  j["overall"] = to_string(rep.overall);
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

struct CheckResult {
  std::string outcome;
  json evidence;
};

double relative_defect(const std::vector<cplx>& got, seq::index_t slot,
                       cplx want) {
  double worst = 0.0;
  for (seq::index_t m = 0; m < seq::index_t(got.size()); ++m) {
    cplx expect = (m == slot) ? want : cplx{};
    worst = std::max(worst, std::abs(got[size_t(m)] - expect));
  }
  double denom = std::abs(want) > 0.0 ? std::abs(want) : 1.0;
  return worst / denom;
}

CheckResult run_biorthogonality(const RunContext& ctx, const CheckSpec& c,
                                json& params) {
  seq::index_t n = c.n > 0 ? c.n : 64;
  double tol = tol_for(ctx, c, 1e-12);
  params["n"] = n;
  params["tolerance"] = tol;
  double worst = ops::biorthogonality_check(ctx.scale, n);
  json ev;
  ev["max-defect"] = worst;
  return {worst <= tol ? "pass" : "fail", std::move(ev)};
}

CheckResult run_ladder(const RunContext& ctx, const CheckSpec& c,
                       json& params) {
  seq::index_t n = c.n > 0 ? c.n : 64;
  double tol = tol_for(ctx, c, 1e-12);
  params["n"] = n;
  params["tolerance"] = tol;

  auto mk = [&](ops::CoreKind kind, bool dagger) {
    return ops::make_operator(kind, ctx.alpha, ctx.scale,
                              ops::Form::Conjugated, dagger);
  };
  auto h = mk(ops::CoreKind::Diagonal, false);
  auto a = mk(ops::CoreKind::LowerShift, false);
  auto b = mk(ops::CoreKind::RaiseShift, false);
  auto hd = mk(ops::CoreKind::Diagonal, true);
  auto ad = mk(ops::CoreKind::LowerShift, true);
  auto bd = mk(ops::CoreKind::RaiseShift, true);

  const seq::index_t depth = n + 2;
  double worst = 0.0;
  for (seq::index_t k = 0; k < n; ++k) {
    auto [phi_k, psi_k] = ops::basis_vectors(ctx.scale, k);
    auto [phi_k1, psi_k1] = ops::basis_vectors(ctx.scale, k + 1);
    double tk = ctx.scale.weight(k);
    double tk1 = ctx.scale.weight(k + 1);
    cplx ak = ctx.alpha.eval(k);
    cplx ak1 = ctx.alpha.eval(k + 1);

    worst = std::max(worst, relative_defect(ops::apply(h, phi_k, depth), k, ak * tk));
    worst = std::max(worst,
                     relative_defect(ops::apply(a, phi_k1, depth), k, ak1 * tk));
    worst = std::max(
        worst, relative_defect(ops::apply(b, phi_k, depth), k + 1, ak1 * tk1));
    worst = std::max(worst, relative_defect(ops::apply(hd, psi_k, depth), k,
                                            std::conj(ak) / tk));
    worst = std::max(worst, relative_defect(ops::apply(ad, psi_k, depth), k + 1,
                                            std::conj(ak1) / tk1));
    worst = std::max(worst, relative_defect(ops::apply(bd, psi_k1, depth), k,
                                            std::conj(ak1) / tk));
  }
  // lowering annihilates the bottom of the ladder
  {
    auto [phi_0, psi_0] = ops::basis_vectors(ctx.scale, 0);
    auto out = ops::apply(a, phi_0, depth);
    for (const auto& v : out) worst = std::max(worst, std::abs(v));
  }

  json ev;
  ev["max-relative-defect"] = worst;
  return {worst <= tol ? "pass" : "fail", std::move(ev)};
}

CheckResult run_commutator(const RunContext& ctx, const CheckSpec& c,
                           json& params) {
  seq::index_t n = c.n > 0 ? c.n : 32;
  std::int64_t count = c.count > 0 ? c.count : 100;
  double tol = tol_for(ctx, c, 1e-12);
  params["n"] = n;
  params["count"] = count;
  params["tolerance"] = tol;

  auto a = ops::make_operator(ops::CoreKind::LowerShift, ctx.alpha, ctx.scale,
                              ops::Form::Conjugated);
  auto b = ops::make_operator(ops::CoreKind::RaiseShift, ctx.alpha, ctx.scale,
                              ops::Form::Conjugated);
  auto comm = ops::commutator(a, b);

  bool identity_band =
      comm.bands().size() == 1 && comm.bands().count(0) == 1 &&
      seq::symbolically_equal(comm.bands().at(0), Sequence::constant(1.0));

  std::mt19937_64 rng(seed_for(ctx, c, 2));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = 0.0;
  for (std::int64_t i = 0; i < count; ++i) {
    std::vector<cplx> coeffs(static_cast<std::size_t>(n));
    for (auto& v : coeffs) v = cplx(unit(rng), unit(rng));
    auto out = ops::apply(comm, ops::Vector::from_values(coeffs), n);
    for (seq::index_t m = 0; m < n; ++m)
      worst = std::max(worst, std::abs(out[size_t(m)] - coeffs[size_t(m)]));
  }

  json ev;
  ev["identity-band"] = identity_band;
  ev["max-apply-defect"] = worst;
  return {identity_band && worst <= tol ? "pass" : "fail", std::move(ev)};
}

CheckResult run_membership(const RunContext& ctx, const CheckSpec& c,
                           json& params) {
  if (!c.vector) throw SchemaError("vector", "membership check needs a vector");
  auto op = ops::make_operator(core_of(c.core), ctx.alpha, ctx.scale,
                               form_of(c.form), c.dagger);
  ops::Vector xi{build_sequence(*c.vector)};
  params["core"] = c.core.empty() ? "diagonal" : c.core;
  params["form"] = c.form.empty() ? "conjugated" : c.form;
  if (c.dagger) params["dagger"] = true;
  if (!c.expect.empty()) params["expect"] = c.expect;

  auto rep = domain::membership(op, xi);
  json ev = membership_to_json(rep);

  std::string outcome;
  if (rep.overall == Outcome::Inconclusive)
    outcome = "inconclusive";
  else if (c.expect.empty())
    outcome = "pass";
  else if ((c.expect == "converges" && rep.overall == Outcome::Converges) ||
           (c.expect == "diverges" && rep.overall == Outcome::Diverges))
    outcome = "pass";
  else
    outcome = "fail";
  return {outcome, std::move(ev)};
}

CheckResult run_compare_domains(const RunContext& ctx, const CheckSpec& c,
                                json& params) {
  auto a = ops::make_operator(core_of(c.core), ctx.alpha, ctx.scale,
                              ops::Form::Conjugated, c.dagger);
  auto b = ops::make_operator(core_of(c.core), ctx.alpha, ctx.scale,
                              ops::Form::FormalSeries, c.dagger);
  params["core"] = c.core.empty() ? "diagonal" : c.core;
  if (!c.expect.empty()) params["expect"] = c.expect;

  auto cmp = domain::compare_domains(a, b, ctx.candidates);
  auto indices = [](const std::vector<std::size_t>& v) {
    json arr = json::array();
    for (auto i : v) arr.push_back(i);
    return arr;
  };
  json ev;
  ev["in-conjugated-only"] = indices(cmp.in_a_only);
  ev["in-formal-series-only"] = indices(cmp.in_b_only);
  ev["in-both"] = indices(cmp.in_both);
  ev["in-neither"] = indices(cmp.in_neither);
  ev["undecided"] = indices(cmp.undecided);

  std::string outcome = "pass";
  if (c.expect == "formal-series-only-nonempty")
    outcome = cmp.in_b_only.empty() ? "fail" : "pass";
  else if (c.expect == "formal-series-only-empty")
    outcome = cmp.in_b_only.empty() ? "pass" : "fail";
  else if (!c.expect.empty())
    throw SchemaError("expect", "unknown expectation '" + c.expect + "'");
  else if (ctx.candidates.size() > 0 &&
           cmp.undecided.size() == ctx.candidates.size())
    outcome = "inconclusive";
  return {outcome, std::move(ev)};
}

CheckResult run_lemma22(const RunContext& ctx, const CheckSpec& c,
                        json& params) {
  std::int64_t count = c.count > 0 ? c.count : 100;
  double recon_tol = tol_for(ctx, c, 1e-10);
  double frame_tol = 1e-9 * ctx.tolerance_scale;
  double onb_tol = 1e-10 * ctx.tolerance_scale;
  params["count"] = count;
  if (c.order > 0) params["order"] = c.order;
  params["seed"] = seed_for(ctx, c, 5);

  std::mt19937_64 rng(seed_for(ctx, c, 5));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  double worst_recon = 0.0, worst_phi = 0.0, worst_psi = 0.0, worst_onb = 0.0;
  int resamples = 0;
  for (std::int64_t i = 0; i < count; ++i) {
    std::size_t order =
        c.order > 0 ? std::size_t(c.order) : std::size_t(2 + (i % 15));
    finite::DenseMatrix t(order);
    while (true) {
      for (std::size_t r = 0; r < order; ++r)
        for (std::size_t col = 0; col < order; ++col)
          t.at(r, col) = cplx(unit(rng), unit(rng));
      auto svd = finite::svd_small(t);
      if (svd.singular_values.back() > 1e-6) break;
      ++resamples;
    }
    auto [u, p] = finite::polar_decompose(t);
    worst_recon = std::max(
        worst_recon, u.multiply(p).subtract(t.adjoint()).max_norm());
    auto rep = finite::lemma22_check(t);
    worst_phi = std::max(worst_phi, rep.phi_residual);
    worst_psi = std::max(worst_psi, rep.psi_residual);
    worst_onb = std::max(worst_onb, rep.orthonormality_defect);
  }

  json ev;
  ev["max-polar-reconstruction"] = worst_recon;
  ev["max-phi-residual"] = worst_phi;
  ev["max-psi-residual"] = worst_psi;
  ev["max-orthonormality-defect"] = worst_onb;
  ev["resamples"] = resamples;
  bool ok = worst_recon <= recon_tol && worst_phi <= frame_tol &&
            worst_psi <= frame_tol && worst_onb <= onb_tol;
  return {ok ? "pass" : "fail", std::move(ev)};
}

CheckResult run_riesz_consistency(const RunContext& ctx, const CheckSpec& c,
                                  json& params) {
  std::int64_t count = c.count > 0 ? c.count : 20;
  double tol = tol_for(ctx, c, 1e-10);
  params["count"] = count;
  if (c.order > 0) params["order"] = c.order;
  params["seed"] = seed_for(ctx, c, 6);
  params["tolerance"] = tol;

  std::mt19937_64 rng(seed_for(ctx, c, 6));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> eigen(0.5, 2.0);

  double worst_diff = 0.0, worst_adj = 0.0;
  for (std::int64_t i = 0; i < count; ++i) {
    std::size_t order =
        c.order > 0 ? std::size_t(c.order) : std::size_t(4 + (i % 13));
    finite::DenseMatrix g(order);
    for (std::size_t r = 0; r < order; ++r)
      for (std::size_t col = 0; col < order; ++col)
        g.at(r, col) = cplx(unit(rng), unit(rng));
    auto svd = finite::svd_small(g);
    // Hermitian positive, well-conditioned: Q diag(lambda) Q*
    finite::DenseMatrix t(order);
    std::vector<double> lambda(order);
    for (auto& l : lambda) l = eigen(rng);
    for (std::size_t r = 0; r < order; ++r)
      for (std::size_t col = 0; col < order; ++col) {
        cplx acc{};
        for (std::size_t k = 0; k < order; ++k)
          acc += svd.u.at(r, k) * lambda[k] * std::conj(svd.u.at(col, k));
        t.at(r, col) = acc;
      }
    auto rep = finite::riesz_consistency_check(t, ctx.alpha, order);
    worst_diff = std::max({worst_diff, rep.h_difference, rep.a_difference,
                           rep.b_difference});
    if (rep.h_adjoint_defect)
      worst_adj = std::max({worst_adj, *rep.h_adjoint_defect,
                            *rep.a_adjoint_defect, *rep.b_adjoint_defect});
  }

  json ev;
  ev["max-form-difference"] = worst_diff;
  ev["max-adjoint-defect"] = worst_adj;
  bool ok = worst_diff <= tol && worst_adj <= tol;
  return {ok ? "pass" : "fail", std::move(ev)};
}

CheckResult run_hermite_demo(const RunContext& ctx, const CheckSpec& c,
                             json& params) {
  int count = c.n > 0 ? int(c.n) : 16;
  int basis = 21;
  int nodes = c.m > 0 ? int(c.m) : std::max(96, 2 * basis + 16);
  double gram_tol = 1e-8 * ctx.tolerance_scale;
  double ladder_tol = 1e-6 * ctx.tolerance_scale;
  double number_tol = 1e-5 * ctx.tolerance_scale;
  double coeff_tol = tol_for(ctx, c, 1e-12);
  params["n"] = count;
  params["m"] = nodes;

  auto rule = hermite::gauss_hermite_rule(nodes);
  std::vector<hermite::GridFunction> f;
  for (int k = 0; k <= basis; ++k) f.push_back(hermite::sample(rule, k));

  double gram_defect = 0.0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      cplx g = hermite::l2_inner(f[size_t(i)], f[size_t(j)]);
      double target = i == j ? 1.0 : 0.0;
      gram_defect = std::max(gram_defect, std::abs(g - target));
    }

  double lower_defect = 0.0, raise_defect = 0.0, number_defect = 0.0;
  for (int k = 0; k <= 20; ++k) {
    auto low = hermite::ladder_apply(hermite::LadderMode::Lower, f[size_t(k)]);
    for (std::size_t i = 0; i < low.values.size(); ++i)
      low.values[i] -= k > 0 ? std::sqrt(double(k)) * f[size_t(k - 1)].values[i]
                             : cplx{};
    lower_defect = std::max(lower_defect, hermite::l2_norm(low));

    if (k <= 19) {
      auto hi = hermite::ladder_apply(hermite::LadderMode::Raise, f[size_t(k)]);
      for (std::size_t i = 0; i < hi.values.size(); ++i)
        hi.values[i] -= std::sqrt(double(k + 1)) * f[size_t(k + 1)].values[i];
      raise_defect = std::max(raise_defect, hermite::l2_norm(hi));
    }

    auto num = hermite::ladder_apply(hermite::LadderMode::Number, f[size_t(k)]);
    for (std::size_t i = 0; i < num.values.size(); ++i)
      num.values[i] -= double(k + 1) * f[size_t(k)].values[i];
    number_defect = std::max(number_defect, hermite::l2_norm(num));
  }

  auto scenario_rep = hermite::example34_scenario(ctx.scale, count);

  json ev;
  ev["gram-defect"] = gram_defect;
  ev["lower-defect"] = lower_defect;
  ev["raise-defect"] = raise_defect;
  ev["number-defect"] = number_defect;
  ev["eigen-residual"] = scenario_rep.eigen_residual;
  ev["ladder-residuals"] = json::array(
      {scenario_rep.lower_residual, scenario_rep.raise_residual});
  ev["commutator-identity"] = scenario_rep.commutator_identity_band;

  if (!c.csv.empty()) {
    std::ofstream out(c.csv);
    if (!out) throw std::runtime_error("cannot open csv path " + c.csv);
    hermite::export_csv(out, int(c.csv_n), *rule);
    ev["csv"] = c.csv;
  }

  bool ok = gram_defect <= gram_tol && lower_defect <= ladder_tol &&
            raise_defect <= ladder_tol && number_defect <= number_tol &&
            scenario_rep.pass(coeff_tol);
  return {ok ? "pass" : "fail", std::move(ev)};
}

CheckResult run_closedness_witness(const RunContext& ctx, const CheckSpec& c,
                                   json& params) {
  auto op = ops::make_operator(core_of(c.core), ctx.alpha, ctx.scale,
                               ops::Form::Conjugated, c.dagger);
  if (!c.expect.empty()) params["expect"] = c.expect;

  auto witness = domain::closedness_witness(op);
  json ev;
  ev["witness"] = witness.has_value();
  if (witness) {
    ev["truncation-tail"] = witness->truncation_tail;
    ev["image-cauchy-gap"] = witness->image_cauchy_gap;
    ev["limit-membership"] = membership_to_json(witness->limit_membership);
    ev["statement"] = witness->statement;
  }

  std::string outcome = "pass";
  if (c.expect == "witness")
    outcome = witness ? "pass" : "fail";
  else if (c.expect == "none")
    outcome = witness ? "fail" : "pass";
  else if (!c.expect.empty())
    throw SchemaError("expect", "unknown expectation '" + c.expect + "'");
  return {outcome, std::move(ev)};
}

}  // namespace

Report run_scenario(const Scenario& s) {
  RunContext ctx{ops::ScaleOperator(build_sequence(s.scale)),
                 build_sequence(s.alpha),
                 {},
                 s.tolerance_scale,
                 s.seed};
  for (const auto& cand : s.candidates)
    ctx.candidates.push_back(ops::Vector{build_sequence(cand)});

  Report rep;
  rep.tool = kToolName;
  rep.version = kVersion;
  rep.seed = s.seed;

  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    const CheckSpec& c = s.checks[i];
    json params;
    params["type"] = c.type;
    CheckResult res;
    try {
      if (c.type == "biorthogonality")
        res = run_biorthogonality(ctx, c, params);
      else if (c.type == "ladder")
        res = run_ladder(ctx, c, params);
      else if (c.type == "commutator")
        res = run_commutator(ctx, c, params);
      else if (c.type == "membership")
        res = run_membership(ctx, c, params);
      else if (c.type == "compare-domains")
        res = run_compare_domains(ctx, c, params);
      else if (c.type == "lemma22")
        res = run_lemma22(ctx, c, params);
      else if (c.type == "riesz-consistency")
        res = run_riesz_consistency(ctx, c, params);
      else if (c.type == "hermite-demo")
        res = run_hermite_demo(ctx, c, params);
      else if (c.type == "closedness-witness")
        res = run_closedness_witness(ctx, c, params);
      else
        throw SchemaError("type", "unknown check '" + c.type + "'");
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error("check '" + c.type + "' (index " +
                               std::to_string(i) + "): " + e.what());
    }

    CheckRecord record;
    record.name = c.type;
    record.outcome = res.outcome;
    record.parameters_json = params.dump();
    record.evidence_json = res.evidence.dump();
    rep.records.push_back(std::move(record));

    if (res.outcome == "pass")
      ++rep.pass;
    else if (res.outcome == "fail")
      ++rep.fail;
    else
      ++rep.inconclusive;
  }
  return rep;
}

std::string render_report(const Report& r, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j;
    j["tool"] = r.tool;
    j["version"] = r.version;
    j["seed"] = r.seed;
    json checks = json::array();
    for (const auto& rec : r.records) {
      json cj;
      cj["name"] = rec.name;
      cj["parameters"] = json::parse(rec.parameters_json);
      cj["outcome"] = rec.outcome;
      cj["evidence"] = json::parse(rec.evidence_json);
      checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["summary"] = json{{"pass", r.pass},
                        {"fail", r.fail},
                        {"inconclusive", r.inconclusive}};
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  for (const auto& rec : r.records) {
    std::string tag = rec.outcome;
    std::transform(tag.begin(), tag.end(), tag.begin(), ::toupper);
    out << tag << " " << rec.name << " " << rec.parameters_json << "\n";
  }
  out << "summary: pass=" << r.pass << " fail=" << r.fail
      << " inconclusive=" << r.inconclusive << "\n";
  return out.str();
}

void emit_report(const Report& r, ReportFormat format, std::ostream& out) {
  out << render_report(r, format);
  if (!out) throw std::runtime_error("failed to write report");
}

int exit_code(const Report& r) { return r.fail > 0 ? 1 : 0; }

}  // namespace riesz::cli
