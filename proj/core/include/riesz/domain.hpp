#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "riesz/operator_core.hpp"
#include "riesz/seq.hpp"
#include "riesz/verdict.hpp"

namespace riesz::domain {

/// Verdict from the exact annotation rule: sum |c_n|^2 with
/// |c_n| ~ C r^n (n+1)^p converges iff r < 1 or (r = 1 and p < -1/2);
/// diverges only for exact-asymptotic annotations with r > 1 or
/// (r = 1 and p >= -1/2); upper bounds in that region stay Inconclusive.
Verdict classify_annotation(const seq::GrowthAnnotation& g);

/// Numeric fallback: partial sums of |s_n|^2 at depths 2^10, 2^14, 2^17
/// plus term-ratio statistics over the tail window.  Converges/Diverges
/// only when a monotone comparison (geometric tail bound, non-vanishing
/// terms, harmonic comparison) closes the tail; otherwise Inconclusive.
Verdict probe_l2(const seq::Sequence& s);

/// One summability condition of a membership chain.
struct Condition {
  std::string name;     // C1 / C2 / C3 ... / S1
  std::string series;   // human-readable description of the series checked
  Verdict verdict;
};

/// Membership of a vector in the domain of an operator form.
///
/// Conjugated form, per elementary core in the chain:
///   C1       xi lies in the domain of the inverse conjugator
///   C2[i]    the core series applied so far exists in the space
///   C3[i]    that series lies in the domain of the conjugator
/// Formal-series form: the single condition
///   S1       the sum of squared term norms is finite
///
/// overall is the pure fold of the conditions: Converges when all converge,
/// Diverges when any diverges, Inconclusive otherwise.
struct MembershipReport {
  std::vector<Condition> conditions;
  Outcome overall = Outcome::Inconclusive;
  std::string note;

  bool member() const { return overall == Outcome::Converges; }
};

MembershipReport membership(const ops::OperatorSpec& op, const ops::Vector& xi);

/// Partition of candidate vectors by membership in two operator domains.
/// Indices refer to the candidates list; any candidate with an Inconclusive
/// verdict on either side lands in undecided.
struct DomainComparison {
  std::vector<std::size_t> in_a_only;
  std::vector<std::size_t> in_b_only;
  std::vector<std::size_t> in_both;
  std::vector<std::size_t> in_neither;
  std::vector<std::size_t> undecided;
};

DomainComparison compare_domains(const ops::OperatorSpec& a,
                                 const ops::OperatorSpec& b,
                                 const std::vector<ops::Vector>& candidates);

/// Weak-convergence probe of a partial-sum family against test vectors.
/// Converges only when every pairing is Cauchy within the stabilization
/// tolerance and a limit is identified coordinate-wise; finite probes can
/// never certify weak divergence, so the alternative is Inconclusive.
struct WeakProbeResult {
  Outcome outcome = Outcome::Inconclusive;
  std::vector<seq::cplx> limit_coefficients;  // first coordinates of eta
  double max_pairing_delta = 0.0;
  std::string note;
};

inline constexpr double kPairingStabilizationTol = 1e-10;
inline constexpr double kOracleAgreementTol = 1e-8;

WeakProbeResult weak_convergence_probe(const std::vector<ops::Vector>& partial_sums,
                                       const std::vector<ops::Vector>& test_vectors);

/// Concrete graph-limit escape certifying non-closedness: truncations
/// xi^(k) that converge to xi, images that converge, while xi itself fails
/// the membership chain.
struct ClosednessWitness {
  ops::Vector limit;
  std::vector<seq::cplx> image_limit;
  MembershipReport limit_membership;
  double truncation_tail;   // ||xi - xi^(K)|| at the deepest truncation
  double image_cauchy_gap;  // image distance between the two deepest truncations
  std::string statement;
};

/// Searches the non-closed regime (conjugator bounded, inverse conjugator
/// unbounded) for a certified witness.  Returns nullopt when the regime
/// precondition is unmet or no candidate from the search family verifies.
std::optional<ClosednessWitness> closedness_witness(const ops::OperatorSpec& op);

}  // namespace riesz::domain
