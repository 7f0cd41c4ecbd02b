#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "riesz/growth.hpp"

namespace riesz {

/// Three-valued convergence judgment.  Inconclusive is a first-class
/// outcome and is never silently coerced to either side.
enum class Outcome { Converges, Diverges, Inconclusive };

const char* to_string(Outcome o);

/// Verdict backed by the exact annotation rule.
struct AnnotationEvidence {
  seq::GrowthAnnotation annotation;
  std::string rule;
};

/// Verdict backed by the numeric partial-sum / ratio probe.  A probe may
/// only claim Converges or Diverges when a monotone comparison bound
/// (geometric or p-series) closes the tail; otherwise it reports
/// Inconclusive with the collected data.
struct ProbeEvidence {
  std::array<std::pair<std::int64_t, double>, 3> partial_sums{};  // at 2^10, 2^14, 2^17
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  std::string rule;
  std::optional<double> tail_bound;
};

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  std::variant<AnnotationEvidence, ProbeEvidence> evidence;

  bool converges() const { return outcome == Outcome::Converges; }
  bool diverges() const { return outcome == Outcome::Diverges; }
  bool inconclusive() const { return outcome == Outcome::Inconclusive; }
  bool from_annotation() const {
    return std::holds_alternative<AnnotationEvidence>(evidence);
  }
};

}  // namespace riesz
