#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "riesz/seq.hpp"

namespace riesz::cli {

using seq::cplx;

class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field, std::string reason)
      : std::runtime_error(field + ": " + reason),
        field_(std::move(field)),
        reason_(std::move(reason)) {}
  const std::string& field() const { return field_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

/// Tagged-union sequence descriptor mirroring the sequence constructors:
/// finite-support, geometric, polynomial-power, sqrt-index, constant,
/// tabulated plus the combinators product, shift-by, conjugate, reciprocal.
struct SeqDesc {
  std::string kind;
  double ratio = 0.0;
  double exponent = 0.0;
  cplx scale = {1.0, 0.0};
  cplx value = {0.0, 0.0};
  std::vector<cplx> values;
  int k = 0;

  struct Tail {
    double ratio = 1.0;
    double exponent = 0.0;
    double constant = 1.0;
    bool exact = true;
    bool operator==(const Tail&) const = default;
  };
  std::optional<Tail> tail;
  std::vector<SeqDesc> args;

  bool operator==(const SeqDesc&) const = default;

  static SeqDesc geometric(double ratio, cplx scale = {1.0, 0.0});
  static SeqDesc polynomial_power(double exponent, cplx scale = {1.0, 0.0});
  static SeqDesc sqrt_index();
  static SeqDesc constant(cplx value);
  static SeqDesc finite_support(std::vector<cplx> values);
};

seq::Sequence build_sequence(const SeqDesc& desc);

struct CheckSpec {
  std::string type;
  std::int64_t n = 0;
  std::int64_t order = 0;
  std::int64_t count = 0;
  std::int64_t m = 0;
  std::int64_t csv_n = 0;
  std::uint64_t seed = 0;  // 0: derive from the scenario seed
  bool dagger = false;
  std::string core;    // diagonal | lower-shift | raise-shift
  std::string form;    // conjugated | formal-series
  std::string expect;
  std::string csv;     // output path for sampled values, empty = no export
  std::optional<SeqDesc> vector;
  double tolerance = 0.0;  // 0: per-check default

  bool operator==(const CheckSpec&) const = default;
};

struct Scenario {
  SeqDesc scale;
  SeqDesc alpha;
  std::vector<SeqDesc> candidates;
  std::vector<CheckSpec> checks;
  std::uint64_t seed = 1;
  double tolerance_scale = 1.0;

  bool operator==(const Scenario&) const = default;
};

Scenario scenario_defaults();
Scenario demo_hermite_scenario();
Scenario demo_corollary33_scenario();
Scenario lemma22_scenario(std::int64_t order, std::uint64_t seed);

/// Parses a scenario document.  Throws SchemaError naming the offending
/// field on invalid input.
Scenario parse_scenario(const std::string& text);
std::string emit_scenario(const Scenario& s);

struct CheckRecord {
  std::string name;
  std::string outcome;  // pass | fail | inconclusive
  std::string parameters_json;
  std::string evidence_json;
};

struct Report {
  std::string tool;
  std::string version;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> records;
  int pass = 0;
  int fail = 0;
  int inconclusive = 0;
};

/// Runs every check in order.  Inconclusive records propagate verdict
/// uncertainty only; errors raise exceptions instead.
Report run_scenario(const Scenario& s);

enum class ReportFormat { Json, Text };

std::string render_report(const Report& r, ReportFormat format);
void emit_report(const Report& r, ReportFormat format, std::ostream& out);

/// 0 when no check failed (inconclusive does not fail), 1 otherwise.
int exit_code(const Report& r);

}  // namespace riesz::cli
