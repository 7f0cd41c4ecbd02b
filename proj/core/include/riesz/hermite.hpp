#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "riesz/operator_core.hpp"

namespace riesz::hermite {

using cplx = std::complex<double>;

class RuleMismatch : public std::invalid_argument {
 public:
  RuleMismatch() : std::invalid_argument("grid functions use different rules") {}
};

struct QuadratureRule {
  enum class Kind { GaussHermite, Uniform };
  Kind kind;
  std::vector<double> nodes;
  std::vector<double> weights;
  double half_width = 0.0;  // uniform rules only
};

using RulePtr = std::shared_ptr<const QuadratureRule>;

/// Gauss-Hermite rule with the weight function absorbed into the weights:
/// sum w_i g(x_i) integrates g = polynomial * gaussian exactly up to
/// polynomial degree 2m-1.
RulePtr gauss_hermite_rule(int node_count);

/// Trapezoid rule on [-L, L].
RulePtr uniform_rule(int node_count, double half_width);

bool same_rule(const QuadratureRule& a, const QuadratureRule& b);

/// Orthonormal Hermite function f_n(t), evaluated by the stable three-term
/// recurrence seeded with f_0(t) = pi^{-1/4} exp(-t^2/2).  Underflow to
/// zero far outside the classically allowed region is permitted.
double hermite_eval(int n, double t);

struct GridFunction {
  RulePtr rule;
  std::vector<cplx> values;
};

GridFunction sample(RulePtr rule, int hermite_index);
GridFunction sample_fn(RulePtr rule, const std::vector<cplx>& coefficients);

cplx l2_inner(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);

enum class LadderMode { Lower, Raise, Number };

/// lower = (t f + f') / sqrt(2), raise = (t f - f') / sqrt(2),
/// number = lower after raise.  On Gauss-Hermite rules the derivative is
/// taken in coefficient space through f_n' = (sqrt(n) f_{n-1} -
/// sqrt(n+1) f_{n+1}) / sqrt(2); uniform rules use centered differences.
GridFunction ladder_apply(LadderMode mode, const GridFunction& f);

/// c_n = (f | f_n) for n < count, as a finite-support vector.
ops::Vector coefficientize(const GridFunction& f, int count);

GridFunction reconstruct(const ops::Vector& coefficients, int count,
                         RulePtr rule);

struct Example34Report {
  double eigen_residual = 0.0;   // H phi_n = (n+1) phi_n, relative
  double lower_residual = 0.0;   // A phi_{n+1} = sqrt(n+1) phi_n, relative
  double raise_residual = 0.0;   // B phi_n = sqrt(n+1) phi_{n+1}, relative
  bool commutator_identity_band = false;
  double commutator_apply_defect = 0.0;

  bool pass(double tolerance) const {
    return eigen_residual <= tolerance && lower_residual <= tolerance &&
           raise_residual <= tolerance && commutator_identity_band &&
           commutator_apply_defect <= tolerance;
  }
};

/// Coefficient-space check of the oscillator scenario: the number operator
/// diagonal (n+1), the sqrt-weighted shifts, and the ladder commutator,
/// conjugated by the given scale.
Example34Report example34_scenario(const ops::ScaleOperator& scale, int count);

/// Writes "t,re,im" samples of f_n on the rule's nodes.
void export_csv(std::ostream& out, int hermite_index, const QuadratureRule& rule);

}  // namespace riesz::hermite
