#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "riesz/seq.hpp"

namespace riesz::ops {

using seq::cplx;
using seq::index_t;
using seq::Sequence;

class ScaleMismatch : public std::invalid_argument {
 public:
  ScaleMismatch() : std::invalid_argument("operands have different scales") {}
};

/// Positive diagonal model of the conjugating operator: strictly positive
/// weights t_n on the reference basis.  Weights must carry a two-sided
/// (exact-asymptotic) growth annotation so that boundedness of both t and
/// 1/t is decidable.
class ScaleOperator {
 public:
  explicit ScaleOperator(Sequence weights);

  const Sequence& weights() const { return weights_; }
  Sequence inverse_weights() const { return seq::reciprocal(weights_); }
  double weight(index_t n) const;

  /// t_n bounded above, i.e. ratio < 1 or (ratio = 1 and exponent <= 0).
  bool forward_bounded() const;
  /// 1/t_n bounded above (symmetric rule for the reciprocal weights).
  bool inverse_bounded() const;

  bool same_as(const ScaleOperator& other) const;

 private:
  Sequence weights_;
};

enum class CoreKind { Diagonal, LowerShift, RaiseShift };
enum class Form { Conjugated, FormalSeries };

/// One elementary core in the chain an operator was assembled from.
/// kind/alpha here are post-dagger: alpha is already conjugated and
/// lower/raise already swapped when the operator is a dagger.
struct CoreTerm {
  CoreKind kind;
  Sequence alpha;
};

/// Banded operator on one-sided coefficient sequences: output coefficient m
/// receives w_d(m) * input(m + d) for each band (d, w_d).  Application is
/// formal and total; domain membership is a separate query that uses the
/// recorded core chains.
class OperatorSpec {
 public:
  OperatorSpec(ScaleOperator scale, bool dagger, Form form,
               std::vector<std::vector<CoreTerm>> chains,
               std::map<int, Sequence> bands);

  const ScaleOperator& scale() const { return scale_; }
  bool dagger() const { return dagger_; }
  Form form() const { return form_; }
  const std::map<int, Sequence>& bands() const { return bands_; }
  const std::vector<std::vector<CoreTerm>>& chains() const { return chains_; }

  /// t for a plain operator, 1/t for a dagger.
  Sequence effective_scale_weights() const;

 private:
  ScaleOperator scale_;
  bool dagger_;
  Form form_;
  std::vector<std::vector<CoreTerm>> chains_;
  std::map<int, Sequence> bands_;
};

/// Element of the sequence space in reference-basis coordinates.
struct Vector {
  Sequence coeffs;

  static Vector from_values(std::vector<cplx> values);
  static Vector basis(index_t n, cplx scale = 1.0);
  static Vector from_sequence(Sequence s) { return Vector{std::move(s)}; }
};

/// Shift cores consume alpha starting at index one: alpha_0 never enters a
/// ladder band, and the raising band vanishes at the zeroth output slot.
/// A dagger swaps the conjugators, conjugates alpha and exchanges the two
/// shift directions.
OperatorSpec make_operator(CoreKind core, Sequence alpha, ScaleOperator scale,
                           Form form, bool dagger = false);

/// First n_out output coefficients, computed from the band formula.
std::vector<cplx> apply(const OperatorSpec& op, const Vector& xi,
                        index_t n_out);

/// (phi_n, psi_n) = (t_n e_n, e_n / t_n).
std::pair<Vector, Vector> basis_vectors(const ScaleOperator& scale, index_t n);

/// max_{n,m < count} |(phi_n | psi_m) - delta_nm|.
double biorthogonality_check(const ScaleOperator& scale, index_t count);

/// a after b (band convolution).  Throws ScaleMismatch unless the operands
/// share scale and dagger flag.
OperatorSpec compose(const OperatorSpec& a, const OperatorSpec& b);

/// compose(a,b) - compose(b,a) band-wise, with symbolic simplification of
/// the band weights where the closed-form algebra allows it.
OperatorSpec commutator(const OperatorSpec& a, const OperatorSpec& b);

cplx inner(const Vector& x, const Vector& y, index_t depth);

}  // namespace riesz::ops
