#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "riesz/operator_core.hpp"
#include "riesz/seq.hpp"

namespace riesz::finite {

using cplx = std::complex<double>;

class SingularInput : public std::runtime_error {
 public:
  SingularInput() : std::runtime_error("matrix is numerically singular") {}
};

class SvdConvergenceFailure : public std::runtime_error {
 public:
  explicit SvdConvergenceFailure(double residual)
      : std::runtime_error("jacobi sweeps did not converge"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

enum class MatrixTag { General, Unitary, Positive };

/// Small dense complex matrix, row-major.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t order)
      : order_(order), data_(order * order, cplx{}) {}

  static DenseMatrix identity(std::size_t order);
  static DenseMatrix diagonal(const std::vector<cplx>& entries);

  std::size_t order() const { return order_; }
  cplx& at(std::size_t i, std::size_t j) { return data_[i * order_ + j]; }
  const cplx& at(std::size_t i, std::size_t j) const {
    return data_[i * order_ + j];
  }

  DenseMatrix adjoint() const;
  DenseMatrix multiply(const DenseMatrix& rhs) const;
  DenseMatrix subtract(const DenseMatrix& rhs) const;
  double max_norm() const;
  std::vector<cplx> column(std::size_t j) const;

  MatrixTag tag = MatrixTag::General;

 private:
  std::size_t order_;
  std::vector<cplx> data_;
};

struct SvdResult {
  DenseMatrix u;
  std::vector<double> singular_values;  // nonincreasing
  DenseMatrix v;
  int sweeps = 0;
  double off_diagonal = 0.0;
};

/// One-sided Jacobi SVD for orders <= 64.  Sweep cap 30, off-diagonal
/// threshold 1e-14.  Left singular vectors are phase-normalized so that the
/// first nonzero component has nonnegative real part.
SvdResult svd_small(const DenseMatrix& m);

struct PolarResult {
  DenseMatrix unitary;   // U with T* = U P
  DenseMatrix positive;  // P = |T*|
};

/// Polar factorization T* = U P of the adjoint of an invertible matrix.
PolarResult polar_decompose(const DenseMatrix& tmat);

struct Lemma22Report {
  double phi_residual = 0.0;       // max_n ||T e_n - P e'_n||
  double psi_residual = 0.0;       // max_n ||(T^-1)* e_n - P^-1 e'_n||
  double orthonormality_defect = 0.0;  // || Gram(e') - I ||_max
};

/// Checks the polar-decomposition basis change: with e'_n = U* e_n the
/// frame vectors are phi_n = P e'_n and psi_n = P^-1 e'_n, and {e'_n} is
/// orthonormal.
Lemma22Report lemma22_check(const DenseMatrix& tmat);

struct RieszConsistencyReport {
  double h_difference = 0.0;  // || H - H_series ||_max, conjugated vs formal
  double a_difference = 0.0;
  double b_difference = 0.0;
  std::optional<double> h_adjoint_defect;  // || H_dagger - H* ||_max
  std::optional<double> a_adjoint_defect;
  std::optional<double> b_adjoint_defect;
};

/// At finite order the conjugated and series forms agree exactly, and for
/// Hermitian positive T each dagger matrix equals the conjugate transpose.
RieszConsistencyReport riesz_consistency_check(const DenseMatrix& tmat,
                                               const seq::Sequence& alpha,
                                               std::size_t order);

/// diag(t_0 .. t_{N-1}) of a scale operator, tagged positive.
DenseMatrix truncate(const ops::ScaleOperator& scale, std::size_t order);

std::vector<cplx> solve(const DenseMatrix& a, std::vector<cplx> b);
DenseMatrix inverse(const DenseMatrix& a);

bool verify_tag(const DenseMatrix& m, MatrixTag tag);

}  // namespace riesz::finite
