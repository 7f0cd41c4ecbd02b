#include "riesz/finite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace riesz::finite {

DenseMatrix DenseMatrix::identity(std::size_t order) {
  DenseMatrix m(order);
  for (std::size_t i = 0; i < order; ++i) m.at(i, i) = 1.0;
  m.tag = MatrixTag::Positive;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<cplx>& entries) {
  DenseMatrix m(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m.at(i, i) = entries[i];
  return m;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix m(order_);
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = 0; j < order_; ++j)
      m.at(i, j) = std::conj(at(j, i));
  return m;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& rhs) const {
  DenseMatrix m(order_);
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t k = 0; k < order_; ++k) {
      cplx aik = at(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < order_; ++j)
        m.at(i, j) += aik * rhs.at(k, j);
    }
  return m;
}

DenseMatrix DenseMatrix::subtract(const DenseMatrix& rhs) const {
  DenseMatrix m(order_);
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = 0; j < order_; ++j)
      m.at(i, j) = at(i, j) - rhs.at(i, j);
  return m;
}

double DenseMatrix::max_norm() const {
  double worst = 0.0;
  for (const auto& v : data_) worst = std::max(worst, std::abs(v));
  return worst;
}

std::vector<cplx> DenseMatrix::column(std::size_t j) const {
  std::vector<cplx> col(order_);
  for (std::size_t i = 0; i < order_; ++i) col[i] = at(i, j);
  return col;
}

bool verify_tag(const DenseMatrix& m, MatrixTag tag) {
  const std::size_t n = m.order();
  if (tag == MatrixTag::Unitary) {
    DenseMatrix g = m.multiply(m.adjoint()).subtract(DenseMatrix::identity(n));
    return g.max_norm() <= 1e-10;
  }
  if (tag == MatrixTag::Positive) {
    DenseMatrix h = m.subtract(m.adjoint());
    if (h.max_norm() > 1e-12) return false;
    auto svd = svd_small(m);
    // Hermitian within tolerance, so singular values approximate |eigenvalues|;
    // verify x* M x >= -1e-10 on the singular directions instead.
    for (std::size_t j = 0; j < n; ++j) {
      auto x = svd.u.column(j);
      cplx q{};
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          q += std::conj(x[i]) * m.at(i, k) * x[k];
      if (q.real() < -1e-10) return false;
    }
    return true;
  }
  return true;
}

SvdResult svd_small(const DenseMatrix& m) {
  const std::size_t n = m.order();
  if (n > 64) throw std::invalid_argument("svd_small handles orders <= 64");

  DenseMatrix a = m;                       // columns converge to U * Sigma
  DenseMatrix v = DenseMatrix::identity(n);

  constexpr int kMaxSweeps = 30;
  constexpr double kThreshold = 1e-14;

  double scale = std::max(m.max_norm(), 1e-300);
  int sweep = 0;
  double off = 0.0;
  for (; sweep < kMaxSweeps; ++sweep) {
    off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        cplx g{};
        double app = 0.0, aqq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          g += std::conj(a.at(i, p)) * a.at(i, q);
          app += std::norm(a.at(i, p));
          aqq += std::norm(a.at(i, q));
        }
        double mag = std::abs(g);
        off = std::max(off, mag / (scale * scale));
        if (mag <= kThreshold * scale * scale) continue;

        cplx phase = g / mag;
        double tau = (aqq - app) / (2.0 * mag);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;

        for (std::size_t i = 0; i < n; ++i) {
          cplx ap = a.at(i, p), aq = a.at(i, q);
          a.at(i, p) = c * ap - s * std::conj(phase) * aq;
          a.at(i, q) = s * phase * ap + c * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          cplx vp = v.at(i, p), vq = v.at(i, q);
          v.at(i, p) = c * vp - s * std::conj(phase) * vq;
          v.at(i, q) = s * phase * vp + c * vq;
        }
      }
    }
    if (off <= kThreshold) break;
  }
  if (off > 1e-10) throw SvdConvergenceFailure(off);

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm2 += std::norm(a.at(i, j));
    sigma[j] = std::sqrt(norm2);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult out{DenseMatrix(n), std::vector<double>(n), DenseMatrix(n)};
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t src = order[j];
    out.singular_values[j] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) {
      out.u.at(i, j) = sigma[src] > 0.0 ? a.at(i, src) / sigma[src] : cplx{};
      out.v.at(i, j) = v.at(i, src);
    }
  }

  // Complete any null columns of U to an orthonormal set.
  for (std::size_t j = 0; j < n; ++j) {
    if (out.singular_values[j] > 0.0) continue;
    for (std::size_t seed = 0; seed < n; ++seed) {
      std::vector<cplx> cand(n, cplx{});
      cand[seed] = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        cplx proj{};
        for (std::size_t i = 0; i < n; ++i)
          proj += std::conj(out.u.at(i, k)) * cand[i];
        for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * out.u.at(i, k);
      }
      double norm2 = 0.0;
      for (const auto& c : cand) norm2 += std::norm(c);
      if (norm2 > 1e-8) {
        double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < n; ++i) out.u.at(i, j) = cand[i] * inv;
        break;
      }
    }
  }

  // Sign convention: first nonzero component of each left singular vector
  // gets a nonnegative real part; the compensating phase goes into V.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx z = out.u.at(i, j);
      if (std::abs(z) > 1e-12) {
        cplx lambda = std::conj(z) / std::abs(z);
        for (std::size_t r = 0; r < n; ++r) {
          out.u.at(r, j) *= lambda;
          out.v.at(r, j) *= lambda;
        }
        break;
      }
    }
  }

  out.u.tag = MatrixTag::Unitary;
  out.v.tag = MatrixTag::Unitary;
  out.sweeps = sweep + 1;
  out.off_diagonal = off;
  return out;
}

namespace {

constexpr double kInvertibilityFloor = 1e-12;

DenseMatrix from_svd_product(const DenseMatrix& left,
                             const std::vector<double>& diag,
                             const DenseMatrix& right_adjoint_of) {
  // left * diag * right_adjoint_of^*
  const std::size_t n = left.order();
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < n; ++k)
        acc += left.at(i, k) * diag[k] * std::conj(right_adjoint_of.at(j, k));
      out.at(i, j) = acc;
    }
  return out;
}

}  // namespace

PolarResult polar_decompose(const DenseMatrix& tmat) {
  auto svd = svd_small(tmat.adjoint());  // T* = W Sigma V*
  if (svd.singular_values.back() <= kInvertibilityFloor) throw SingularInput();

  const std::size_t n = tmat.order();
  // U = W V*, P = V Sigma V*.
  DenseMatrix u(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < n; ++k)
        acc += svd.u.at(i, k) * std::conj(svd.v.at(j, k));
      u.at(i, j) = acc;
    }
  DenseMatrix p = from_svd_product(svd.v, svd.singular_values, svd.v);
  u.tag = MatrixTag::Unitary;
  p.tag = MatrixTag::Positive;
  return {std::move(u), std::move(p)};
}

std::vector<cplx> solve(const DenseMatrix& a, std::vector<cplx> b) {
  const std::size_t n = a.order();
  DenseMatrix m = a;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(m.at(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      double mag = std::abs(m.at(r, col));
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best <= 1e-300) throw SingularInput();
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c)
        std::swap(m.at(col, c), m.at(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      cplx f = m.at(r, col) / m.at(col, col);
      if (f == cplx{}) continue;
      for (std::size_t c = col; c < n; ++c) m.at(r, c) -= f * m.at(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<cplx> x(n);
  for (std::size_t i = n; i-- > 0;) {
    cplx acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= m.at(i, j) * x[j];
    x[i] = acc / m.at(i, i);
  }
  return x;
}

DenseMatrix inverse(const DenseMatrix& a) {
  const std::size_t n = a.order();
  DenseMatrix out(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cplx> e(n, cplx{});
    e[j] = 1.0;
    auto col = solve(a, std::move(e));
    for (std::size_t i = 0; i < n; ++i) out.at(i, j) = col[i];
  }
  return out;
}

Lemma22Report lemma22_check(const DenseMatrix& tmat) {
  const std::size_t n = tmat.order();
  auto [u, p] = polar_decompose(tmat);
  DenseMatrix u_adj = u.adjoint();

  auto svd_p = svd_small(p);
  std::vector<double> inv_sigma(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (svd_p.singular_values[k] <= kInvertibilityFloor) throw SingularInput();
    inv_sigma[k] = 1.0 / svd_p.singular_values[k];
  }
  DenseMatrix p_inv = from_svd_product(svd_p.v, inv_sigma, svd_p.v);
  DenseMatrix t_adj = tmat.adjoint();

  Lemma22Report rep;
  for (std::size_t j = 0; j < n; ++j) {
    auto e_prime = u_adj.column(j);

    double phi = 0.0, psi = 0.0;
    std::vector<cplx> e(n, cplx{});
    e[j] = 1.0;
    auto psi_direct = solve(t_adj, std::move(e));  // (T^-1)* e_j = (T*)^-1 e_j
    for (std::size_t i = 0; i < n; ++i) {
      cplx p_e{}, pinv_e{};
      for (std::size_t k = 0; k < n; ++k) {
        p_e += p.at(i, k) * e_prime[k];
        pinv_e += p_inv.at(i, k) * e_prime[k];
      }
      phi += std::norm(tmat.at(i, j) - p_e);
      psi += std::norm(psi_direct[i] - pinv_e);
    }
    rep.phi_residual = std::max(rep.phi_residual, std::sqrt(phi));
    rep.psi_residual = std::max(rep.psi_residual, std::sqrt(psi));
  }

  DenseMatrix gram = u_adj.adjoint().multiply(u_adj);  // columns of U* pairwise
  rep.orthonormality_defect =
      gram.subtract(DenseMatrix::identity(n)).max_norm();
  return rep;
}

namespace {

DenseMatrix diagonal_core(const seq::Sequence& alpha, std::size_t n,
                          bool conj) {
  DenseMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx a = alpha.eval(seq::index_t(i));
    d.at(i, i) = conj ? std::conj(a) : a;
  }
  return d;
}

DenseMatrix lower_core(const seq::Sequence& alpha, std::size_t n, bool conj) {
  DenseMatrix l(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cplx a = alpha.eval(seq::index_t(i) + 1);
    l.at(i, i + 1) = conj ? std::conj(a) : a;
  }
  return l;
}

DenseMatrix raise_core(const seq::Sequence& alpha, std::size_t n, bool conj) {
  DenseMatrix r(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cplx a = alpha.eval(seq::index_t(i) + 1);
    r.at(i + 1, i) = conj ? std::conj(a) : a;
  }
  return r;
}

DenseMatrix series_form(const DenseMatrix& t, const DenseMatrix& t_inv_adj,
                        const seq::Sequence& alpha, int offset,
                        std::size_t n) {
  // sum over the band of alpha-weighted outer products phi (x) conj(psi):
  // offset 0: alpha_n phi_n psi_n*, offset +1: alpha_{n+1} phi_n psi_{n+1}*,
  // offset -1: alpha_{n+1} phi_{n+1} psi_n*.
  DenseMatrix acc(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t phi_idx, psi_idx;
    cplx w;
    if (offset == 0) {
      phi_idx = psi_idx = k;
      w = alpha.eval(seq::index_t(k));
    } else if (offset == 1) {
      if (k + 1 >= n) break;
      phi_idx = k;
      psi_idx = k + 1;
      w = alpha.eval(seq::index_t(k) + 1);
    } else {
      if (k + 1 >= n) break;
      phi_idx = k + 1;
      psi_idx = k;
      w = alpha.eval(seq::index_t(k) + 1);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        acc.at(i, j) +=
            w * t.at(i, phi_idx) * std::conj(t_inv_adj.at(j, psi_idx));
  }
  return acc;
}

}  // namespace

RieszConsistencyReport riesz_consistency_check(const DenseMatrix& tmat,
                                               const seq::Sequence& alpha,
                                               std::size_t order) {
  if (tmat.order() != order)
    throw std::invalid_argument("order must match the matrix");
  auto svd = svd_small(tmat);
  if (svd.singular_values.back() <= kInvertibilityFloor) throw SingularInput();

  DenseMatrix t_inv = inverse(tmat);
  DenseMatrix t_inv_adj = t_inv.adjoint();

  auto conjugated = [&](const DenseMatrix& core) {
    return tmat.multiply(core).multiply(t_inv);
  };

  DenseMatrix h = conjugated(diagonal_core(alpha, order, false));
  DenseMatrix a = conjugated(lower_core(alpha, order, false));
  DenseMatrix b = conjugated(raise_core(alpha, order, false));

  RieszConsistencyReport rep;
  rep.h_difference =
      h.subtract(series_form(tmat, t_inv_adj, alpha, 0, order)).max_norm();
  rep.a_difference =
      a.subtract(series_form(tmat, t_inv_adj, alpha, 1, order)).max_norm();
  rep.b_difference =
      b.subtract(series_form(tmat, t_inv_adj, alpha, -1, order)).max_norm();

  bool hermitian_positive =
      tmat.subtract(tmat.adjoint()).max_norm() <= 1e-12 &&
      svd.singular_values.back() > kInvertibilityFloor &&
      verify_tag(tmat, MatrixTag::Positive);
  if (hermitian_positive) {
    auto dagger = [&](const DenseMatrix& conj_core) {
      return t_inv.multiply(conj_core).multiply(tmat);
    };
    // daggers swap the conjugators, conjugate alpha and swap lower/raise
    DenseMatrix h_dag = dagger(diagonal_core(alpha, order, true));
    DenseMatrix a_dag = dagger(raise_core(alpha, order, true));
    DenseMatrix b_dag = dagger(lower_core(alpha, order, true));
    rep.h_adjoint_defect = h_dag.subtract(h.adjoint()).max_norm();
    rep.a_adjoint_defect = a_dag.subtract(a.adjoint()).max_norm();
    rep.b_adjoint_defect = b_dag.subtract(b.adjoint()).max_norm();
  }
  return rep;
}

DenseMatrix truncate(const ops::ScaleOperator& scale, std::size_t order) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  DenseMatrix m(order);
  for (std::size_t i = 0; i < order; ++i)
    m.at(i, i) = scale.weight(seq::index_t(i));
  m.tag = MatrixTag::Positive;
  return m;
}

}  // namespace riesz::finite
