#include "ofront/mfde.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "ofront/error.hpp"

namespace ofront {

MfdeOperator::MfdeOperator(const WaveGrid& grid, const Nonlinearity& nonlin,
                           const std::array<double, 4>& shifts)
    : grid_(grid), nonlin_(nonlin) {
  for (int nu = 0; nu < 4; ++nu) shift_[nu] = make_stencil(shifts[nu] * grid.per_unit);
}

std::array<double, 4> direction_shifts(const Direction& dir, double phi_angle) {
  std::array<double, 4> s{};
  const double cs = std::cos(phi_angle), sn = std::sin(phi_angle);
  for (int nu = 0; nu < 4; ++nu) {
    s[nu] = phi_angle == 0.0 ? static_cast<double>(dir.tau[nu])
                             : dir.tau[nu] * cs + dir.sigma[nu] * sn;
  }
  return s;
}

std::vector<std::pair<long, double>> MfdeOperator::derivative_row(long k) const {
  const double s = 1.0 / (12.0 * grid_.dx);
  return {{k - 2, s}, {k - 1, -8 * s}, {k + 1, 8 * s}, {k + 2, -s}};
}

Eigen::VectorXd MfdeOperator::residual(const GridFunction& phi, double c) const {
  const int m = interior();
  Eigen::VectorXd F(m);
  for (long k = 1; k <= m; ++k) {
    double d = 0.0;
    for (const auto& [node, w] : derivative_row(k)) d += w * clamped(phi, node, 0.0, 1.0);
    double shifted = 0.0;
    for (int nu = 0; nu < 4; ++nu) {
      ShiftStencil st = shift_[nu];
      st.base += k;
      shifted += evaluate(phi, st, 0.0, 1.0);
    }
    F[k - 1] = c * d + shifted - 4.0 * phi[k] + nonlin_.g(phi[k]);
  }
  return F;
}

SparseMatrix MfdeOperator::jacobian(const GridFunction& phi, double c) const {
  const int m = interior();
  const long n = grid_.n_intervals;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(m) * 30);
  for (long k = 1; k <= m; ++k) {
    for (const auto& [node, w] : derivative_row(k))
      if (node >= 1 && node <= n - 1) trip.emplace_back(k - 1, node - 1, c * w);
    for (int nu = 0; nu < 4; ++nu) {
      for (int a = 0; a < shift_[nu].count; ++a) {
        const long node = k + shift_[nu].base + a;
        if (node >= 1 && node <= n - 1) trip.emplace_back(k - 1, node - 1, shift_[nu].w[a]);
      }
    }
    trip.emplace_back(k - 1, k - 1, -4.0 + nonlin_.g1(phi[k]));
  }
  SparseMatrix J(m, m);
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

Eigen::VectorXd MfdeOperator::apply_linear(const GridFunction& phi, double c, const GridFunction& p) const {
  const int m = interior();
  Eigen::VectorXd out(m);
  for (long k = 1; k <= m; ++k) {
    double d = 0.0;
    for (const auto& [node, w] : derivative_row(k)) d += w * clamped(p, node, 0.0, 0.0);
    double shifted = 0.0;
    for (int nu = 0; nu < 4; ++nu) {
      ShiftStencil st = shift_[nu];
      st.base += k;
      shifted += evaluate(p, st, 0.0, 0.0);
    }
    out[k - 1] = c * d + shifted - 4.0 * p[k] + nonlin_.g1(phi[k]) * p[k];
  }
  return out;
}

BorderedSolver::BorderedSolver(const SparseMatrix& J, int pin, bool transpose)
    : n_(static_cast<int>(J.rows())), pin_(pin), transpose_(transpose) {
  for (int k = 0; k < J.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(J, k); it; ++it) {
      kl_ = std::max(kl_, static_cast<int>(it.row() - it.col()));
      ku_ = std::max(ku_, static_cast<int>(it.col() - it.row()));
    }
  }
  double scale = 0.0;
  for (int k = 0; k < J.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(J, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  const int ldab = 2 * kl_ + ku_ + 1;
  // Two attempts with opposite sign of gamma guard against an accidental cancellation.
  for (double sign : {1.0, -1.0}) {
    gamma_ = sign * std::max(scale, 1.0);
    band_.assign(static_cast<std::size_t>(ldab) * n_, 0.0);
    ipiv_.assign(static_cast<std::size_t>(n_), 0);
    for (int k = 0; k < J.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(J, k); it; ++it) {
        const int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
        band_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab] += it.value();
      }
    band_[static_cast<std::size_t>(kl_ + ku_) + static_cast<std::size_t>(pin_) * ldab] += gamma_;
    double anorm = 0.0;
    for (int j = 0; j < n_; ++j) {
      double col = 0.0;
      for (int r = kl_; r < ldab; ++r) col += std::abs(band_[static_cast<std::size_t>(r) + static_cast<std::size_t>(j) * ldab]);
      anorm = std::max(anorm, col);
    }
    const int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, band_.data(), ldab, ipiv_.data());
    if (info != 0) continue;
    double rcond = 0.0;
    LAPACKE_dgbcon(LAPACK_COL_MAJOR, '1', n_, kl_, ku_, band_.data(), ldab, ipiv_.data(), anorm, &rcond);
    if (rcond > 1e-13) return;
  }
  throw Error(ErrorCode::SingularLinearSystem, "banded factorization is singular");
}

Eigen::VectorXd BorderedSolver::apply_inverse(const Eigen::VectorXd& f) const {
  Eigen::VectorXd x = f;
  const int ldab = 2 * kl_ + ku_ + 1;
  const int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, transpose_ ? 'T' : 'N', n_, kl_, ku_, 1, band_.data(),
                                  ldab, ipiv_.data(), x.data(), n_);
  if (info != 0) throw Error(ErrorCode::SingularLinearSystem, "banded solve failed");
  return x;
}

void BorderedSolver::set_border(const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  w_ = w;
  b_ = apply_inverse(v);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
  e[pin_] = 1.0;
  d_ = apply_inverse(e);
  // With a = M^-1 f:  x = a - beta*b + gamma*t*d,  t = x[pin],  w'x = g.
  m11_ = b_[pin_];
  m12_ = 1.0 - gamma_ * d_[pin_];
  m21_ = -w_.dot(b_);
  m22_ = gamma_ * w_.dot(d_);
  const double det = m11_ * m22_ - m12_ * m21_;
  const double size = std::abs(m11_ * m22_) + std::abs(m12_ * m21_);
  if (!(std::abs(det) > 1e-12 * size))
    throw Error(ErrorCode::SingularLinearSystem, "bordered matrix is numerically singular");
}

void BorderedSolver::solve(const Eigen::VectorXd& f, double g, Eigen::VectorXd& x, double& beta) const {
  const Eigen::VectorXd a = apply_inverse(f);
  // Equations: beta*b[pin] + t*(1 - gamma*d[pin]) = a[pin]
  //            -beta*w'b + t*gamma*w'd = g - w'a
  const double r1 = a[pin_];
  const double r2 = g - w_.dot(a);
  const double det = m11_ * m22_ - m12_ * m21_;
  beta = (r1 * m22_ - m12_ * r2) / det;
  const double t = (m11_ * r2 - m21_ * r1) / det;
  x = a - beta * b_ + (gamma_ * t) * d_;
}

}  // namespace ofront
