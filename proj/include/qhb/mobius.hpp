#pragma once

// Hua involutions and the projective action of Sp(n,1) on the unit ball of H^n.

#include <algorithm>
#include <cmath>
#include <string>

#include "qhb/quaternion.hpp"

namespace qhb {

template <class Scalar>
void require_in_open_ball(const HVector<Scalar>& z, const char* what) {
  const Scalar r2 = squared_norm(z);
  if (!(r2 < Scalar(1))) {
    throw Error(ErrorKind::NotInBall, std::string(what) + " has norm " + std::to_string(std::sqrt(r2)) + " >= 1");
  }
}

template <class Scalar>
void require_in_closed_ball(const HVector<Scalar>& z, const char* what) {
  const Scalar r2 = squared_norm(z);
  if (!(r2 <= Scalar(1))) {
    throw Error(ErrorKind::NotInBall, std::string(what) + " has norm " + std::to_string(std::sqrt(r2)) + " > 1");
  }
}

template <class Scalar>
class SpMatrix;

/// The involutive isometry Phi_u exchanging 0 and u:
///
///   Phi_u(z) = (u - A_u z)(1 - <z,u>)^{-1},   A_u = u u^* / (1 + s) + s I,
///
/// with s = sqrt(1 - |u|^2).  Its unique interior fixed point is u / (1 + s).
template <class Scalar>
class HuaInvolution {
 public:
  explicit HuaInvolution(HVector<Scalar> u) : u_(std::move(u)) {
    if (u_.size() == 0) throw Error(ErrorKind::DimensionMismatch, "ball dimension must be positive");
    require_in_open_ball(u_, "involution centre");
    s_ = std::sqrt(Scalar(1) - squared_norm(u_));
  }

  Eigen::Index dim() const { return u_.size(); }
  const HVector<Scalar>& u() const { return u_; }
  Scalar s() const { return s_; }

  HMatrix<Scalar> A() const {
    HMatrix<Scalar> a = outer(u_, u_) / (Scalar(1) + s_);
    for (Eigen::Index i = 0; i < dim(); ++i) a(i, i) += Quaternion<Scalar>(s_);
    return a;
  }

  /// A_u z computed without forming the matrix.
  HVector<Scalar> apply_A(const HVector<Scalar>& z) const {
    const Quaternion<Scalar> uz = inner(z, u_) / (Scalar(1) + s_);
    HVector<Scalar> out(dim());
    for (Eigen::Index i = 0; i < dim(); ++i) out(i) = u_(i) * uz + z(i) * s_;
    return out;
  }

  /// Defined on the closed ball; the solver only ever calls it inside.
  HVector<Scalar> operator()(const HVector<Scalar>& z) const {
    if (z.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "point and involution centre differ in dimension");
    require_in_closed_ball(z, "point");
    if (squared_norm(z) == Scalar(0)) return u_;
    const Quaternion<Scalar> denom_inv = qinv(Quaternion<Scalar>(1) - inner(z, u_));
    // u - A_u z = A_u (u - z), which vanishes exactly at z = u.
    HVector<Scalar> num = apply_A(HVector<Scalar>(u_ - z));
    for (Eigen::Index i = 0; i < dim(); ++i) num(i) = num(i) * denom_inv;
    return num;
  }

  /// (-A_u/s, u/s; -u^*/s, 1/s)
  SpMatrix<Scalar> matrix() const;

  HVector<Scalar> fixed_point() const { return u_ / (Scalar(1) + s_); }

  /// |det D_R Phi_u(z)| = (1 - |u|^2)^{2n+2} / |1 - <z,u>|^{4n+4}.
  Scalar jacobian_det(const HVector<Scalar>& z) const {
    if (z.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "point and involution centre differ in dimension");
    require_in_open_ball(z, "point");
    const Scalar ratio = s_ * s_ / (Quaternion<Scalar>(1) - inner(z, u_)).squaredNorm();
    return std::pow(ratio, Scalar(2 * dim() + 2));
  }

 private:
  HVector<Scalar> u_;
  Scalar s_{1};
};

template <class Scalar>
HuaInvolution<Scalar> hua_new(const HVector<Scalar>& u) {
  return HuaInvolution<Scalar>(u);
}

template <class Scalar>
HVector<Scalar> hua_apply(const HuaInvolution<Scalar>& phi, const HVector<Scalar>& z) {
  return phi(z);
}

template <class Scalar>
HVector<Scalar> hua_fixed_point(const HuaInvolution<Scalar>& phi) {
  return phi.fixed_point();
}

template <class Scalar>
Scalar jacobian_det(const HuaInvolution<Scalar>& phi, const HVector<Scalar>& z) {
  return phi.jacobian_det(z);
}

/// Default structural tolerance for A^* J A = J, relative to the entry scale.
template <class Scalar>
inline constexpr Scalar kGroupTolerance = Scalar(1e-10);

/// An element of Sp(n,1): an (n+1)x(n+1) quaternionic matrix g with
/// g^* J g = J, J = diag(I_n, -1), written in blocks (A alpha; beta a).
/// It acts on the ball by z -> (A z + alpha)(beta z + a)^{-1}.
template <class Scalar>
class SpMatrix {
 public:
  /// Validates membership; throws NotInGroup otherwise.
  static SpMatrix from_matrix(HMatrix<Scalar> m, Scalar tol = kGroupTolerance<Scalar>) {
    if (m.rows() != m.cols() || m.rows() < 2) {
      throw Error(ErrorKind::DimensionMismatch, "Sp(n,1) element must be square of size n+1 >= 2");
    }
    SpMatrix g(std::move(m));
    const Scalar err = g.membership_error();
    if (!(err <= tol * g.scale())) {
      throw Error(ErrorKind::NotInGroup, "g^* J g - J has entry of size " + std::to_string(err));
    }
    return g;
  }

  static SpMatrix from_blocks(const HMatrix<Scalar>& a_block, const HVector<Scalar>& alpha, const HRow<Scalar>& beta,
                              const Quaternion<Scalar>& a, Scalar tol = kGroupTolerance<Scalar>) {
    const Eigen::Index n = a_block.rows();
    if (a_block.cols() != n || alpha.size() != n || beta.size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "Sp(n,1) blocks have inconsistent shapes");
    }
    HMatrix<Scalar> m(n + 1, n + 1);
    m.topLeftCorner(n, n) = a_block;
    m.topRightCorner(n, 1) = alpha;
    m.bottomLeftCorner(1, n) = beta;
    m(n, n) = a;
    return from_matrix(std::move(m), tol);
  }

  static SpMatrix identity(Eigen::Index n) { return SpMatrix(qhb::identity<Scalar>(n + 1)); }

  /// diag(A, q) for A in Sp(n) and a unit quaternion q.
  static SpMatrix block_diagonal(const HMatrix<Scalar>& a_block, const Quaternion<Scalar>& q,
                                 Scalar tol = kGroupTolerance<Scalar>) {
    const Eigen::Index n = a_block.rows();
    return from_blocks(a_block, HVector<Scalar>::Zero(n), HRow<Scalar>::Zero(n), q, tol);
  }

  /// Skips validation; for products of known group elements.
  static SpMatrix trusted(HMatrix<Scalar> m) { return SpMatrix(std::move(m)); }

  Eigen::Index dim() const { return m_.rows() - 1; }
  const HMatrix<Scalar>& matrix() const { return m_; }
  const Quaternion<Scalar>& operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  HMatrix<Scalar> A() const { return m_.topLeftCorner(dim(), dim()); }
  HVector<Scalar> alpha() const { return m_.topRightCorner(dim(), 1); }
  HRow<Scalar> beta() const { return m_.bottomLeftCorner(1, dim()); }
  Quaternion<Scalar> a() const { return m_(dim(), dim()); }

  /// max entry of |g^* J g - J|.
  Scalar membership_error() const {
    const Eigen::Index n1 = m_.rows();
    Scalar worst(0);
    for (Eigen::Index i = 0; i < n1; ++i) {
      for (Eigen::Index j = 0; j < n1; ++j) {
        Quaternion<Scalar> acc;
        for (Eigen::Index k = 0; k < n1; ++k) {
          const Quaternion<Scalar> term = m_(k, i).conj() * m_(k, j);
          if (k == dim()) acc -= term; else acc += term;
        }
        if (i == j) acc -= Quaternion<Scalar>(i == dim() ? Scalar(-1) : Scalar(1));
        worst = std::max(worst, acc.norm());
      }
    }
    return worst;
  }

  /// Rounding in g^* J g grows with the square of the entries.
  Scalar scale() const {
    const Scalar e = max_abs(m_);
    return std::max(Scalar(1), e * e);
  }

  friend SpMatrix operator*(const SpMatrix& g, const SpMatrix& h) {
    if (g.dim() != h.dim()) throw Error(ErrorKind::DimensionMismatch, "group elements act on different dimensions");
    return SpMatrix(matmul(g.m_, h.m_));
  }

 private:
  explicit SpMatrix(HMatrix<Scalar> m) : m_(std::move(m)) {}

  HMatrix<Scalar> m_;
};

template <class Scalar>
SpMatrix<Scalar> HuaInvolution<Scalar>::matrix() const {
  const Eigen::Index n = dim();
  HMatrix<Scalar> m(n + 1, n + 1);
  m.topLeftCorner(n, n) = A() / (-s_);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, n) = u_(i) / s_;
    m(n, i) = -u_(i).conj() / s_;
  }
  m(n, n) = Quaternion<Scalar>(Scalar(1) / s_);
  return SpMatrix<Scalar>::trusted(std::move(m));
}

template <class Scalar>
SpMatrix<Scalar> hua_matrix(const HuaInvolution<Scalar>& phi) {
  return phi.matrix();
}

/// g(z) = (A z + alpha)(beta z + a)^{-1}, right division by the last
/// homogeneous coordinate.
template <class Scalar>
HVector<Scalar> sp_apply(const SpMatrix<Scalar>& g, const HVector<Scalar>& z) {
  if (z.size() != g.dim()) throw Error(ErrorKind::DimensionMismatch, "point and group element differ in dimension");
  require_in_open_ball(z, "point");
  const Eigen::Index n = g.dim();
  const auto& m = g.matrix();
  Quaternion<Scalar> last = m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) last += m(n, j) * z(j);
  if (!(last.norm() > kDivisionEpsilon<Scalar>)) {
    throw Error(ErrorKind::Singular, "beta z + a vanishes");
  }
  const Quaternion<Scalar> last_inv = qinv(last);
  HVector<Scalar> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Quaternion<Scalar> acc = m(i, n);
    for (Eigen::Index j = 0; j < n; ++j) acc += m(i, j) * z(j);
    out(i) = acc * last_inv;
  }
  return out;
}

/// g^{-1} = J g^* J = (A^*, -beta^*; -alpha^*, conj(a)).
template <class Scalar>
SpMatrix<Scalar> sp_inverse(const SpMatrix<Scalar>& g) {
  HMatrix<Scalar> inv = adjoint(g.matrix());
  const Eigen::Index n = g.dim();
  for (Eigen::Index i = 0; i < n; ++i) {
    inv(i, n) = -inv(i, n);
    inv(n, i) = -inv(n, i);
  }
  return SpMatrix<Scalar>::trusted(std::move(inv));
}

/// U = Phi_{g(c)} g Phi_c, the linear isometry with Phi_{g(c)} o g = U o Phi_c.
/// The off-diagonal blocks are checked against `tol` and then set to zero.
template <class Scalar>
SpMatrix<Scalar> intertwine_factor(const SpMatrix<Scalar>& g, const HVector<Scalar>& c,
                                   Scalar tol = kGroupTolerance<Scalar>) {
  const HuaInvolution<Scalar> phi_c(c);
  const HuaInvolution<Scalar> phi_gc(sp_apply(g, c));
  const SpMatrix<Scalar> left = phi_gc.matrix();
  const SpMatrix<Scalar> right = phi_c.matrix();
  HMatrix<Scalar> u = (left * g * right).matrix();

  const Eigen::Index n = g.dim();
  const Scalar off = std::max(max_abs(u.topRightCorner(n, 1)), max_abs(u.bottomLeftCorner(1, n)));
  const Scalar scale = std::max(Scalar(1), max_abs(left.matrix()) * max_abs(g.matrix()) * max_abs(right.matrix()));
  if (!(off <= tol * scale)) {
    throw Error(ErrorKind::NotInGroup, "intertwining factor is not block diagonal (off-diagonal " + std::to_string(off) + ")");
  }
  u.topRightCorner(n, 1).setZero();
  u.bottomLeftCorner(1, n).setZero();
  return SpMatrix<Scalar>::trusted(std::move(u));
}

}  // namespace qhb
