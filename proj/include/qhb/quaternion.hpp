#pragma once

// Real quaternions and the right H-module H^n.
//
// Storage order is (w, x, y, z) for w + x i + y j + z k everywhere, including
// every serialized format.  Vectors are scaled on the right and matrices act
// on the left, so every product below keeps its operand order.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "qhb/error.hpp"

namespace qhb {

template <class Scalar>
struct Quaternion {
  Scalar w{0}, x{0}, y{0}, z{0};

  constexpr Quaternion() = default;
  // Implicit from a real so that Eigen's Zero()/Identity() work on H-matrices.
  constexpr Quaternion(Scalar real) : w(real) {}  // NOLINT(google-explicit-constructor)
  constexpr Quaternion(Scalar w_, Scalar x_, Scalar y_, Scalar z_) : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion k() { return {0, 0, 0, 1}; }

  constexpr Scalar real() const { return w; }
  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr Scalar squaredNorm() const { return w * w + x * x + y * y + z * z; }
  Scalar norm() const { return std::sqrt(squaredNorm()); }

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(const Quaternion& o) { return *this = *this * o; }

  friend constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
  friend constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }

  // Hamilton product, i^2 = j^2 = k^2 = ijk = -1.
  friend constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
  }
  friend constexpr Quaternion operator*(const Quaternion& q, Scalar s) { return {q.w * s, q.x * s, q.y * s, q.z * s}; }
  friend constexpr Quaternion operator*(Scalar s, const Quaternion& q) { return q * s; }
  friend constexpr Quaternion operator/(const Quaternion& q, Scalar s) { return {q.w / s, q.x / s, q.y / s, q.z / s}; }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '[' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ']';
  }
};

/// Below this modulus a quaternion is treated as an algebraic zero.
template <class Scalar>
inline constexpr Scalar kDivisionEpsilon = Scalar(1e-300);

template <class Scalar>
constexpr Quaternion<Scalar> qmul(const Quaternion<Scalar>& p, const Quaternion<Scalar>& q) {
  return p * q;
}

template <class Scalar>
Quaternion<Scalar> qinv(const Quaternion<Scalar>& q) {
  if (!(q.norm() >= kDivisionEpsilon<Scalar>)) {
    throw Error(ErrorKind::DivisionByZero, "quaternion modulus below division epsilon");
  }
  return q.conj() / q.squaredNorm();
}

}  // namespace qhb

namespace Eigen {

template <class Scalar>
struct NumTraits<qhb::Quaternion<Scalar>> : GenericNumTraits<qhb::Quaternion<Scalar>> {
  using Real = Scalar;
  using NonInteger = qhb::Quaternion<Scalar>;
  using Literal = qhb::Quaternion<Scalar>;
  using Nested = qhb::Quaternion<Scalar>;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 4,
    MulCost = 16
  };

  static inline Real epsilon() { return NumTraits<Scalar>::epsilon(); }
  static inline Real dummy_precision() { return NumTraits<Scalar>::dummy_precision(); }
  static inline int digits10() { return NumTraits<Scalar>::digits10(); }
};

template <class Scalar, typename BinaryOp>
struct ScalarBinaryOpTraits<qhb::Quaternion<Scalar>, Scalar, BinaryOp> {
  using ReturnType = qhb::Quaternion<Scalar>;
};

template <class Scalar, typename BinaryOp>
struct ScalarBinaryOpTraits<Scalar, qhb::Quaternion<Scalar>, BinaryOp> {
  using ReturnType = qhb::Quaternion<Scalar>;
};

}  // namespace Eigen

namespace qhb {

template <class Scalar>
using HVector = Eigen::Matrix<Quaternion<Scalar>, Eigen::Dynamic, 1>;

template <class Scalar>
using HRow = Eigen::Matrix<Quaternion<Scalar>, 1, Eigen::Dynamic>;

template <class Scalar>
using HMatrix = Eigen::Matrix<Quaternion<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Quat = Quaternion<double>;
using HVec = HVector<double>;
using HMat = HMatrix<double>;

/// Sum of |z_i|^2, i.e. the Euclidean norm squared in R^{4n}.
template <class Derived>
auto squared_norm(const Eigen::MatrixBase<Derived>& v) {
  using Q = typename Derived::Scalar;
  typename Eigen::NumTraits<Q>::Real acc(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += v(i).squaredNorm();
  return acc;
}

template <class Derived>
auto norm(const Eigen::MatrixBase<Derived>& v) {
  return std::sqrt(squared_norm(v));
}

/// <z, w> = w^* z = sum_i conj(w_i) z_i.  Right-linear in z, conjugate-linear in w.
template <class Scalar>
Quaternion<Scalar> inner(const HVector<Scalar>& z, const HVector<Scalar>& w) {
  if (z.size() != w.size()) throw Error(ErrorKind::DimensionMismatch, "inner product operands differ in length");
  Quaternion<Scalar> acc;
  for (Eigen::Index i = 0; i < z.size(); ++i) acc += w(i).conj() * z(i);
  return acc;
}

/// z * lambda, scalar acting on the right.
template <class Scalar>
HVector<Scalar> right_scale(const HVector<Scalar>& z, const Quaternion<Scalar>& lambda) {
  HVector<Scalar> out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out(i) = z(i) * lambda;
  return out;
}

template <class Scalar>
HVector<Scalar> right_scale(const HVector<Scalar>& z, Scalar lambda) {
  HVector<Scalar> out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out(i) = z(i) * lambda;
  return out;
}

/// (M z)_i = sum_j M_ij z_j, entries multiplied in that order.
template <class Scalar>
HVector<Scalar> mat_apply(const HMatrix<Scalar>& m, const HVector<Scalar>& z) {
  if (m.cols() != z.size()) throw Error(ErrorKind::DimensionMismatch, "matrix/vector shapes do not match");
  HVector<Scalar> out = HVector<Scalar>::Zero(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i) += m(i, j) * z(j);
  return out;
}

// Eigen's product kernels may transpose a product internally, which swaps
// the factor order; quaternionic products always go through this loop.
template <class Scalar>
HMatrix<Scalar> matmul(const HMatrix<Scalar>& a, const HMatrix<Scalar>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "matrix shapes do not match");
  HMatrix<Scalar> out = HMatrix<Scalar>::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      for (Eigen::Index j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
  return out;
}

template <class Scalar>
HMatrix<Scalar> adjoint(const HMatrix<Scalar>& m) {
  HMatrix<Scalar> out(m.cols(), m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(j, i) = m(i, j).conj();
  return out;
}

/// Outer product u v^*, which maps x to u <x, v>.
template <class Scalar>
HMatrix<Scalar> outer(const HVector<Scalar>& u, const HVector<Scalar>& v) {
  HMatrix<Scalar> out(u.size(), v.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    for (Eigen::Index j = 0; j < v.size(); ++j) out(i, j) = u(i) * v(j).conj();
  return out;
}

template <class Scalar>
HMatrix<Scalar> identity(Eigen::Index n) {
  HMatrix<Scalar> out = HMatrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) out(i, i) = Quaternion<Scalar>(1);
  return out;
}

/// Largest entry modulus of a quaternionic matrix or vector.
template <class Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  using Q = typename Derived::Scalar;
  typename Eigen::NumTraits<Q>::Real best(0);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, m(i, j).norm());
  return best;
}

/// The identification H^n = R^{4n}, coordinates (w, x, y, z) per component.
template <class Scalar>
RealVector<Scalar> to_real(const HVector<Scalar>& z) {
  RealVector<Scalar> out(4 * z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) out.template segment<4>(4 * i) << z(i).w, z(i).x, z(i).y, z(i).z;
  return out;
}

template <class Scalar>
HVector<Scalar> from_real(const RealVector<Scalar>& r) {
  if (r.size() % 4 != 0) throw Error(ErrorKind::DimensionMismatch, "real vector length is not a multiple of 4");
  HVector<Scalar> out(r.size() / 4);
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = {r(4 * i), r(4 * i + 1), r(4 * i + 2), r(4 * i + 3)};
  return out;
}

/// e_k scaled by a real: the point r e_k of the ball.
template <class Scalar>
HVector<Scalar> basis_point(Eigen::Index n, Eigen::Index k, Scalar r) {
  HVector<Scalar> out = HVector<Scalar>::Zero(n);
  out(k) = Quaternion<Scalar>(r);
  return out;
}

}  // namespace qhb
