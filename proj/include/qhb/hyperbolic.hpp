#pragma once

// Bergman distance, geodesics, invariant measure and ball volumes on the
// quaternionic hyperbolic ball, plus the closed-form second derivative of the
// energy kernel along a geodesic.

#include <cmath>
#include <algorithm>
#include <numbers>

#include "qhb/mobius.hpp"

namespace qhb {

/// d(p, q) = log((1 + m)/(1 - m)) with m = |Phi_q(p)|.
template <class Scalar>
Scalar distance(const HVector<Scalar>& p, const HVector<Scalar>& q) {
  require_in_open_ball(p, "first point");
  const HuaInvolution<Scalar> phi(q);
  const Scalar m = norm(phi(p));
  // log1p keeps short distances accurate; the plain ratio is better rounded further out.
  if (m < Scalar(0.25)) return std::log1p(Scalar(2) * m / (Scalar(1) - m));
  return std::log((Scalar(1) + m) / (Scalar(1) - m));
}

/// |1 - <x,y>|^2 / ((1 - |x|^2)(1 - |y|^2)), equal to cosh^2(d(x,y)/2).
template <class Scalar>
Scalar cosh2_half_distance(const HVector<Scalar>& x, const HVector<Scalar>& y) {
  require_in_open_ball(x, "first point");
  require_in_open_ball(y, "second point");
  const Scalar num = (Quaternion<Scalar>(1) - inner(x, y)).squaredNorm();
  return num / ((Scalar(1) - squared_norm(x)) * (Scalar(1) - squared_norm(y)));
}

/// Unit-speed geodesic t -> Phi_base(-tanh(t/2) direction).
///
/// `direction` is a unit vector in the origin chart; for base = 0 the curve is
/// tanh(t/2) direction, and in general it passes through base at t = 0.
template <class Scalar>
class GeodesicChart {
 public:
  GeodesicChart(HVector<Scalar> base, HVector<Scalar> direction) : base_(std::move(base)), direction_(std::move(direction)) {
    if (base_.size() != direction_.size()) throw Error(ErrorKind::DimensionMismatch, "base and direction differ in dimension");
    require_in_open_ball(base_, "geodesic base");
    const Scalar len = norm(direction_);
    if (!(len > Scalar(0))) throw Error(ErrorKind::DegenerateGeodesic, "geodesic direction is zero");
    direction_ = right_scale(direction_, Scalar(1) / len);
  }

  const HVector<Scalar>& base() const { return base_; }
  const HVector<Scalar>& direction() const { return direction_; }

  HVector<Scalar> point(Scalar t) const {
    const HVector<Scalar> origin_point = direction_ * (-std::tanh(t / Scalar(2)));
    return HuaInvolution<Scalar>(base_)(origin_point);
  }

 private:
  HVector<Scalar> base_;
  HVector<Scalar> direction_;
};

template <class Scalar>
HVector<Scalar> geodesic_point(const GeodesicChart<Scalar>& chart, Scalar t) {
  return chart.point(t);
}

/// Chart based at p whose point at t = d(p, q) is q.
template <class Scalar>
GeodesicChart<Scalar> geodesic_between(const HVector<Scalar>& p, const HVector<Scalar>& q) {
  require_in_open_ball(q, "geodesic endpoint");
  const HVector<Scalar> image = HuaInvolution<Scalar>(p)(q);
  if (!(norm(image) > Scalar(0))) throw Error(ErrorKind::DegenerateGeodesic, "endpoints coincide");
  return GeodesicChart<Scalar>(p, -image);
}

template <class Scalar>
HVector<Scalar> geodesic_midpoint(const HVector<Scalar>& p, const HVector<Scalar>& q) {
  return geodesic_between(p, q).point(distance(p, q) / Scalar(2));
}

/// Lebesgue density of the invariant measure: 4^{2n} / (1 - |z|^2)^{2n+2}.
template <class Scalar>
Scalar measure_density(const HVector<Scalar>& z) {
  require_in_open_ball(z, "point");
  const auto n = static_cast<Scalar>(z.size());
  return std::pow(Scalar(16), n) / std::pow(Scalar(1) - squared_norm(z), Scalar(2) * n + Scalar(2));
}

/// Vol B(rho) = (4 pi)^{2n} / (2n+1)! sinh^{4n}(rho/2) [1 + 2n cosh^2(rho/2)].
template <class Scalar>
Scalar ball_volume(Scalar rho, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "dimension must be at least 1");
  if (!(rho >= Scalar(0))) throw Error(ErrorKind::InvalidInput, "radius must be non-negative");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar sh = std::sinh(rho / Scalar(2));
  const Scalar ch = std::cosh(rho / Scalar(2));
  const Scalar prefactor = std::pow(Scalar(4) * pi, Scalar(2 * n)) / std::tgamma(Scalar(2 * n + 2));
  return prefactor * std::pow(sh, Scalar(4 * n)) * (Scalar(1) + Scalar(2 * n) * ch * ch);
}

/// Area of the unit sphere S^{4n-1} in R^{4n}: 2 pi^{2n} / (2n-1)!.
template <class Scalar>
Scalar unit_sphere_area(int n) {
  return Scalar(2) * std::pow(std::numbers::pi_v<Scalar>, Scalar(2 * n)) / std::tgamma(Scalar(2 * n));
}

/// The scalar data (a, r) = (Re w, |w|), w = <v, y>, that fixes the energy
/// kernel log cosh^2(d(gamma(t), y)/2) along gamma(t) = tanh(t/2) v up to a
/// constant.  Requires |a| <= r < 1.
template <class Scalar>
class ConvexityProfile {
 public:
  ConvexityProfile(Scalar a, Scalar r) : a_(a), r_(r) {
    if (!(r_ >= Scalar(0) && r_ < Scalar(1))) throw Error(ErrorKind::InvalidProfile, "need 0 <= r < 1");
    if (!(std::abs(a_) <= r_)) throw Error(ErrorKind::InvalidProfile, "need |a| <= r");
  }

  /// From a unit direction v and a point y of the ball.
  static ConvexityProfile along(const HVector<Scalar>& v, const HVector<Scalar>& y) {
    require_in_open_ball(y, "point");
    const Quaternion<Scalar> w = inner(v, y);
    const Scalar r = w.norm();
    return ConvexityProfile(std::clamp(w.real(), -r, r), r);
  }

  Scalar a() const { return a_; }
  Scalar r() const { return r_; }

  /// P(u) = 1 - 2 a u + r^2 u^2 = |1 - u w|^2.
  Scalar P(Scalar u) const { return Scalar(1) - Scalar(2) * a_ * u + r_ * r_ * u * u; }

  /// N(u) = (1 + r^2 - 2a^2) - 2a(1 - r^2) u + (2a^2 - r^4 - r^2) u^2.
  Scalar N(Scalar u) const {
    const Scalar r2 = r_ * r_;
    return (Scalar(1) + r2 - Scalar(2) * a_ * a_) - Scalar(2) * a_ * (Scalar(1) - r2) * u +
           (Scalar(2) * a_ * a_ - r2 * r2 - r2) * u * u;
  }

  /// f''(t) = ((1 - u^2)/2) N(u) / P(u)^2, u = tanh(t/2).
  Scalar second_derivative(Scalar t) const {
    const Scalar u = std::tanh(t / Scalar(2));
    const Scalar p = P(u);
    return (Scalar(1) - u * u) / Scalar(2) * N(u) / (p * p);
  }

 private:
  Scalar a_;
  Scalar r_;
};

template <class Scalar>
Scalar convexity_second_derivative(const ConvexityProfile<Scalar>& profile, Scalar t) {
  return profile.second_derivative(t);
}

}  // namespace qhb
