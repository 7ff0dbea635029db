#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/LU>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/rational.hpp>

#include "qhb/measure_sets.hpp"
#include "qhb/random.hpp"

namespace qhb::test {

inline HVec point(double w, double x = 0, double y = 0, double z = 0) {
  HVec p(1);
  p(0) = Quat(w, x, y, z);
  return p;
}

inline HVec point2(const Quat& a, const Quat& b) {
  HVec p(2);
  p << a, b;
  return p;
}

inline double dist(const HVec& a, const HVec& b) { return norm(HVec(a - b)); }

inline double qdist(const Quat& a, const Quat& b) { return (a - b).norm(); }

/// Translation of the disc along the real axis, z -> (z + t)(t z + 1)^{-1}.
inline SpMatrix<double> translation(double t) {
  const double c = 1 / std::sqrt(1 - t * t);
  HMat m(2, 2);
  m << Quat(c), Quat(c * t), Quat(c * t), Quat(c);
  return SpMatrix<double>::from_matrix(m);
}

inline WeightedPoints<double> two_weighted() { return {{point(0.5), point(-0.25)}, {2.0, 1.0}}; }

inline WeightedPoints<double> symmetric_four() {
  return WeightedPoints<double>::uniform({point(0.5), point(-0.5), point(0, 0.5), point(0, -0.5)});
}

inline WeightedPoints<double> three_quaternions() {
  return WeightedPoints<double>::uniform({point(0), point(0.4), point(0, 0.3, 0.2)});
}

inline WeightedPoints<double> random_points(Rng& rng, Eigen::Index n, std::size_t count, double rmax = 0.9) {
  std::vector<HVec> pts;
  std::vector<double> w;
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (std::size_t i = 0; i < count; ++i) {
    pts.push_back(random_ball_point<double>(rng, n, rmax));
    w.push_back(u(rng));
  }
  return {std::move(pts), std::move(w)};
}

// ---- oracles -------------------------------------------------------------

/// Area of the unit sphere S^{4n-1} from the Gamma function.
inline double sphere_area_gamma(int n) { return 2 * std::pow(std::numbers::pi, 2 * n) / std::tgamma(2.0 * n); }

/// Volume of B(0, rho) by radial quadrature of the density 16^n (1 - r^2)^{-2n-2}.
inline double radial_volume(double rho, int n) {
  const double top = std::tanh(rho / 2);
  auto f = [n](double r) { return std::pow(16.0, n) * std::pow(r, 4 * n - 1) / std::pow(1 - r * r, 2 * n + 2); };
  return sphere_area_gamma(n) * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, top, 15, 1e-14);
}

/// First moment of B(0, rho) about the origin: the integral of d(0, y).
inline double radial_moment(double rho, int n) {
  const double top = std::tanh(rho / 2);
  auto f = [n](double r) {
    return 2 * std::atanh(r) * std::pow(16.0, n) * std::pow(r, 4 * n - 1) / std::pow(1 - r * r, 2 * n + 2);
  };
  return sphere_area_gamma(n) * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, top, 15, 1e-14);
}

/// Root s in (0, d) of w_p tanh(s/2) = w_q tanh((d - s)/2) by bisection.
inline double two_point_split(double d, double wp, double wq) {
  double lo = 0, hi = d;
  for (int k = 0; k < 200; ++k) {
    const double mid = (lo + hi) / 2;
    if (wp * std::tanh(mid / 2) < wq * std::tanh((d - mid) / 2)) lo = mid;
    else hi = mid;
  }
  return (lo + hi) / 2;
}

/// Exact arithmetic in Q(sqrt 3).
struct QSqrt3 {
  using R = boost::rational<long long>;
  R a{0}, b{0};  // a + b sqrt(3)

  friend QSqrt3 operator+(const QSqrt3& x, const QSqrt3& y) { return {x.a + y.a, x.b + y.b}; }
  friend QSqrt3 operator-(const QSqrt3& x, const QSqrt3& y) { return {x.a - y.a, x.b - y.b}; }
  friend QSqrt3 operator*(const QSqrt3& x, const QSqrt3& y) { return {x.a * y.a + 3 * x.b * y.b, x.a * y.b + x.b * y.a}; }
  friend QSqrt3 operator/(const QSqrt3& x, const QSqrt3& y) {
    const R norm = y.a * y.a - 3 * y.b * y.b;
    const QSqrt3 conj{y.a / norm, -y.b / norm};
    return x * conj;
  }
  friend bool operator==(const QSqrt3&, const QSqrt3&) = default;
  double value() const { return boost::rational_cast<double>(a) + boost::rational_cast<double>(b) * std::sqrt(3.0); }
};

/// Energy for n = 1 in real coordinates: <x, q> has real part x . q, so
/// |1 - <x,q>|^2 = 1 - 2 x.q + |x|^2 |q|^2 needs no quaternion product.
inline double energy_r4(const std::vector<Eigen::Vector4d>& pts, const std::vector<double>& w, const Eigen::Vector4d& x) {
  double e = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double num = 1 - 2 * x.dot(pts[i]) + x.squaredNorm() * pts[i].squaredNorm();
    e += w[i] * std::log(num / ((1 - x.squaredNorm()) * (1 - pts[i].squaredNorm())));
  }
  return e;
}

inline Eigen::Vector4d energy_r4_gradient(const std::vector<Eigen::Vector4d>& pts, const std::vector<double>& w,
                                          const Eigen::Vector4d& x) {
  Eigen::Vector4d g = Eigen::Vector4d::Zero();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::Vector4d& q = pts[i];
    const double num = 1 - 2 * x.dot(q) + x.squaredNorm() * q.squaredNorm();
    g += w[i] * ((-2 * q + 2 * q.squaredNorm() * x) / num + 2 * x / (1 - x.squaredNorm()));
  }
  return g;
}

/// Minimiser of the n = 1 energy by plain gradient descent with backtracking.
inline Eigen::Vector4d r4_minimizer(const std::vector<Eigen::Vector4d>& pts, const std::vector<double>& w) {
  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  double step = 0.1;
  for (int it = 0; it < 100000; ++it) {
    const Eigen::Vector4d g = energy_r4_gradient(pts, w, x);
    if (g.norm() < 1e-14) break;
    const double e = energy_r4(pts, w, x);
    double t = step;
    while (t > 1e-20) {
      const Eigen::Vector4d y = x - t * g;
      if (y.squaredNorm() < 1 && energy_r4(pts, w, y) < e) {
        x = y;
        break;
      }
      t /= 2;
    }
    if (t <= 1e-20) break;
  }
  // Newton polish on the gradient; descent alone stalls near sqrt(eps).
  for (int it = 0; it < 20; ++it) {
    Eigen::Matrix4d hess;
    const double h = 1e-6;
    for (int k = 0; k < 4; ++k) {
      const Eigen::Vector4d e = Eigen::Vector4d::Unit(k) * h;
      hess.col(k) = (energy_r4_gradient(pts, w, x + e) - energy_r4_gradient(pts, w, x - e)) / (2 * h);
    }
    x -= hess.lu().solve(energy_r4_gradient(pts, w, x));
  }
  return x;
}

}  // namespace qhb::test
