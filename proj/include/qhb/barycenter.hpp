#pragma once

// Conformal barycenter of a weighted point set in the quaternionic ball.
//
// The barycenter c is the unique zero of R(c) = sum_i w_i Phi_c(q_i) and the
// unique minimiser of G(x) = sum_i w_i log cosh^2(d(x, q_i)/2).  Because
// grad (G o Phi_c)(0) = -2 R(c), the solver works in the chart Phi_c centred
// at the current iterate and moves to Phi_c(eta R(c)/W).

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qhb/hyperbolic.hpp"
#include "qhb/parallel.hpp"

namespace qhb {

/// Points closer than this to the unit sphere are rejected.
template <class Scalar>
inline constexpr Scalar kBoundaryMargin = Scalar(1e-12);

template <class Scalar>
class WeightedPoints {
 public:
  WeightedPoints(std::vector<HVector<Scalar>> points, std::vector<Scalar> weights)
      : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.empty()) throw Error(ErrorKind::EmptyData, "no points");
    if (points_.size() != weights_.size()) {
      throw Error(ErrorKind::DimensionMismatch, "got " + std::to_string(points_.size()) + " points but " +
                                                    std::to_string(weights_.size()) + " weights");
    }
    dim_ = points_.front().size();
    if (dim_ < 1) throw Error(ErrorKind::DimensionMismatch, "point 0 has dimension 0");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i].size() != dim_) {
        throw Error(ErrorKind::DimensionMismatch, "point " + std::to_string(i) + " has dimension " +
                                                      std::to_string(points_[i].size()) + ", expected " +
                                                      std::to_string(dim_));
      }
      const Scalar r = norm(points_[i]);
      if (!(r < Scalar(1) - kBoundaryMargin<Scalar>)) {
        throw Error(ErrorKind::NotInBall, "point " + std::to_string(i) + " has norm " + std::to_string(r));
      }
      if (!(weights_[i] > Scalar(0)) || !std::isfinite(weights_[i])) {
        throw Error(ErrorKind::InvalidInput, "point " + std::to_string(i) + " has non-positive weight " +
                                                 std::to_string(weights_[i]));
      }
    }
    const auto sum = [](Scalar a, Scalar b) { return a + b; };
    total_weight_ = parallel::tree_reduce(weights_, sum);
    std::vector<Scalar> spread(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) spread[i] = weights_[i] / (Scalar(1) - squared_norm(points_[i]));
    boundary_weight_ = parallel::tree_reduce(std::move(spread), sum);
  }

  static WeightedPoints uniform(std::vector<HVector<Scalar>> points) {
    std::vector<Scalar> w(points.size(), Scalar(1));
    return WeightedPoints(std::move(points), std::move(w));
  }

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<HVector<Scalar>>& points() const { return points_; }
  const std::vector<Scalar>& weights() const { return weights_; }
  const HVector<Scalar>& point(std::size_t i) const { return points_[i]; }
  Scalar weight(std::size_t i) const { return weights_[i]; }
  Scalar total_weight() const { return total_weight_; }
  /// sum_i w_i / (1 - |q_i|^2); grows as mass approaches the boundary.
  Scalar boundary_weight() const { return boundary_weight_; }

  /// Image under an isometry, weights unchanged.
  WeightedPoints mapped(const SpMatrix<Scalar>& g) const {
    std::vector<HVector<Scalar>> image;
    image.reserve(points_.size());
    for (const auto& q : points_) image.push_back(sp_apply(g, q));
    return WeightedPoints(std::move(image), weights_);
  }

  WeightedPoints scaled_weights(Scalar factor) const {
    std::vector<Scalar> w = weights_;
    for (auto& x : w) x *= factor;
    return WeightedPoints(points_, std::move(w));
  }

 private:
  std::vector<HVector<Scalar>> points_;
  std::vector<Scalar> weights_;
  Eigen::Index dim_{0};
  Scalar total_weight_{0};
  Scalar boundary_weight_{0};
};

template <class Scalar>
struct SolverConfig {
  Scalar step{1};
  int max_iters{500};
  Scalar tol{1e-12};  // on |R(c)| / W
  bool line_search{true};

  void validate() const {
    if (!(step > Scalar(0) && step <= Scalar(1))) throw Error(ErrorKind::InvalidInput, "step must lie in (0, 1]");
    if (!(tol > Scalar(0))) throw Error(ErrorKind::InvalidInput, "tol must be positive");
    if (max_iters < 0) throw Error(ErrorKind::InvalidInput, "max_iters must be non-negative");
  }
};

template <class Scalar>
struct SolverResult {
  HVector<Scalar> barycenter;
  Scalar residual_norm{0};
  Scalar energy{0};
  int iterations{0};
  bool converged{false};
  /// Energy at the start and after every accepted step.
  std::vector<Scalar> energy_history;
};

namespace detail {

inline std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// log cosh^2(d(x, q)/2) via log1p of (|1 - <x,q>|^2 - (1-|x|^2)(1-|q|^2)) / ((1-|x|^2)(1-|q|^2)).
template <class Scalar>
Scalar energy_kernel(const HVector<Scalar>& x, Scalar x2, const HVector<Scalar>& q) {
  const Scalar q2 = squared_norm(q);
  const Quaternion<Scalar> w = inner(x, q);
  const Scalar diff2 = squared_norm(HVector<Scalar>(x - q));
  const Scalar excess = diff2 - (x2 * q2 - w.squaredNorm());
  const Scalar denom = (Scalar(1) - x2) * (Scalar(1) - q2);
  return std::log1p(excess / denom);
}

}  // namespace detail

/// G(x) = sum_i w_i log(|1 - <x,q_i>|^2 / ((1 - |x|^2)(1 - |q_i|^2))).
template <class Scalar>
Scalar energy(const WeightedPoints<Scalar>& data, const HVector<Scalar>& x) {
  if (x.size() != data.dim()) throw Error(ErrorKind::DimensionMismatch, "evaluation point has wrong dimension");
  require_in_open_ball(x, "evaluation point");
  const Scalar x2 = squared_norm(x);
  return parallel::chunked_reduce<Scalar>(
      data.size(),
      [&](std::size_t begin, std::size_t end) {
        Scalar acc(0);
        for (std::size_t i = begin; i < end; ++i) acc += data.weight(i) * detail::energy_kernel(x, x2, data.point(i));
        return acc;
      },
      [](Scalar a, Scalar b) { return a + b; }, Scalar(0));
}

/// Size of the rounding noise in energy(data, x) = e.  Each kernel loses
/// about eps / (1 - |.|^2) to cancellation in its denominator.
template <class Scalar>
Scalar energy_resolution(const WeightedPoints<Scalar>& data, const HVector<Scalar>& x, Scalar e) {
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  return Scalar(16) * eps *
         (std::abs(e) + data.total_weight() / (Scalar(1) - squared_norm(x)) + data.boundary_weight());
}

/// R(c) = sum_i w_i Phi_c(q_i).
template <class Scalar>
HVector<Scalar> residual(const WeightedPoints<Scalar>& data, const HVector<Scalar>& c) {
  if (c.size() != data.dim()) throw Error(ErrorKind::DimensionMismatch, "evaluation point has wrong dimension");
  const HuaInvolution<Scalar> phi(c);
  const HVector<Scalar> zero = HVector<Scalar>::Zero(data.dim());
  return parallel::chunked_reduce<HVector<Scalar>>(
      data.size(),
      [&](std::size_t begin, std::size_t end) {
        HVector<Scalar> acc = zero;
        for (std::size_t i = begin; i < end; ++i) acc += phi(data.point(i)) * data.weight(i);
        return acc;
      },
      [](const HVector<Scalar>& a, const HVector<Scalar>& b) { return HVector<Scalar>(a + b); }, zero);
}

/// Largest coordinate gap between a 5-point finite-difference gradient of
/// x -> G(Phi_c(x)) at 0 and -2 R(c).
template <class Scalar>
Scalar gradient_check(const WeightedPoints<Scalar>& data, const HVector<Scalar>& c, Scalar h = Scalar(1e-5)) {
  const HuaInvolution<Scalar> phi(c);
  const RealVector<Scalar> expected = to_real(HVector<Scalar>(residual(data, c))) * Scalar(-2);
  const Eigen::Index dims = 4 * data.dim();
  auto g_c = [&](Eigen::Index k, Scalar offset) {
    RealVector<Scalar> x = RealVector<Scalar>::Zero(dims);
    x(k) = offset;
    return energy(data, phi(from_real(x)));
  };
  Scalar worst(0);
  for (Eigen::Index k = 0; k < dims; ++k) {
    const Scalar fd = (-g_c(k, 2 * h) + Scalar(8) * g_c(k, h) - Scalar(8) * g_c(k, -h) + g_c(k, -2 * h)) / (Scalar(12) * h);
    worst = std::max(worst, std::abs(fd - expected(k)));
  }
  return worst;
}

/// Weighted Euclidean mean, pulled inside the ball of radius 0.9.
template <class Scalar>
HVector<Scalar> initial_guess(const WeightedPoints<Scalar>& data) {
  HVector<Scalar> mean = HVector<Scalar>::Zero(data.dim());
  for (std::size_t i = 0; i < data.size(); ++i) mean += data.point(i) * data.weight(i);
  mean = right_scale(mean, Scalar(1) / data.total_weight());
  const Scalar r = norm(mean);
  const Scalar cap(0.9);
  if (r > cap) mean = right_scale(mean, cap / r);
  return mean;
}

template <class Scalar>
SolverResult<Scalar> solve(const WeightedPoints<Scalar>& data, const SolverConfig<Scalar>& config,
                           std::optional<HVector<Scalar>> start = std::nullopt) {
  config.validate();
  const Scalar total = data.total_weight();

  SolverResult<Scalar> out;
  out.barycenter = start ? *start : initial_guess(data);
  if (out.barycenter.size() != data.dim()) throw Error(ErrorKind::DimensionMismatch, "start point has wrong dimension");
  require_in_open_ball(out.barycenter, "start point");

  HVector<Scalar> r = residual(data, out.barycenter);
  out.residual_norm = norm(r);
  out.energy = energy(data, out.barycenter);
  out.energy_history.push_back(out.energy);

  while (true) {
    if (out.residual_norm <= config.tol * total) {
      out.converged = true;
      break;
    }
    if (out.iterations >= config.max_iters) break;

    const HuaInvolution<Scalar> chart(out.barycenter);
    const HVector<Scalar> mean = right_scale(r, Scalar(1) / total);
    Scalar eta = config.step;
    bool accepted = false;
    while (eta > std::numeric_limits<Scalar>::min()) {
      HVector<Scalar> candidate = chart(right_scale(mean, eta));
      if (!(squared_norm(candidate) < Scalar(1))) {
        eta /= 2;
        continue;
      }
      const Scalar e = energy(data, candidate);
      HVector<Scalar> r_new = residual(data, candidate);
      const Scalar rn = norm(r_new);
      // Once the decrease drops below the resolution of the energy sum,
      // progress is judged on the residual instead.
      const Scalar slack = energy_resolution(data, out.barycenter, out.energy);
      const bool better = !config.line_search || e < out.energy || (e <= out.energy + slack && rn < out.residual_norm);
      if (better) {
        out.barycenter = std::move(candidate);
        out.energy = e;
        out.residual_norm = rn;
        r = std::move(r_new);
        accepted = true;
        break;
      }
      eta /= 2;
    }
    if (!accepted) break;
    ++out.iterations;
    out.energy_history.push_back(out.energy);
  }
  return out;
}

/// Throws NotConverged unless the result converged.
template <class Scalar>
const SolverResult<Scalar>& require_converged(const SolverResult<Scalar>& result) {
  if (!result.converged) {
    throw Error(ErrorKind::NotConverged, "residual " + detail::format_g(result.residual_norm) + " after " +
                                             std::to_string(result.iterations) + " iterations");
  }
  return result;
}

/// |w_p tanh(d(c,p)/2) - w_q tanh(d(c,q)/2)| at the two-point barycenter c.
/// Throws NotConverged if c is more than 1e-10 off the geodesic through p, q.
template <class Scalar>
Scalar solve_weighted_tanh_check(const HVector<Scalar>& p, Scalar w_p, const HVector<Scalar>& q, Scalar w_q,
                                 const SolverConfig<Scalar>& config = {}) {
  const WeightedPoints<Scalar> data({p, q}, {w_p, w_q});
  const HVector<Scalar> c = require_converged(solve(data, config)).barycenter;

  const GeodesicChart<Scalar> line = geodesic_between(p, q);
  const HVector<Scalar> x = HuaInvolution<Scalar>(p)(c);
  const HVector<Scalar>& v = line.direction();
  const Scalar along = inner(x, v).real();
  const Scalar offset = norm(HVector<Scalar>(x - right_scale(v, along)));
  if (!(offset <= Scalar(1e-10))) {
    throw Error(ErrorKind::NotConverged, "two-point barycenter is " + std::to_string(offset) + " off the geodesic");
  }
  return std::abs(w_p * std::tanh(distance(c, p) / 2) - w_q * std::tanh(distance(c, q) / 2));
}

/// d(c(g D), g(c(D))) for two independent solver runs.
template <class Scalar>
Scalar pushforward_invariance(const WeightedPoints<Scalar>& data, const SpMatrix<Scalar>& g,
                              const SolverConfig<Scalar>& config = {}) {
  const HVector<Scalar> c = require_converged(solve(data, config)).barycenter;
  const HVector<Scalar> c_image = require_converged(solve(data.mapped(g), config)).barycenter;
  return distance(c_image, sp_apply(g, c));
}

}  // namespace qhb
