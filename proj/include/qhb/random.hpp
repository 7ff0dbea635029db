#pragma once

// Random inputs for property checks.

#include <cmath>
#include <algorithm>
#include <random>
#include <vector>

#include "qhb/mobius.hpp"

namespace qhb {

using Rng = std::mt19937_64;

template <class Scalar>
Quaternion<Scalar> random_gaussian_quaternion(Rng& rng) {
  std::normal_distribution<Scalar> g;
  return {g(rng), g(rng), g(rng), g(rng)};
}

template <class Scalar>
Quaternion<Scalar> random_unit_quaternion(Rng& rng) {
  Quaternion<Scalar> q;
  do q = random_gaussian_quaternion<Scalar>(rng);
  while (q.norm() < Scalar(1e-6));
  return q / q.norm();
}

/// Uniform in the 4-ball of the given radius.
template <class Scalar>
Quaternion<Scalar> random_quaternion(Rng& rng, Scalar radius) {
  std::uniform_real_distribution<Scalar> u(0, 1);
  return random_unit_quaternion<Scalar>(rng) * (radius * std::pow(u(rng), Scalar(0.25)));
}

template <class Scalar>
HVector<Scalar> random_unit_vector(Rng& rng, Eigen::Index n) {
  HVector<Scalar> v(n);
  Scalar len(0);
  do {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = random_gaussian_quaternion<Scalar>(rng);
    len = norm(v);
  } while (len < Scalar(1e-6));
  return right_scale(v, Scalar(1) / len);
}

/// Uniform in the Euclidean ball of radius `rmax` in R^{4n}.
template <class Scalar>
HVector<Scalar> random_ball_point(Rng& rng, Eigen::Index n, Scalar rmax = Scalar(0.95)) {
  std::uniform_real_distribution<Scalar> u(0, 1);
  const Scalar r = rmax * std::pow(u(rng), Scalar(1) / Scalar(4 * n));
  return right_scale(random_unit_vector<Scalar>(rng, n), r);
}

template <class Scalar>
HMatrix<Scalar> random_quaternion_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  HMatrix<Scalar> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = random_gaussian_quaternion<Scalar>(rng);
  return m;
}

/// diag(D P, q): a random signed permutation with unit-quaternion entries,
/// together with a unit quaternion in the last slot.
template <class Scalar>
SpMatrix<Scalar> random_linear_isometry(Rng& rng, Eigen::Index n) {
  std::vector<Eigen::Index> perm(n);
  for (Eigen::Index i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  HMatrix<Scalar> a = HMatrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, perm[i]) = random_unit_quaternion<Scalar>(rng);
  return SpMatrix<Scalar>::block_diagonal(a, random_unit_quaternion<Scalar>(rng));
}

/// Product of `factors` Hua matrices with centres of norm <= rmax, followed by
/// a random linear isometry.
template <class Scalar>
SpMatrix<Scalar> random_isometry(Rng& rng, Eigen::Index n, int factors = 2, Scalar rmax = Scalar(0.8)) {
  SpMatrix<Scalar> g = random_linear_isometry<Scalar>(rng, n);
  for (int f = 0; f < factors; ++f) g = HuaInvolution<Scalar>(random_ball_point<Scalar>(rng, n, rmax)).matrix() * g;
  return g;
}

}  // namespace qhb
