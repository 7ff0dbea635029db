#pragma once

// Monte-Carlo discretisation of a region of the ball under the invariant
// measure.  Uniform proposals in a bounding box are importance-weighted by
// the measure density, so each accepted sample q carries weight
// density(q) * box_volume / proposals.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qhb/barycenter.hpp"

namespace qhb {

enum class RegionKind { GeodesicBall, EuclideanBall, Indicator };

template <class Scalar>
class RegionSpec {
 public:
  using Predicate = std::function<bool(const HVector<Scalar>&)>;

  static RegionSpec geodesic_ball(HVector<Scalar> center, Scalar radius) {
    require_in_open_ball(center, "region centre");
    if (!(radius > Scalar(0)) || !std::isfinite(radius)) throw Error(ErrorKind::InvalidInput, "geodesic radius must be positive");
    RegionSpec r(RegionKind::GeodesicBall, center.size());
    r.center_ = std::move(center);
    r.radius_ = radius;
    return r;
  }

  static RegionSpec euclidean_ball(HVector<Scalar> center, Scalar radius) {
    if (!(radius > Scalar(0))) throw Error(ErrorKind::InvalidInput, "euclidean radius must be positive");
    if (!(norm(center) + radius < Scalar(1))) {
      throw Error(ErrorKind::NotInBall, "euclidean ball is not contained in the open unit ball");
    }
    RegionSpec r(RegionKind::EuclideanBall, center.size());
    r.center_ = std::move(center);
    r.radius_ = radius;
    return r;
  }

  /// Arbitrary region given by a membership test; sampled over the whole ball.
  static RegionSpec indicator(Eigen::Index dim, Predicate inside) {
    RegionSpec r(RegionKind::Indicator, dim);
    r.center_ = HVector<Scalar>::Zero(dim);
    r.indicator_ = std::move(inside);
    return r;
  }

  RegionKind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  const HVector<Scalar>& center() const { return center_; }
  Scalar radius() const { return radius_; }

  bool contains(const HVector<Scalar>& q) const {
    switch (kind_) {
      case RegionKind::GeodesicBall: return distance(center_, q) < radius_;
      case RegionKind::EuclideanBall: return squared_norm(HVector<Scalar>(q - center_)) < radius_ * radius_;
      case RegionKind::Indicator: return indicator_(q);
    }
    return false;
  }

  /// Axis-aligned box in R^{4n} containing the region, clipped to [-1, 1].
  std::pair<RealVector<Scalar>, RealVector<Scalar>> bounding_box() const {
    const Eigen::Index m = 4 * dim_;
    RealVector<Scalar> lo = RealVector<Scalar>::Constant(m, Scalar(-1));
    RealVector<Scalar> hi = RealVector<Scalar>::Constant(m, Scalar(1));
    if (kind_ == RegionKind::EuclideanBall) {
      const RealVector<Scalar> c = to_real(center_);
      lo = (c.array() - radius_).max(Scalar(-1));
      hi = (c.array() + radius_).min(Scalar(1));
    } else if (kind_ == RegionKind::GeodesicBall) {
      // B(c, R) lies inside the origin ball of radius d(0, c) + R.
      const Scalar reach = std::tanh((Scalar(2) * std::atanh(norm(center_)) + radius_) / Scalar(2));
      lo.setConstant(-reach);
      hi.setConstant(reach);
    }
    return {lo, hi};
  }

 private:
  RegionSpec(RegionKind kind, Eigen::Index dim) : kind_(kind), dim_(dim) {
    if (dim < 1) throw Error(ErrorKind::DimensionMismatch, "region dimension must be positive");
  }

  RegionKind kind_;
  Eigen::Index dim_;
  HVector<Scalar> center_;
  Scalar radius_{0};
  Predicate indicator_;
};

template <class Scalar>
struct Estimate {
  Scalar value{0};
  Scalar standard_error{0};
};

template <class Scalar>
struct SampleSet {
  WeightedPoints<Scalar> samples;
  std::uint64_t seed{0};
  std::size_t count_requested{0};
  std::size_t count_accepted{0};
  Scalar box_volume{0};
  Scalar total_mass_estimate{0};
  Scalar standard_error{0};  // of the mass estimate
  Scalar moment_estimate{0};
  Scalar moment_standard_error{0};
};

namespace detail {

inline constexpr std::size_t kSampleChunk = 8192;

/// Generator for one chunk, keyed by (seed, chunk index).
inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// SE of the mean of N draws whose values sum to N*mean and whose squares
/// sum to N^2*sq (the form that falls out of importance weights w = Y/N).
template <class Scalar>
Scalar weighted_standard_error(Scalar mean, Scalar sq, std::size_t count) {
  if (count < 2) return Scalar(0);
  const Scalar n = static_cast<Scalar>(count);
  return std::sqrt(std::max(Scalar(0), (n * sq - mean * mean) / (n - Scalar(1))));
}

template <class Scalar>
struct ChunkSamples {
  std::vector<HVector<Scalar>> points;
  std::vector<Scalar> weights;
  Scalar mass{0}, mass_sq{0}, moment{0}, moment_sq{0};
};

}  // namespace detail

template <class Scalar>
SampleSet<Scalar> sample_region(const RegionSpec<Scalar>& spec, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::InvalidInput, "sample count must be at least 1");
  const auto [lo, hi] = spec.bounding_box();
  const RealVector<Scalar> width = hi - lo;
  const Scalar box_volume = width.prod();
  const Scalar scale = box_volume / static_cast<Scalar>(count);
  const HVector<Scalar> origin = HVector<Scalar>::Zero(spec.dim());

  const std::size_t chunks = (count + detail::kSampleChunk - 1) / detail::kSampleChunk;
  std::vector<detail::ChunkSamples<Scalar>> parts(chunks);
  parallel::for_each_chunk(chunks, [&](std::size_t c) {
    auto engine = detail::chunk_engine(seed, c);
    auto& part = parts[c];
    const std::size_t begin = c * detail::kSampleChunk;
    const std::size_t end = std::min(count, begin + detail::kSampleChunk);
    RealVector<Scalar> x(width.size());
    for (std::size_t k = begin; k < end; ++k) {
      for (Eigen::Index d = 0; d < x.size(); ++d) x(d) = lo(d) + width(d) * static_cast<Scalar>(detail::unit_uniform(engine));
      if (!(x.norm() < Scalar(1) - kBoundaryMargin<Scalar>)) continue;
      HVector<Scalar> q = from_real(x);
      if (!spec.contains(q)) continue;
      const Scalar w = measure_density(q) * scale;
      const Scalar dist = distance(origin, q);
      part.mass += w;
      part.mass_sq += w * w;
      part.moment += w * dist;
      part.moment_sq += w * w * dist * dist;
      part.points.push_back(std::move(q));
      part.weights.push_back(w);
    }
  });

  std::vector<HVector<Scalar>> points;
  std::vector<Scalar> weights;
  std::vector<std::array<Scalar, 4>> sums;
  for (auto& part : parts) {
    points.insert(points.end(), std::make_move_iterator(part.points.begin()), std::make_move_iterator(part.points.end()));
    weights.insert(weights.end(), part.weights.begin(), part.weights.end());
    sums.push_back({part.mass, part.mass_sq, part.moment, part.moment_sq});
  }
  if (points.empty()) throw Error(ErrorKind::EmptyRegion, "no proposal out of " + std::to_string(count) + " landed in the region");
  const auto total = parallel::tree_reduce(std::move(sums), [](const auto& a, const auto& b) {
    return std::array<Scalar, 4>{a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
  });

  const std::size_t accepted = points.size();
  SampleSet<Scalar> out{WeightedPoints<Scalar>(std::move(points), std::move(weights))};
  out.seed = seed;
  out.count_requested = count;
  out.count_accepted = accepted;
  out.box_volume = box_volume;
  out.total_mass_estimate = total[0];
  out.standard_error = detail::weighted_standard_error(total[0], total[1], count);
  out.moment_estimate = total[2];
  out.moment_standard_error = detail::weighted_standard_error(total[2], total[3], count);
  return out;
}

/// Monte-Carlo estimate of the first moment of the region about the origin.
template <class Scalar>
Estimate<Scalar> moment_estimate(const RegionSpec<Scalar>& spec, std::size_t count, std::uint64_t seed) {
  const SampleSet<Scalar> set = sample_region(spec, count, seed);
  return {set.moment_estimate, set.moment_standard_error};
}

template <class Scalar>
struct RegionResult {
  SolverResult<Scalar> solver;
  std::uint64_t seed{0};
  std::size_t count_requested{0};
  std::size_t count_accepted{0};
  Scalar total_mass_estimate{0};
  Scalar mass_standard_error{0};
  Scalar moment_estimate{0};
  /// Euclidean error bar of the barycenter: |SE(R(c))| / W.
  Scalar standard_error{0};
  /// The same bar converted with the metric bound ds <= 2|dq| / (1 - |c|^2).
  Scalar hyperbolic_standard_error{0};
};

/// Monte-Carlo error of R(c) propagated to the barycenter as SE(R)/W.
template <class Scalar>
Scalar barycenter_standard_error(const SampleSet<Scalar>& set, const HVector<Scalar>& c) {
  const HuaInvolution<Scalar> phi(c);
  const auto& data = set.samples;
  const Eigen::Index m = 4 * data.dim();
  using Pair = std::pair<RealVector<Scalar>, RealVector<Scalar>>;
  const Pair zero{RealVector<Scalar>::Zero(m), RealVector<Scalar>::Zero(m)};
  const Pair sums = parallel::chunked_reduce<Pair>(
      data.size(),
      [&](std::size_t begin, std::size_t end) {
        Pair acc = zero;
        for (std::size_t i = begin; i < end; ++i) {
          const RealVector<Scalar> y = to_real(HVector<Scalar>(phi(data.point(i)))) * data.weight(i);
          acc.first += y;
          acc.second += y.cwiseAbs2();
        }
        return acc;
      },
      [](const Pair& a, const Pair& b) { return Pair{a.first + b.first, a.second + b.second}; }, zero);
  Scalar var(0);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Scalar se = detail::weighted_standard_error(sums.first(k), sums.second(k), set.count_requested);
    var += se * se;
  }
  return std::sqrt(var) / data.total_weight();
}

template <class Scalar>
RegionResult<Scalar> region_barycenter(const RegionSpec<Scalar>& spec, std::size_t count, std::uint64_t seed,
                                       const SolverConfig<Scalar>& config = {}) {
  const SampleSet<Scalar> set = sample_region(spec, count, seed);
  RegionResult<Scalar> out;
  out.solver = solve(set.samples, config);
  out.seed = seed;
  out.count_requested = set.count_requested;
  out.count_accepted = set.count_accepted;
  out.total_mass_estimate = set.total_mass_estimate;
  out.mass_standard_error = set.standard_error;
  out.moment_estimate = set.moment_estimate;
  out.standard_error = barycenter_standard_error(set, out.solver.barycenter);
  out.hyperbolic_standard_error =
      Scalar(2) * out.standard_error / (Scalar(1) - squared_norm(out.solver.barycenter));
  return out;
}

}  // namespace qhb
