#include <doctest.h>

#include "support.hpp"

using namespace qhb;
using qhb::test::dist;
using qhb::test::point;

namespace {
const double kLn3 = std::log(3.0);
const double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("distance") {
  CHECK(distance(point(0), point(0.5)) == doctest::Approx(kLn3).epsilon(1e-15));
  CHECK(distance(point(0.2, 0.1), point(0.2, 0.1)) == 0.0);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index n = 1 + t % 3;
    const HVec v = random_unit_vector<double>(rng, n);
    CHECK(distance(HVec(HVec::Zero(n)), right_scale(v, std::tanh(1.7 / 2))) == doctest::Approx(1.7).epsilon(1e-14));
  }
  CHECK_THROWS_AS(distance(point(0), point(1.0)), Error);
  CHECK_THROWS_AS(distance(point(0), test::point2(Quat(0.1), Quat(0.1))), Error);
}

TEST_CASE("Poisson kernel form of cosh^2(d/2)") {
  CHECK(cosh2_half_distance(point(0.3, 0.2), point(0.3, 0.2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosh2_half_distance(point(0), point(0, 0, 0.5)) == doctest::Approx(4.0 / 3).epsilon(1e-15));
  const HVec x = point(0, 0, 0.3), y = point(0, 0, 0, 0.4);
  CHECK(cosh2_half_distance(x, y) == doctest::Approx(std::pow(std::cosh(distance(x, y) / 2), 2)).epsilon(1e-14));
  CHECK_THROWS_AS(cosh2_half_distance(point(0), point(2.0)), Error);
}

TEST_CASE("property: metric axioms and isometry invariance") {
  Rng rng(13);
  double tri = 0, iso = 0, poisson = 0, sym = 0;
  for (int t = 0; t < 5000; ++t) {
    const Eigen::Index n = 1 + t % 3;
    const HVec p = random_ball_point<double>(rng, n);
    const HVec q = random_ball_point<double>(rng, n);
    const HVec r = random_ball_point<double>(rng, n);
    tri = std::max(tri, distance(p, r) - distance(p, q) - distance(q, r));
    sym = std::max(sym, std::abs(distance(p, q) - distance(q, p)));
    const SpMatrix<double> g = random_isometry<double>(rng, n, 2, 0.5);
    const HVec a = random_ball_point<double>(rng, n, 0.8);
    const HVec b = random_ball_point<double>(rng, n, 0.8);
    iso = std::max(iso, std::abs(distance(sp_apply(g, a), sp_apply(g, b)) - distance(a, b)));
    poisson = std::max(poisson, std::abs(std::log(cosh2_half_distance(p, q)) - 2 * std::log(std::cosh(distance(p, q) / 2))));
  }
  CHECK(tri <= 1e-10);
  CHECK(iso <= 1e-10);
  CHECK(poisson <= 1e-12);
  CHECK(sym <= 1e-12);
}

TEST_CASE("geodesic charts") {
  SUBCASE("origin chart is tanh(t/2) v") {
    const GeodesicChart<double> chart(point(0), point(1));
    CHECK(dist(geodesic_point(chart, 0.0), point(0)) == 0.0);
    CHECK(dist(chart.point(kLn3), point(0.5)) < 1e-15);
    double last = 0;
    for (double t = 1; t <= 30; t += 1) {
      const double r = norm(chart.point(t));
      CHECK(r > last - 1e-16);
      CHECK(r <= 1.0);
      last = r;
    }
    CHECK(last == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("direction is normalised and zero is rejected") {
    const GeodesicChart<double> chart(point(0), point(0, 3, 4));
    CHECK(norm(chart.direction()) == doctest::Approx(1.0).epsilon(1e-15));
    try {
      GeodesicChart<double>(point(0.2), point(0));
      FAIL("expected DegenerateGeodesic");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateGeodesic);
    }
  }
  SUBCASE("t is arc length from the base") {
    Rng rng(23);
    for (int k = 0; k < 100; ++k) {
      const Eigen::Index n = 1 + k % 3;
      const GeodesicChart<double> chart(random_ball_point<double>(rng, n, 0.8), random_unit_vector<double>(rng, n));
      CHECK(dist(chart.point(0), chart.base()) < 1e-15);
      for (double t : {-2.0, -0.3, 0.7, 2.5}) {
        CHECK(distance(chart.point(0), chart.point(t)) == doctest::Approx(std::abs(t)).epsilon(1e-10));
      }
      CHECK(distance(chart.point(-1.0), chart.point(1.5)) == doctest::Approx(2.5).epsilon(1e-10));
    }
  }
  SUBCASE("between two points") {
    CHECK(dist(geodesic_midpoint(point(0), point(0.5)), point(2 - std::sqrt(3.0))) < 1e-15);
    CHECK(dist(geodesic_midpoint(point(1.0 / 3), point(5.0 / 7)), point((13 - 4 * std::sqrt(3.0)) / 11)) < 1e-14);
    Rng rng(29);
    for (int k = 0; k < 200; ++k) {
      const Eigen::Index n = 1 + k % 3;
      const HVec p = random_ball_point<double>(rng, n);
      const HVec q = random_ball_point<double>(rng, n);
      const GeodesicChart<double> chart = geodesic_between(p, q);
      CHECK(dist(chart.point(distance(p, q)), q) <= 1e-10);
      const HVec m = geodesic_midpoint(p, q);
      CHECK(distance(m, p) == doctest::Approx(distance(m, q)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(geodesic_between(point(0.3), point(0.3)), Error);
  }
}

TEST_CASE("measure density") {
  CHECK(measure_density(point(0)) == 16.0);
  CHECK(measure_density(HVec(HVec::Zero(2))) == 256.0);
  CHECK(measure_density(point(0.5)) == doctest::Approx(16 / std::pow(0.75, 4)).epsilon(1e-15));
  CHECK_THROWS_AS(measure_density(point(1.0)), Error);
  Rng rng(37);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index n = 1 + t % 3;
    const HuaInvolution<double> phi(random_ball_point<double>(rng, n));
    const HVec z = random_ball_point<double>(rng, n);
    const double lhs = jacobian_det(phi, z) * measure_density(phi(z));
    CHECK(std::abs(lhs - measure_density(z)) / measure_density(z) <= 1e-10);
  }
}

TEST_CASE("ball volume") {
  CHECK(ball_volume(0.0, 1) == 0.0);
  CHECK(ball_volume(0.0, 3) == 0.0);
  CHECK(ball_volume(kLn3, 1) == doctest::Approx(88 * kPi * kPi / 81).epsilon(1e-14));
  for (int n : {1, 2}) {
    for (double rho : {0.5, kLn3, 2.0}) {
      const double oracle = test::radial_volume(rho, n);
      CHECK(std::abs(ball_volume(rho, n) - oracle) / oracle <= 1e-8);
    }
    const double rho = 1e-3;
    const double limit = std::pow(kPi, 2 * n) / std::tgamma(2 * n + 1.0);
    CHECK(std::abs(ball_volume(rho, n) / std::pow(rho, 4 * n) - limit) / limit <= 1e-4);
  }
  // Volume grows with the radius.
  double last = 0;
  for (double rho = 0.25; rho < 5; rho += 0.25) {
    CHECK(ball_volume(rho, 2) > last);
    last = ball_volume(rho, 2);
  }
  CHECK_THROWS_AS(ball_volume(-1.0, 1), Error);
  CHECK_THROWS_AS(ball_volume(1.0, 0), Error);
}

TEST_CASE("sphere area") {
  CHECK(unit_sphere_area<double>(1) == doctest::Approx(2 * kPi * kPi).epsilon(1e-15));
  for (int n = 1; n <= 4; ++n) CHECK(unit_sphere_area<double>(n) == doctest::Approx(test::sphere_area_gamma(n)).epsilon(1e-14));
}

TEST_CASE("convexity profile") {
  SUBCASE("origin target gives f'' = 1/2 at t = 0") {
    const ConvexityProfile<double> zero(0.0, 0.0);
    CHECK(zero.second_derivative(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(convexity_second_derivative(zero, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // f(t) = 2 log cosh(t/2), so f'' = 1 / (2 cosh^2(t/2)).
    for (double t : {-3.0, -1.0, 0.5, 2.0}) {
      CHECK(zero.second_derivative(t) == doctest::Approx(0.5 / std::pow(std::cosh(t / 2), 2)).epsilon(1e-13));
    }
  }
  SUBCASE("N at the endpoints") {
    const ConvexityProfile<double> p(0.3, 0.5);
    CHECK(p.N(1.0) == doctest::Approx(0.4875).epsilon(1e-15));
    CHECK(p.N(1.0) == doctest::Approx((1 - 0.25) * (1 + 0.25 - 0.6)).epsilon(1e-15));
    CHECK(p.N(-1.0) == doctest::Approx((1 - 0.25) * (1 + 0.25 + 0.6)).epsilon(1e-15));
  }
  SUBCASE("invalid profiles") {
    for (auto [a, r] : {std::pair{0.0, 1.0}, std::pair{0.6, 0.5}, std::pair{-0.6, 0.5}, std::pair{0.0, -0.1}}) {
      try {
        ConvexityProfile<double>(a, r);
        FAIL("expected InvalidProfile");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidProfile);
      }
    }
  }
  SUBCASE("positivity on random profiles") {
    Rng rng(43);
    std::uniform_real_distribution<double> u(0, 1);
    double smallest = 1;
    for (int k = 0; k < 1000; ++k) {
      const double r = 0.999 * u(rng);
      const ConvexityProfile<double> p((2 * u(rng) - 1) * r, r);
      for (double t = -10; t <= 10; t += 0.25) smallest = std::min(smallest, p.second_derivative(t));
      CHECK(p.N(1.0) > 0);
      CHECK(p.N(-1.0) > 0);
    }
    CHECK(smallest > 0);
  }
  SUBCASE("closed form against finite differences along origin geodesics") {
    Rng rng(47);
    double worst = 0;
    for (int k = 0; k < 300; ++k) {
      const Eigen::Index n = 1 + k % 3;
      const HVec v = random_unit_vector<double>(rng, n);
      const HVec y = random_ball_point<double>(rng, n);
      const auto profile = ConvexityProfile<double>::along(v, y);
      auto f = [&](double s) { return std::log(cosh2_half_distance(right_scale(v, std::tanh(s / 2)), y)); };
      const double h = 1e-3;
      for (double t = -4; t <= 4; t += 0.5) {
        const double fd = (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)) / (12 * h * h);
        worst = std::max(worst, std::abs(fd - profile.second_derivative(t)));
      }
    }
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("coercivity bound on [0, 50]") {
  for (int k = 0; k <= 500; ++k) {
    const double t = 0.1 * k;
    const double lhs = 2 * std::log(std::cosh(t / 2));
    CHECK(lhs >= t - 2 * std::log(2.0) - 1e-13);
  }
}
