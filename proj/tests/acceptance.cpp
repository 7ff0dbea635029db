// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance               run all criteria
//   acceptance --criterion N run one

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qhb/verify.hpp"
#include "support.hpp"

using namespace qhb;
using qhb::test::dist;
using qhb::test::point;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Verdict {
  bool passed = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) passed = false;
    detail << (detail.tellp() > 0 ? "; " : "") << (ok ? "" : "NOT ") << what;
  }
};

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void criterion1(Verdict& v) {
  const auto data = test::two_weighted();
  const auto t0 = Clock::now();
  const auto r = solve(data, SolverConfig<double>{});
  const double ms = ms_since(t0);
  const double err = dist(r.barycenter, point(2.0 / 7));
  const double res = norm(residual(data, point(2.0 / 7)));
  v.check(err <= 1e-10, "|c - 2/7| = " + g(err) + " <= 1e-10");
  v.check(res <= 1e-14, "|R(2/7)| = " + g(res) + " <= 1e-14");
  v.check(ms < 1.0, "solve " + g(ms) + " ms < 1 ms");
}

void criterion2(Verdict& v) {
  const WeightedPoints<double> data({point(0), point(0.5)}, {1.0, 1.0});
  const auto r = solve(data, SolverConfig<double>{});
  const double err = dist(r.barycenter, point(2 - std::sqrt(3.0)));
  const double fixed = dist(r.barycenter, hua_fixed_point(HuaInvolution<double>(point(0.5))));
  v.check(err <= 1e-10, "|c - (2 - sqrt3)| = " + g(err) + " <= 1e-10");
  v.check(fixed <= 1e-12, "|c - fixed point of Phi_1/2| = " + g(fixed) + " <= 1e-12");
}

void criterion3(Verdict& v) {
  const SpMatrix<double> gt = test::translation(1.0 / 3);
  const WeightedPoints<double> data({point(0), point(0.5)}, {1.0, 1.0});
  const WeightedPoints<double> moved({sp_apply(gt, point(0)), sp_apply(gt, point(0.5))}, {1.0, 1.0});
  const HVec c_moved = solve(moved, SolverConfig<double>{}).barycenter;
  const HVec moved_c = sp_apply(gt, solve(data, SolverConfig<double>{}).barycenter);

  using Q = test::QSqrt3;
  const Q third{Q::R(1, 3), 0};
  const Q z{2, -1};
  const Q one{1, 0};
  const Q exact_q = (z + third) / (one + z * third);
  v.check(exact_q == Q{Q::R(13, 11), Q::R(-4, 11)}, "g(2 - sqrt3) = (13 - 4 sqrt3)/11 exactly");
  const double exact = exact_q.value();

  const double gap = distance(c_moved, moved_c);
  const double e1 = dist(c_moved, point(exact));
  const double e2 = dist(moved_c, point(exact));
  v.check(gap <= 1e-10, "d(c(g D), g c(D)) = " + g(gap) + " <= 1e-10");
  v.check(e1 <= 1e-10 && e2 <= 1e-10, "both sides within " + g(std::max(e1, e2)) + " of " + g17(exact));
}

void criterion4(Verdict& v) {
  const auto data = test::three_quaternions();
  const auto t0 = Clock::now();
  const auto r = solve(data, SolverConfig<double>{});
  const double ms = ms_since(t0);
  const Quat c = r.barycenter(0);
  const Quat printed(0.1874, -0.0012, -0.0348, -0.0009);
  const double comp = std::max({std::abs(c.w - printed.w), std::abs(c.x - printed.x), std::abs(c.y - printed.y),
                                std::abs(c.z - printed.z)});
  v.check(comp <= 5e-4, "components (" + g17(c.w) + ", " + g17(c.x) + ", " + g17(c.y) + ", " + g17(c.z) +
                            ") within 5e-4 of (0.1874, -0.0012, -0.0348, -0.0009), max gap " + g(comp));
  v.check(r.residual_norm <= 1e-10, "|R(c)| = " + g(r.residual_norm) + " <= 1e-10");
  v.check(ms < 10.0, "solve " + g(ms) + " ms < 10 ms");
}

void criterion5(Verdict& v) {
  const auto r = solve(test::symmetric_four(), SolverConfig<double>{});
  v.check(norm(r.barycenter) <= 1e-10, "|c| = " + g(norm(r.barycenter)) + " <= 1e-10");
}

void criterion6(Verdict& v) {
  double worst = 0;
  for (int n : {1, 2}) {
    for (double rho : {0.5, std::log(3.0), 2.0}) {
      const double closed = ball_volume(rho, n);
      worst = std::max(worst, std::abs(closed - test::radial_volume(rho, n)) / closed);
    }
  }
  v.check(worst <= 1e-8, "closed form vs quadrature, max relative " + g(worst) + " <= 1e-8");
  double limit = 0;
  for (int n : {1, 2}) {
    const double rho = 1e-3;
    const double euclid = std::pow(std::numbers::pi, 2 * n) / std::tgamma(2.0 * n + 1);
    limit = std::max(limit, std::abs(ball_volume(rho, n) / std::pow(rho, 4 * n) - euclid) / euclid);
  }
  v.check(limit <= 1e-4, "small-rho limit, max relative " + g(limit) + " <= 1e-4");
}

void criterion7(Verdict& v) {
  verify::Options opts;
  opts.trials = 10000;
  const auto t0 = Clock::now();
  const auto report = verify::run(opts);
  const double s = ms_since(t0) / 1000;
  const std::pair<const char*, double> pinned[] = {
      {"involution", 1e-12},
      {"norm relation", 1e-12},
      {"Sp(n,1) membership", 1e-10},
      {"jacobian vs finite differences", 1e-6},
      {"measure invariance", 1e-10},
      {"intertwining off-diagonal blocks", 1e-10},
      {"Poisson-distance consistency", 1e-12},
      {"coercivity bound", 0.0},
      {"f'' vs finite differences", 1e-5},
      {"f'' positivity", 0.0},
  };
  for (const auto& [name, tol] : pinned) {
    const auto* o = report.find(name);
    const bool ok = o && o->passed && o->trials > 0 && o->max_error <= tol;
    v.check(ok, std::string(name) + " " + (o ? g(o->max_error) : "missing") + " <= " + g(tol));
  }
  v.check(report.passed(), "every suite passes");
  v.check(s < 30.0, "verify " + g(s) + " s < 30 s");
}

void criterion8(Verdict& v) {
  const auto t0 = Clock::now();
  const auto ball = region_barycenter(RegionSpec<double>::geodesic_ball(point(0.3), 1.0), 1000000, 2024);
  const double off = dist(ball.solver.barycenter, point(0.3));
  v.check(ball.solver.converged && off <= 3 * ball.standard_error,
          "|c - 0.3 e1| = " + g(off) + " <= 3 SE = " + g(3 * ball.standard_error));
  const auto mass = sample_region(RegionSpec<double>::geodesic_ball(point(0), std::log(3.0)), 1000000, 2025);
  const double exact = 88 * std::numbers::pi * std::numbers::pi / 81;
  const double gap = std::abs(mass.total_mass_estimate - exact);
  v.check(gap <= 3 * mass.standard_error, "|mass - 88 pi^2/81| = " + g(gap) + " <= 3 SE = " + g(3 * mass.standard_error));
  const double s = ms_since(t0) / 1000;
  v.check(s < 60.0, "sampling " + g(s) + " s < 60 s");
}

void criterion9(Verdict& v) {
  Rng rng(9);
  const auto data = test::random_points(rng, 2, 10);
  std::vector<HVec> found;
  for (int k = 0; k < 5; ++k) {
    const auto r = solve(data, SolverConfig<double>{}, std::optional<HVec>(random_ball_point<double>(rng, 2, 0.95)));
    v.check(r.converged, "start " + std::to_string(k) + " converged");
    found.push_back(r.barycenter);
  }
  double worst = 0;
  for (std::size_t a = 0; a < found.size(); ++a)
    for (std::size_t b = a + 1; b < found.size(); ++b) worst = std::max(worst, distance(found[a], found[b]));
  v.check(worst <= 1e-8, "max pairwise d_H = " + g(worst) + " <= 1e-8");
}

const std::function<void(Verdict&)> kCriteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                   criterion6, criterion7, criterion8, criterion9};

bool run_one(int n) {
  Verdict v;
  const auto t0 = Clock::now();
  try {
    kCriteria[n - 1](v);
  } catch (const std::exception& e) {
    v.check(false, std::string("threw ") + e.what());
  }
  std::printf("%s criterion %d (%.1f ms): %s\n", v.passed ? "PASS" : "FAIL", n, ms_since(t0), v.detail.str().c_str());
  std::fflush(stdout);
  return v.passed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "run a single criterion")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  bool ok = true;
  if (criterion > 0) {
    ok = run_one(criterion);
  } else {
    for (int n = 1; n <= 9; ++n) ok = run_one(n) && ok;
  }
  return ok ? 0 : 1;
}
