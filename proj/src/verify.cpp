#include "qhb/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <Eigen/LU>

#include "qhb/measure_sets.hpp"
#include "qhb/random.hpp"

namespace qhb::verify {

namespace {

class Tracker {
 public:
  Tracker(std::string module, std::string name, double tolerance)
      : out_{std::move(module), std::move(name), 0.0, tolerance, 0, true, {}} {}

  void observe(double error) {
    ++out_.trials;
    if (!std::isfinite(error)) {
      finite_ = false;
      return;
    }
    out_.max_error = std::max(out_.max_error, error);
  }

  void fail(std::string why) {
    failed_ = true;
    out_.note = std::move(why);
  }

  PropertyOutcome finish(std::string note = {}) {
    out_.passed = finite_ && !failed_ && out_.max_error <= out_.tolerance;
    if (!finite_) out_.note = "non-finite error observed";
    else if (out_.note.empty()) out_.note = std::move(note);
    return out_;
  }

 private:
  PropertyOutcome out_;
  bool finite_{true};
  bool failed_{false};
};

double qdist(const Quat& a, const Quat& b) { return (a - b).norm(); }

double vdist(const HVec& a, const HVec& b) { return norm(HVec(a - b)); }

Eigen::Index random_dim(Rng& rng) { return std::uniform_int_distribution<Eigen::Index>(1, 3)(rng); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t scaled(std::size_t trials, std::size_t divisor) {
  return trials == 0 ? 0 : std::max<std::size_t>(1, trials / divisor);
}

WeightedPoints<double> random_data(Rng& rng, Eigen::Index n, std::size_t count, double rmax = 0.9) {
  std::vector<HVec> points;
  std::vector<double> weights;
  for (std::size_t i = 0; i < count; ++i) {
    points.push_back(random_ball_point<double>(rng, n, rmax));
    weights.push_back(uniform(rng, 0.1, 2.0));
  }
  return {std::move(points), std::move(weights)};
}

// quaternion_core

void quaternion_suites(Report& report, Rng& rng, std::size_t trials) {
  Tracker mult("quaternion_core", "multiplicativity", 1e-12);
  Tracker anti("quaternion_core", "conjugate anti-homomorphism", 1e-12);
  Tracker assoc("quaternion_core", "associativity", 1e-12);
  Tracker herm("quaternion_core", "hermitian symmetry", 1e-12);
  for (std::size_t t = 0; t < trials; ++t) {
    const Quat p = random_quaternion<double>(rng, 10.0);
    const Quat q = random_quaternion<double>(rng, 10.0);
    const Quat r = random_quaternion<double>(rng, 10.0);
    mult.observe(std::abs((p * q).norm() - p.norm() * q.norm()));
    anti.observe(qdist((p * q).conj(), q.conj() * p.conj()));
    assoc.observe(qdist((p * q) * r, p * (q * r)));
    const Eigen::Index n = random_dim(rng);
    const HVec z = random_ball_point<double>(rng, n, 1.0);
    const HVec w = random_ball_point<double>(rng, n, 1.0);
    herm.observe(qdist(inner(z, w).conj(), inner(w, z)));
  }
  for (Tracker* tr : {&mult, &anti, &assoc, &herm}) report.outcomes.push_back(tr->finish());
}

// mobius

/// Real 4n x 4n Jacobian of z -> phi(z) by a 5-point stencil.
Eigen::MatrixXd numeric_jacobian(const HuaInvolution<double>& phi, const HVec& z, double h) {
  const RealVector<double> x = to_real(z);
  const Eigen::Index m = x.size();
  Eigen::MatrixXd jac(m, m);
  auto eval = [&](Eigen::Index k, double offset) {
    RealVector<double> y = x;
    y(k) += offset;
    return to_real(phi(from_real(y)));
  };
  for (Eigen::Index k = 0; k < m; ++k) {
    jac.col(k) = (-eval(k, 2 * h) + 8 * eval(k, h) - 8 * eval(k, -h) + eval(k, -2 * h)) / (12 * h);
  }
  return jac;
}

void mobius_suites(Report& report, Rng& rng, std::size_t trials, const HuaApply& apply) {
  Tracker invol("mobius", "involution", 1e-12);
  Tracker normrel("mobius", "norm relation", 1e-12);
  Tracker member("mobius", "Sp(n,1) membership", 1e-10);
  Tracker jac("mobius", "jacobian vs finite differences", 1e-6);
  Tracker measure("mobius", "measure invariance", 1e-10);
  Tracker consist("mobius", "projective consistency", 1e-12);
  Tracker ainv("mobius", "A_u inverse", 1e-12);
  Tracker fixed("mobius", "fixed point", 1e-12);
  Tracker inverse("mobius", "sp_inverse round trip", 1e-10);
  Tracker off("mobius", "intertwining off-diagonal blocks", 1e-10);
  Tracker pointwise("mobius", "intertwining pointwise", 1e-10);

  for (std::size_t t = 0; t < trials; ++t) {
    const Eigen::Index n = random_dim(rng);
    const HVec u = random_ball_point<double>(rng, n);
    const HVec z = random_ball_point<double>(rng, n);
    const HuaInvolution<double> phi(u);

    const HVec w = apply(phi, z);
    invol.observe(vdist(apply(phi, w), z));
    const double denom = (Quat(1.0) - inner(z, u)).squaredNorm();
    normrel.observe(std::abs(squared_norm(w) + (1 - squared_norm(u)) * (1 - squared_norm(z)) / denom - 1));

    const SpMatrix<double> m = phi.matrix();
    const SpMatrix<double> prod = m * HuaInvolution<double>(random_ball_point<double>(rng, n)).matrix() *
                                  HuaInvolution<double>(random_ball_point<double>(rng, n)).matrix();
    member.observe(std::max(m.membership_error() / m.scale(), prod.membership_error() / prod.scale()));

    consist.observe(vdist(sp_apply(m, z), phi(z)));

    const double s = phi.s();
    const HMat a_inv = outer(u, u) * Quat(-1.0 / ((1 + s) * s)) + identity<double>(n) * Quat(1.0 / s);
    ainv.observe(max_abs(HMat(matmul(phi.A(), a_inv) - identity<double>(n))));

    const HVec fp = phi.fixed_point();
    fixed.observe(vdist(phi(fp), fp));

    const SpMatrix<double> g = random_isometry<double>(rng, n);
    inverse.observe(max_abs(HMat((g * sp_inverse(g)).matrix() - identity<double>(n + 1))));

    const HVec c = random_ball_point<double>(rng, n, 0.8);
    const HVec gc = sp_apply(g, c);
    const HMat raw = matmul(matmul(HuaInvolution<double>(gc).matrix().matrix(), g.matrix()),
                            HuaInvolution<double>(c).matrix().matrix());
    const double scale = std::max(1.0, max_abs(g.matrix()));
    double worst = 0;
    for (Eigen::Index i = 0; i < n; ++i) worst = std::max({worst, raw(i, n).norm(), raw(n, i).norm()});
    off.observe(worst / scale);
    const SpMatrix<double> factor = intertwine_factor(g, c);
    const HVec y = random_ball_point<double>(rng, n, 0.8);
    pointwise.observe(vdist(sp_apply(factor, HuaInvolution<double>(c)(y)), HuaInvolution<double>(gc)(sp_apply(g, y))));

    const double lhs = jacobian_det(phi, z) * measure_density(phi(z));
    const double rhs = measure_density(z);
    measure.observe(std::abs(lhs - rhs) / rhs);

    {
      const double h = 1e-3 * (1 - norm(z));
      const double numeric = std::abs(numeric_jacobian(phi, z, h).determinant());
      const double closed = phi.jacobian_det(z);
      jac.observe(std::abs(numeric - closed) / closed);
    }
  }
  report.outcomes.push_back(invol.finish());
  report.outcomes.push_back(normrel.finish());
  report.outcomes.push_back(member.finish("relative to max(1, max|entry|^2)"));
  report.outcomes.push_back(jac.finish("relative"));
  report.outcomes.push_back(measure.finish("relative"));
  report.outcomes.push_back(consist.finish());
  report.outcomes.push_back(ainv.finish());
  report.outcomes.push_back(fixed.finish());
  report.outcomes.push_back(inverse.finish());
  report.outcomes.push_back(off.finish("relative to max(1, max|g entry|)"));
  report.outcomes.push_back(pointwise.finish());
}

// hyperbolic_geometry

void hyperbolic_suites(Report& report, Rng& rng, std::size_t trials) {
  Tracker tri("hyperbolic_geometry", "triangle inequality", 1e-10);
  Tracker iso("hyperbolic_geometry", "isometry invariance", 1e-10);
  Tracker poisson("hyperbolic_geometry", "Poisson-distance consistency", 1e-12);
  Tracker coerc("hyperbolic_geometry", "coercivity bound", 0.0);
  Tracker fdd("hyperbolic_geometry", "f'' vs finite differences", 1e-5);
  Tracker pos("hyperbolic_geometry", "f'' positivity", 0.0);

  for (std::size_t t = 0; t < trials; ++t) {
    const Eigen::Index n = random_dim(rng);
    const HVec p = random_ball_point<double>(rng, n);
    const HVec q = random_ball_point<double>(rng, n);
    const HVec r = random_ball_point<double>(rng, n);
    tri.observe(std::max(0.0, distance(p, r) - distance(p, q) - distance(q, r)));

    const SpMatrix<double> g = random_isometry<double>(rng, n, 2, 0.5);
    const HVec a = random_ball_point<double>(rng, n, 0.8);
    const HVec b = random_ball_point<double>(rng, n, 0.8);
    iso.observe(std::abs(distance(sp_apply(g, a), sp_apply(g, b)) - distance(a, b)));

    poisson.observe(std::abs(std::log(cosh2_half_distance(p, q)) - 2 * std::log(std::cosh(distance(p, q) / 2))));
  }

  // log cosh^2(t/2) >= t - 2 log 2; the gap 2 log(1 + e^-t) drops below one
  // ulp of t well before t = 50, so equality to rounding counts as holding.
  if (trials > 0) {
    for (int k = 0; k <= 5000; ++k) {
      const double t = 50.0 * k / 5000.0;
      const double lhs = 2 * std::log(std::cosh(t / 2));
      const double rhs = t - 2 * std::numbers::ln2;
      const double slack = 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(rhs));
      coerc.observe(std::max(0.0, rhs - lhs - slack));
    }
  }

  for (std::size_t t = 0; t < trials; ++t) {
    const Eigen::Index n = random_dim(rng);
    const HVec v = random_unit_vector<double>(rng, n);
    const HVec y = random_ball_point<double>(rng, n);
    const auto profile = ConvexityProfile<double>::along(v, y);
    auto f = [&](double s) { return std::log(cosh2_half_distance(right_scale(v, std::tanh(s / 2)), y)); };
    for (int k = -8; k <= 8; ++k) {
      const double s = 0.5 * k;
      const double h = 1e-3;
      const double fd = (-f(s + 2 * h) + 16 * f(s + h) - 30 * f(s) + 16 * f(s - h) - f(s - 2 * h)) / (12 * h * h);
      const double closed = profile.second_derivative(s);
      fdd.observe(std::abs(fd - closed));
      pos.observe(closed > 0 ? 0.0 : 1.0);
    }
    // Arbitrary admissible (a, r) pairs, out to t = +-10.
    const double rr = uniform(rng, 0.0, 0.999);
    const ConvexityProfile<double> generic(uniform(rng, -rr, rr), rr);
    for (int k = -20; k <= 20; ++k) pos.observe(generic.second_derivative(0.5 * k) > 0 ? 0.0 : 1.0);
  }

  report.outcomes.push_back(tri.finish("violation beyond d(p,q)+d(q,r)"));
  report.outcomes.push_back(iso.finish());
  report.outcomes.push_back(poisson.finish());
  report.outcomes.push_back(coerc.finish("violation on 5001 points of [0, 50]"));
  report.outcomes.push_back(fdd.finish("absolute; origin geodesics, t in [-4, 4]"));
  report.outcomes.push_back(pos.finish("count of non-positive values"));
}

// barycenter

void barycenter_suites(Report& report, Rng& rng, std::size_t trials) {
  Tracker grad("barycenter", "residual-gradient identity", 1e-5);
  Tracker unique("barycenter", "initialization independence", 1e-8);
  Tracker mono("barycenter", "energy monotonicity", 0.0);
  Tracker symm("barycenter", "symmetric four-point set", 1e-10);
  Tracker convex("barycenter", "convexity along geodesics", 0.0);
  Tracker push("barycenter", "pushforward invariance", 1e-8);

  const SolverConfig<double> config;
  const std::size_t grad_trials = scaled(trials, 10);
  for (std::size_t t = 0; t < grad_trials; ++t) {
    const Eigen::Index n = random_dim(rng);
    const auto data = random_data(rng, n, 3 + t % 4);
    grad.observe(gradient_check(data, random_ball_point<double>(rng, n, 0.8)));
  }

  const std::size_t solve_trials = scaled(trials, 100);
  for (std::size_t t = 0; t < solve_trials; ++t) {
    const auto data = random_data(rng, 2, 10);
    std::vector<HVec> found;
    for (int k = 0; k < 5; ++k) {
      const auto result = solve(data, config, std::optional<HVec>(random_ball_point<double>(rng, 2, 0.9)));
      if (!result.converged) unique.fail("solver did not converge");
      found.push_back(result.barycenter);
      const auto& hist = result.energy_history;
      // Accepted steps either lower G or sit within rounding of it.  Flat
      // steps only happen next to the minimizer, so its resolution applies.
      const double slack = energy_resolution(data, HVec(HVec::Zero(2)), hist.front()) +
                           energy_resolution(data, result.barycenter, hist.front());
      for (std::size_t i = 1; i < hist.size(); ++i) mono.observe(std::max(0.0, hist[i] - hist[i - 1] - slack));
    }
    double worst = 0;
    for (std::size_t a = 0; a < found.size(); ++a)
      for (std::size_t b = a + 1; b < found.size(); ++b) worst = std::max(worst, distance(found[a], found[b]));
    unique.observe(worst);

    const GeodesicChart<double> chart(random_ball_point<double>(rng, 2, 0.5), random_unit_vector<double>(rng, 2));
    const double h = 0.05;
    for (int k = -30; k <= 30; ++k) {
      const double s = 0.1 * k;
      const double second = energy(data, chart.point(s - h)) - 2 * energy(data, chart.point(s)) + energy(data, chart.point(s + h));
      convex.observe(second > 0 ? 0.0 : 1.0);
    }

    const auto small = random_data(rng, 2, 5);
    push.observe(pushforward_invariance(small, random_isometry<double>(rng, 2), config));
  }

  if (trials > 0) {
    std::vector<HVec> pts(4, HVec(1));
    pts[0](0) = Quat(0.5);
    pts[1](0) = Quat(-0.5);
    pts[2](0) = Quat(0.0, 0.5, 0.0, 0.0);
    pts[3](0) = Quat(0.0, -0.5, 0.0, 0.0);
    const auto result = solve(WeightedPoints<double>::uniform(pts), config);
    symm.observe(norm(result.barycenter));
  }

  report.outcomes.push_back(grad.finish("componentwise, h = 1e-5"));
  report.outcomes.push_back(unique.finish("max pairwise distance over 5 starts"));
  report.outcomes.push_back(mono.finish("increase beyond rounding slack"));
  report.outcomes.push_back(symm.finish());
  report.outcomes.push_back(convex.finish("count of non-positive second differences"));
  report.outcomes.push_back(push.finish());
}

// measure_sets

void measure_suites(Report& report, Rng& rng, std::size_t trials) {
  Tracker determinism("measure_sets", "sampling determinism", 0.0);
  Tracker mass("measure_sets", "mass consistency", 3.0);
  Tracker centre("measure_sets", "geodesic-ball barycenter", 3.0);
  if (trials == 0) {
    for (Tracker* tr : {&determinism, &mass, &centre}) report.outcomes.push_back(tr->finish());
    return;
  }
  const std::size_t count = std::min<std::size_t>(100000, std::max<std::size_t>(1000, 10 * trials));
  const std::uint64_t seed = rng();

  const HVec origin = HVec::Zero(1);
  const auto ball = RegionSpec<double>::geodesic_ball(origin, std::log(3.0));
  const auto first = sample_region(ball, count, seed);
  const auto second = sample_region(ball, count, seed);
  determinism.observe(first.samples.points() == second.samples.points() && first.samples.weights() == second.samples.weights() &&
                              first.total_mass_estimate == second.total_mass_estimate
                          ? 0.0
                          : 1.0);
  const double exact = ball_volume(std::log(3.0), 1);
  mass.observe(std::abs(first.total_mass_estimate - exact) / first.standard_error);

  for (int k = 0; k < 10; ++k) {
    const Eigen::Index n = 1;
    const HVec c = random_ball_point<double>(rng, n, 0.5);
    const auto result = region_barycenter(RegionSpec<double>::geodesic_ball(c, 1.0), count, rng());
    centre.observe(vdist(result.solver.barycenter, c) / result.standard_error);
  }
  report.outcomes.push_back(determinism.finish("bitwise comparison of two runs"));
  report.outcomes.push_back(mass.finish("error in units of SE, B(0, ln 3), n = 1"));
  report.outcomes.push_back(centre.finish("error in units of SE, 10 centres, radius 1"));
}

}  // namespace

bool Report::passed() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const PropertyOutcome& o) { return o.passed; });
}

const PropertyOutcome* Report::find(const std::string& name) const {
  for (const auto& o : outcomes)
    if (o.name == name) return &o;
  return nullptr;
}

Report run(const Options& options) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  Rng rng(options.seed);
  const std::size_t t = options.trials;
  if (t == 0) report.warnings.push_back("trials = 0: every suite passes vacuously");
  quaternion_suites(report, rng, t);
  mobius_suites(report, rng, t, options.hua_apply);
  hyperbolic_suites(report, rng, t);
  barycenter_suites(report, rng, t);
  measure_suites(report, rng, t);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string format_text(const Report& report) {
  std::ostringstream out;
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  std::string module;
  char line[256];
  for (const auto& o : report.outcomes) {
    if (o.module != module) {
      module = o.module;
      out << module << '\n';
    }
    std::snprintf(line, sizeof line, "  %-4s %-34s max %-10.3g tol %-8.3g trials %zu", o.passed ? "ok" : "FAIL", o.name.c_str(),
                  o.max_error, o.tolerance, o.trials);
    out << line;
    if (!o.note.empty()) out << "  (" << o.note << ')';
    out << '\n';
  }
  std::snprintf(line, sizeof line, "%s in %.2f s\n", report.passed() ? "all properties hold" : "FAILED", report.seconds);
  out << line;
  return out.str();
}

nlohmann::json to_json(const Report& report) {
  nlohmann::json props = nlohmann::json::array();
  for (const auto& o : report.outcomes) {
    props.push_back({{"module", o.module},
                     {"name", o.name},
                     {"max_error", o.max_error},
                     {"tolerance", o.tolerance},
                     {"trials", o.trials},
                     {"passed", o.passed},
                     {"note", o.note}});
  }
  return {{"passed", report.passed()}, {"warnings", report.warnings}, {"seconds", report.seconds}, {"properties", props}};
}

}  // namespace qhb::verify
