#include "qhb/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <iterator>
#include <optional>

#include <CLI11.hpp>

#include "qhb/io.hpp"
#include "qhb/verify.hpp"

namespace qhb::cli {

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

io::json load(const std::string& path) {
  if (path == "-") return io::parse(std::string(std::istreambuf_iterator<char>(std::cin), {}));
  return io::read_file(path);
}

struct SolverFlags {
  SolverConfig<double> config;
  bool no_line_search{false};

  void attach(CLI::App* cmd) {
    cmd->add_option("--step", config.step, "initial step length in (0, 1]")->capture_default_str();
    cmd->add_option("--max-iters", config.max_iters, "iteration cap")->capture_default_str();
    cmd->add_option("--tol", config.tol, "stop when |R(c)| <= tol * total weight")->capture_default_str();
    cmd->add_flag("--no-line-search", no_line_search, "take every step at full length");
  }

  SolverConfig<double> get() const {
    SolverConfig<double> c = config;
    c.line_search = !no_line_search;
    c.validate();
    return c;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal barycenters in the quaternionic hyperbolic ball", "qhb"};
  app.require_subcommand(1);

  auto* bary = app.add_subcommand("barycenter", "barycenter of a weighted point set");
  std::string bary_input;
  bary->add_option("input", bary_input, "point-set JSON file, or - for stdin")->required();
  SolverFlags bary_flags;
  bary_flags.attach(bary);

  auto* region = app.add_subcommand("region-barycenter", "barycenter of a region under the invariant measure");
  std::string region_input;
  std::size_t samples = 1000000;
  std::uint64_t seed = 1;
  region->add_option("input", region_input, "region JSON file, or - for stdin")->required();
  region->add_option("--samples", samples, "uniform proposals")->capture_default_str();
  region->add_option("--seed", seed, "random seed")->capture_default_str();
  SolverFlags region_flags;
  region_flags.attach(region);

  auto* volume = app.add_subcommand("volume", "hyperbolic volume of a geodesic ball");
  double rho = 0;
  int vol_dim = 1;
  volume->add_option("--rho", rho, "geodesic radius")->required();
  volume->add_option("--dim", vol_dim, "quaternionic dimension n")->capture_default_str();

  auto* dist = app.add_subcommand("distance", "hyperbolic distance between two points");
  std::string p_text, q_text;
  dist->add_option("p", p_text, "point: a real number, [w,x,y,z], or [[w,x,y,z], ...]")->required();
  dist->add_option("q", q_text, "point")->required();

  auto* ener = app.add_subcommand("energy", "energy of a point set at a point");
  std::string energy_input, at_text;
  ener->add_option("input", energy_input, "point-set JSON file, or - for stdin")->required();
  ener->add_option("--at", at_text, "evaluation point")->required();

  auto* ver = app.add_subcommand("verify", "run the randomised property suites");
  verify::Options vopts;
  bool as_json = false;
  ver->add_option("--seed", vopts.seed, "random seed")->capture_default_str();
  ver->add_option("--trials", vopts.trials, "trials per suite")->capture_default_str();
  ver->add_flag("--json", as_json, "print the report as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*bary) {
      const auto config = bary_flags.get();
      const auto data = io::point_set_from_json(load(bary_input));
      const auto result = solve(data, config);
      out << io::result_to_json(result, config).dump(2) << '\n';
      return result.converged ? kExitOk : kExitNotConverged;
    }
    if (*region) {
      const auto config = region_flags.get();
      const auto spec = io::region_from_json(load(region_input));
      const auto result = region_barycenter(spec, samples, seed, config);
      out << io::region_result_to_json(result, config).dump(2) << '\n';
      return result.solver.converged ? kExitOk : kExitNotConverged;
    }
    if (*volume) {
      out << format_number(ball_volume(rho, vol_dim)) << '\n';
      return kExitOk;
    }
    if (*dist) {
      out << format_number(distance(io::point_from_argument(p_text), io::point_from_argument(q_text))) << '\n';
      return kExitOk;
    }
    if (*ener) {
      const auto data = io::point_set_from_json(load(energy_input));
      out << format_number(energy(data, io::point_from_argument(at_text))) << '\n';
      return kExitOk;
    }
    if (*ver) {
      const auto report = verify::run(vopts);
      if (as_json) out << verify::to_json(report).dump(2) << '\n';
      else out << verify::format_text(report);
      return report.passed() ? kExitOk : kExitInputError;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::NotConverged ? kExitNotConverged : kExitInputError;
  }
  return kExitInputError;
}

}  // namespace qhb::cli
