#include "qhb/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace qhb::io {

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::InvalidInput, where + ": " + what);
}

double number_from_json(const json& j, const std::string& where) {
  if (!j.is_number()) invalid(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(where, "expected a finite number");
  return v;
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) invalid(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) invalid(where, std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace

json to_json(const Quat& q) { return json::array({q.w, q.x, q.y, q.z}); }

json to_json(const HVec& z) {
  json out = json::array();
  for (Eigen::Index i = 0; i < z.size(); ++i) out.push_back(to_json(z(i)));
  return out;
}

json to_json(const SpMatrix<double>& g) {
  const Eigen::Index n = g.dim();
  json a_block = json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < n; ++k) row.push_back(to_json(g(i, k)));
    a_block.push_back(std::move(row));
  }
  json beta = json::array();
  for (Eigen::Index k = 0; k < n; ++k) beta.push_back(to_json(g(n, k)));
  return {{"A", a_block}, {"alpha", to_json(HVec(g.alpha()))}, {"beta", beta}, {"a", to_json(g.a())}};
}

Quat quaternion_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) invalid(where, "expected [w, x, y, z]");
  return {number_from_json(j[0], where + "[0]"), number_from_json(j[1], where + "[1]"),
          number_from_json(j[2], where + "[2]"), number_from_json(j[3], where + "[3]")};
}

HVec hvector_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) invalid(where, "expected a non-empty array of quaternions");
  HVec out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) out(i) = quaternion_from_json(j[i], where + "[" + std::to_string(i) + "]");
  return out;
}

HMat hmatrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) invalid(where, "expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  HMat out(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) invalid(row_where, "rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = quaternion_from_json(j[r][c], row_where + "[" + std::to_string(c) + "]");
  }
  return out;
}

SpMatrix<double> sp_matrix_from_json(const json& j) {
  const HMat a_block = hmatrix_from_json(field(j, "A", "matrix"), "A");
  const HVec alpha = hvector_from_json(field(j, "alpha", "matrix"), "alpha");
  const HVec beta = hvector_from_json(field(j, "beta", "matrix"), "beta");
  const Quat a = quaternion_from_json(field(j, "a", "matrix"), "a");
  return SpMatrix<double>::from_blocks(a_block, alpha, beta.transpose(), a);
}

WeightedPoints<double> point_set_from_json(const json& j) {
  const json& dim_json = field(j, "dimension", "point set");
  if (!dim_json.is_number_integer() || dim_json.get<long>() < 1) invalid("dimension", "expected a positive integer");
  const auto dim = static_cast<Eigen::Index>(dim_json.get<long>());
  const json& pts = field(j, "points", "point set");
  if (!pts.is_array()) invalid("points", "expected an array");
  if (pts.empty()) throw Error(ErrorKind::EmptyData, "points array is empty");

  std::vector<HVec> points;
  std::vector<double> weights;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string where = "points[" + std::to_string(i) + "]";
    HVec q = hvector_from_json(field(pts[i], "coords", where), where + ".coords");
    if (q.size() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "point " + std::to_string(i) + " has " + std::to_string(q.size()) +
                                                    " coordinates, expected " + std::to_string(dim));
    }
    double w = 1.0;
    if (auto it = pts[i].find("weight"); it != pts[i].end()) w = number_from_json(*it, where + ".weight");
    points.push_back(std::move(q));
    weights.push_back(w);
  }
  return {std::move(points), std::move(weights)};
}

json point_set_to_json(const WeightedPoints<double>& data) {
  json pts = json::array();
  for (std::size_t i = 0; i < data.size(); ++i) pts.push_back({{"coords", to_json(data.point(i))}, {"weight", data.weight(i)}});
  return {{"dimension", data.dim()}, {"points", pts}};
}

RegionSpec<double> region_from_json(const json& j) {
  const json& kind = field(j, "kind", "region");
  if (!kind.is_string()) invalid("kind", "expected a string");
  const json& dim_json = field(j, "dimension", "region");
  if (!dim_json.is_number_integer() || dim_json.get<long>() < 1) invalid("dimension", "expected a positive integer");
  const HVec center = hvector_from_json(field(j, "center", "region"), "center");
  if (center.size() != dim_json.get<long>()) throw Error(ErrorKind::DimensionMismatch, "center does not match dimension");
  const double radius = number_from_json(field(j, "radius", "region"), "radius");
  const auto k = kind.get<std::string>();
  if (k == "geodesic_ball") return RegionSpec<double>::geodesic_ball(center, radius);
  if (k == "euclidean_ball") return RegionSpec<double>::euclidean_ball(center, radius);
  invalid("kind", "unknown region kind \"" + k + "\"");
}

json region_to_json(const RegionSpec<double>& region) {
  std::string kind;
  switch (region.kind()) {
    case RegionKind::GeodesicBall: kind = "geodesic_ball"; break;
    case RegionKind::EuclideanBall: kind = "euclidean_ball"; break;
    case RegionKind::Indicator: throw Error(ErrorKind::InvalidInput, "indicator regions cannot be serialized");
  }
  return {{"kind", kind}, {"center", to_json(region.center())}, {"radius", region.radius()}, {"dimension", region.dim()}};
}

json config_to_json(const SolverConfig<double>& config) {
  return {{"step", config.step}, {"max_iters", config.max_iters}, {"tol", config.tol}, {"line_search", config.line_search}};
}

json result_to_json(const SolverResult<double>& result, const SolverConfig<double>& config) {
  return {{"barycenter", to_json(result.barycenter)},
          {"residual_norm", result.residual_norm},
          {"energy", result.energy},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"config", config_to_json(config)}};
}

json region_result_to_json(const RegionResult<double>& result, const SolverConfig<double>& config) {
  json out = result_to_json(result.solver, config);
  out["seed"] = result.seed;
  out["samples_requested"] = result.count_requested;
  out["samples_accepted"] = result.count_accepted;
  out["total_mass_estimate"] = result.total_mass_estimate;
  out["mass_standard_error"] = result.mass_standard_error;
  out["moment_estimate"] = result.moment_estimate;
  out["standard_error"] = result.standard_error;
  out["hyperbolic_standard_error"] = result.hyperbolic_standard_error;
  return out;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

HVec point_from_argument(const std::string& text) {
  double value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (auto [ptr, ec] = std::from_chars(first, last, value); ec == std::errc() && ptr == last) {
    HVec z(1);
    z(0) = Quat(value);
    return z;
  }
  const json j = parse(text);
  if (j.is_array() && j.size() == 4 && j[0].is_number()) {
    HVec z(1);
    z(0) = quaternion_from_json(j, "point");
    return z;
  }
  return hvector_from_json(j, "point");
}

}  // namespace qhb::io
