#pragma once

// JSON wire formats.  A quaternion is [w, x, y, z]; a point of H^n is an
// array of n quaternions.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qhb/measure_sets.hpp"

namespace qhb::io {

using json = nlohmann::json;

json to_json(const Quat& q);
json to_json(const HVec& z);
json to_json(const SpMatrix<double>& g);

/// `where` names the value in error messages, e.g. "points[3].coords".
Quat quaternion_from_json(const json& j, const std::string& where = "quaternion");
HVec hvector_from_json(const json& j, const std::string& where = "point");
HMat hmatrix_from_json(const json& j, const std::string& where = "matrix");

/// {"A": [[q..]..], "alpha": [q..], "beta": [q..], "a": q}; rejects non-members of Sp(n,1).
SpMatrix<double> sp_matrix_from_json(const json& j);

/// {"dimension": n, "points": [{"coords": [[w,x,y,z], ...], "weight": w}, ...]}
WeightedPoints<double> point_set_from_json(const json& j);
json point_set_to_json(const WeightedPoints<double>& data);

/// {"kind": "geodesic_ball"|"euclidean_ball", "center": [...], "radius": r, "dimension": n}
RegionSpec<double> region_from_json(const json& j);
json region_to_json(const RegionSpec<double>& region);

json config_to_json(const SolverConfig<double>& config);
json result_to_json(const SolverResult<double>& result, const SolverConfig<double>& config);
json region_result_to_json(const RegionResult<double>& result, const SolverConfig<double>& config);

json parse(const std::string& text);
json read_file(const std::filesystem::path& path);

/// A command-line point: a bare number is the real point of H^1, anything
/// else is parsed as JSON (a quaternion for H^1 or an array of quaternions).
HVec point_from_argument(const std::string& text);

}  // namespace qhb::io
