#pragma once

// JSON input formats. Every loader takes the file path and the JSON pointer
// of the value so that errors can name the offending location.

#include <json.hpp>
#include <string>

#include "schlafli/laminations.hpp"
#include "schlafli/polyhedra.hpp"
#include "schlafli/variation.hpp"

namespace schlafli::io {

using nlohmann::json;

/// Reads and parses a file; InputError on I/O or syntax errors.
json load_file(const std::string& path);

/// {"mink": [x0, x1, x2, x3]} or {"klein": [y1, y2, y3]}.
MPoint point_from_json(const json& j, const std::string& path, const std::string& pointer);
json point_to_json(const MPoint& p);

struct PolyhedronInput {
  std::vector<MPoint> vertices;
  double tol = kDefaultVolumeTol;
};
/// {"vertices": [...], "tol": 1e-10}
PolyhedronInput polyhedron_from_json(const json& j, const std::string& path, const std::string& pointer);

/// {"kind": "builtin:<name>", "params": {...}} or
/// {"samples": [{"t": ..., "vertices": [...]}, ...]}
PolyhedronFamily family_from_json(const json& j, const std::string& path, const std::string& pointer);

/// {"kind": "geodesic_sphere", "base": 0.5, "rate": 1, "window": 1, "length": 1}
SmoothFamilySpec smooth_spec_from_json(const json& j, const std::string& path, const std::string& pointer);

/// {"generators": [[[re, im] x 4], ...]} in row-major order.
Rep rep_from_json(const json& j, const std::string& path, const std::string& pointer);
/// {"curves": [{"word": "aB", "weight": 2.5}, ...]}
RationalLamination lamination_from_json(const json& j, const std::string& path, const std::string& pointer);
/// {"kind": "builtin:<name>", "params": {...}}
RepPath rep_path_from_json(const json& j, const std::string& path, const std::string& pointer);

}  // namespace schlafli::io
