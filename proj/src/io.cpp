#include "schlafli/io.hpp"

#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace schlafli::io {

namespace {

std::string child(const std::string& pointer, const std::string& key) { return pointer + "/" + key; }
std::string child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

const json& require(const json& j, const std::string& key, const std::string& path, const std::string& pointer) {
  if (!j.is_object()) throw InputError(path, pointer, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(path, child(pointer, key), "missing field");
  return *it;
}

double number(const json& j, const std::string& path, const std::string& pointer) {
  if (!j.is_number()) throw InputError(path, pointer, "expected a number");
  return j.get<double>();
}

const json& array(const json& j, const std::string& path, const std::string& pointer, std::size_t size = 0) {
  if (!j.is_array()) throw InputError(path, pointer, "expected an array");
  if (size && j.size() != size) throw InputError(path, pointer, fmt::format("expected {} entries", size));
  return j;
}

std::map<std::string, double> params_from_json(const json& j, const std::string& path, const std::string& pointer) {
  std::map<std::string, double> out;
  if (!j.contains("params")) return out;
  const json& p = j.at("params");
  if (!p.is_object()) throw InputError(path, child(pointer, "params"), "expected an object");
  for (const auto& [k, v] : p.items()) out[k] = number(v, path, child(child(pointer, "params"), k));
  return out;
}

std::string builtin_kind(const json& j, const std::string& path, const std::string& pointer) {
  const json& kind = require(j, "kind", path, pointer);
  if (!kind.is_string()) throw InputError(path, child(pointer, "kind"), "expected a string");
  const std::string s = kind.get<std::string>();
  if (s.rfind("builtin:", 0) != 0) throw InputError(path, child(pointer, "kind"), "expected 'builtin:<name>'");
  return s;
}

// Rethrows library errors raised while building a value as input errors.
template <class F>
auto at_location(const std::string& path, const std::string& pointer, F&& f) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(path, pointer, e.what());
  }
}

}  // namespace

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "", "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw InputError(path, "", e.what());
  }
}

MPoint point_from_json(const json& j, const std::string& path, const std::string& pointer) {
  if (!j.is_object()) throw InputError(path, pointer, "expected a point object");
  if (j.contains("mink")) {
    const json& a = array(j.at("mink"), path, child(pointer, "mink"), 4);
    Vec4 x;
    for (int i = 0; i < 4; ++i) x[i] = number(a[i], path, child(child(pointer, "mink"), i));
    return at_location(path, pointer, [&] { return MPoint::from_minkowski(x); });
  }
  if (j.contains("klein")) {
    const json& a = array(j.at("klein"), path, child(pointer, "klein"), 3);
    Vec3 y;
    for (int i = 0; i < 3; ++i) y[i] = number(a[i], path, child(child(pointer, "klein"), i));
    return at_location(path, pointer, [&] { return MPoint::from_klein(y); });
  }
  throw InputError(path, pointer, "a point needs a 'mink' or a 'klein' field");
}

json point_to_json(const MPoint& p) {
  const Vec4& x = p.coords();
  return json{{"mink", {x[0], x[1], x[2], x[3]}}};
}

PolyhedronInput polyhedron_from_json(const json& j, const std::string& path, const std::string& pointer) {
  PolyhedronInput in;
  const std::string vp = child(pointer, "vertices");
  const json& vs = array(require(j, "vertices", path, pointer), path, vp);
  for (std::size_t i = 0; i < vs.size(); ++i) in.vertices.push_back(point_from_json(vs[i], path, child(vp, i)));
  if (j.contains("tol")) in.tol = number(j.at("tol"), path, child(pointer, "tol"));
  return in;
}

PolyhedronFamily family_from_json(const json& j, const std::string& path, const std::string& pointer) {
  if (!j.is_object()) throw InputError(path, pointer, "expected a family object");
  if (j.contains("samples")) {
    const std::string sp = child(pointer, "samples");
    const json& samples = array(j.at("samples"), path, sp);
    std::vector<double> times;
    std::vector<std::vector<MPoint>> vertices;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const std::string ip = child(sp, i);
      times.push_back(number(require(samples[i], "t", path, ip), path, child(ip, "t")));
      vertices.push_back(polyhedron_from_json(samples[i], path, ip).vertices);
      if (vertices.back().size() != vertices.front().size()) {
        throw InputError(path, child(ip, "vertices"),
                         fmt::format("expected {} vertices as in the first sample", vertices.front().size()));
      }
    }
    return at_location(path, sp, [&] { return PolyhedronFamily::from_samples(times, vertices); });
  }
  const std::string kind = builtin_kind(j, path, pointer);
  const auto params = params_from_json(j, path, pointer);
  at_location(path, child(pointer, "kind"), [&] { return builtin_family(kind); });
  return at_location(path, child(pointer, "params"), [&] { return builtin_family(kind, params); });
}

SmoothFamilySpec smooth_spec_from_json(const json& j, const std::string& path, const std::string& pointer) {
  SmoothFamilySpec s;
  const json& kind = require(j, "kind", path, pointer);
  if (!kind.is_string()) throw InputError(path, child(pointer, "kind"), "expected a string");
  s.kind = at_location(path, child(pointer, "kind"), [&] { return smooth_kind_from_string(kind.get<std::string>()); });
  for (auto [key, field] : {std::pair{"base", &s.base}, std::pair{"rate", &s.rate}, std::pair{"window", &s.window},
                            std::pair{"length", &s.length}}) {
    if (j.contains(key)) *field = number(j.at(key), path, child(pointer, key));
  }
  if (!(s.base > 0.0)) throw InputError(path, child(pointer, "base"), "radius must be positive");
  return s;
}

Rep rep_from_json(const json& j, const std::string& path, const std::string& pointer) {
  const std::string gp = child(pointer, "generators");
  const json& gens = array(require(j, "generators", path, pointer), path, gp);
  std::vector<Mat2c> out;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const std::string ep = child(gp, g);
    const json& entries = array(gens[g], path, ep, 4);
    Mat2c m;
    for (std::size_t k = 0; k < 4; ++k) {
      const json& c = array(entries[k], path, child(ep, k), 2);
      m(k / 2, k % 2) = Complex(number(c[0], path, child(child(ep, k), 0)), number(c[1], path, child(child(ep, k), 1)));
    }
    at_location(path, ep, [&] { return Rep({m}); });
    out.push_back(m);
  }
  return Rep(std::move(out));
}

RationalLamination lamination_from_json(const json& j, const std::string& path, const std::string& pointer) {
  const std::string cp = child(pointer, "curves");
  const json& curves = array(require(j, "curves", path, pointer), path, cp);
  std::vector<WeightedCurve> out;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const std::string ip = child(cp, i);
    const json& w = require(curves[i], "word", path, ip);
    if (!w.is_string()) throw InputError(path, child(ip, "word"), "expected a string");
    const double u = number(require(curves[i], "weight", path, ip), path, child(ip, "weight"));
    if (!(u > 0.0)) throw InputError(path, child(ip, "weight"), "weights must be positive");
    out.push_back({at_location(path, child(ip, "word"), [&] { return parse_word(w.get<std::string>()); }), u});
  }
  return at_location(path, pointer, [&] { return RationalLamination(std::move(out)); });
}

RepPath rep_path_from_json(const json& j, const std::string& path, const std::string& pointer) {
  const std::string kind = builtin_kind(j, path, pointer);
  const auto params = params_from_json(j, path, pointer);
  at_location(path, child(pointer, "kind"), [&] { return builtin_rep_path(kind); });
  return at_location(path, child(pointer, "params"), [&] { return builtin_rep_path(kind, params); });
}

}  // namespace schlafli::io
