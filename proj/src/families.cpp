// Frozen built-in polyhedron families. Names carry a version suffix; a change
// of shape gets a new name so stored baselines stay comparable.

#include <array>
#include <cmath>
#include <fmt/format.h>

#include "schlafli/polyhedra.hpp"

namespace schlafli {

namespace {

const std::array<Vec3, 4> kBaseTetra = {Vec3(0.55, 0.05, -0.10), Vec3(-0.25, 0.50, 0.05),
                                        Vec3(-0.20, -0.45, 0.15), Vec3(0.05, -0.05, 0.60)};

using Params = std::map<std::string, double>;

double param(const Params& given, const Params& defaults, const std::string& key) {
  const auto it = given.find(key);
  return it != given.end() ? it->second : defaults.at(key);
}

void reject_unknown(std::string_view family, const Params& given, const Params& defaults) {
  for (const auto& [k, v] : given) {
    if (!defaults.count(k)) throw GeometryError(fmt::format("family '{}' has no parameter '{}'", family, k));
  }
}

std::vector<MPoint> lift(const std::vector<Vec3>& ys) {
  std::vector<MPoint> out;
  out.reserve(ys.size());
  for (const auto& y : ys) out.push_back(MPoint::from_klein(y));
  return out;
}

std::vector<MPoint> base_tetra() {
  return lift({kBaseTetra.begin(), kBaseTetra.end()});
}

PolyhedronFamily rigid(const Params& p) {
  const Params d{{"rate", 1.0}};
  reject_unknown("rigid-tetra-v1", p, d);
  const double rate = param(p, d, "rate");
  Mat2c z;
  z << Complex(0.2, 0.3), Complex(0.1, -0.2), Complex(0.25, 0.1), Complex(-0.2, -0.3);
  auto path = [z, rate](double t) {
    const Isometry g = Isometry::from_sl2c(sl2c_exp(rate * t * z));
    std::vector<MPoint> out;
    for (const auto& v : base_tetra()) out.push_back(g.apply(v));
    return out;
  };
  return PolyhedronFamily("rigid-tetra-v1", path, -1.0, 1.0);
}

PolyhedronFamily stretch(const Params& p) {
  const Params d{{"rate", 1.0}};
  reject_unknown("stretch-tetra-v1", p, d);
  const double rate = param(p, d, "rate");
  auto path = [rate](double t) {
    const Vec3 s(1.0 + 0.25 * rate * t, 1.0 - 0.15 * rate * t, 1.0 + 0.10 * rate * t);
    std::vector<Vec3> ys;
    for (const auto& y : kBaseTetra) ys.push_back(s.cwiseProduct(y));
    return lift(ys);
  };
  return PolyhedronFamily("stretch-tetra-v1", path, -1.0, 1.0);
}

PolyhedronFamily scale(const Params& p) {
  const Params d{{"rate", 0.3}};
  reject_unknown("scale-tetra-v1", p, d);
  const double rate = param(p, d, "rate");
  auto path = [rate](double t) {
    std::vector<Vec3> ys;
    for (const auto& y : kBaseTetra) ys.push_back((1.0 + rate * t) * y);
    return lift(ys);
  };
  return PolyhedronFamily("scale-tetra-v1", path, -1.0, 1.0);
}

std::vector<Vec3> wobble(std::vector<Vec3> ys, double amp, double t) {
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double phi = 1.3 * static_cast<double>(i) + 0.4;
    ys[i] += amp * Vec3(std::sin(t + phi), std::cos(2.0 * t + phi), std::sin(3.0 * t - phi));
  }
  return ys;
}

PolyhedronFamily wobble_tetra(const Params& p) {
  const Params d{{"amplitude", 0.08}};
  reject_unknown("wobble-tetra-v1", p, d);
  const double amp = param(p, d, "amplitude");
  auto path = [amp](double t) { return lift(wobble({kBaseTetra.begin(), kBaseTetra.end()}, amp, t)); };
  return PolyhedronFamily("wobble-tetra-v1", path, -1.0, 1.0);
}

// Vertex 2 turns about the geodesic through vertices 0 and 1 by kappa t^2.
// Only the edge 2-3 changes length, and its variation vanishes at t = 0.
PolyhedronFamily hinge(const Params& p) {
  const Params d{{"kappa", 0.25}};
  reject_unknown("hinge-tetra-v1", p, d);
  const double kappa = param(p, d, "kappa");
  auto path = [kappa](double t) {
    auto v = base_tetra();
    const Isometry r = rotation_about(HGeodesic::through(v[0], v[1]), kappa * t * t);
    v[2] = r.apply(v[2]);
    return v;
  };
  return PolyhedronFamily("hinge-tetra-v1", path, -1.0, 1.0);
}

PolyhedronFamily wobble_octa(const Params& p) {
  const Params d{{"amplitude", 0.05}, {"radius", 0.5}};
  reject_unknown("wobble-octa-v1", p, d);
  const double amp = param(p, d, "amplitude");
  const double r = param(p, d, "radius");
  auto path = [amp, r](double t) {
    std::vector<Vec3> ys;
    for (int k = 0; k < 3; ++k) {
      ys.push_back(r * Vec3::Unit(k));
      ys.push_back(-r * Vec3::Unit(k));
    }
    return lift(wobble(ys, amp, t));
  };
  return PolyhedronFamily("wobble-octa-v1", path, -1.0, 1.0);
}

}  // namespace

std::vector<std::string> builtin_family_names() {
  return {"rigid-tetra-v1", "stretch-tetra-v1", "scale-tetra-v1",
          "wobble-tetra-v1", "hinge-tetra-v1", "wobble-octa-v1"};
}

PolyhedronFamily builtin_family(std::string_view name, const std::map<std::string, double>& params) {
  if (name.starts_with("builtin:")) name.remove_prefix(8);
  if (name == "rigid-tetra-v1") return rigid(params);
  if (name == "stretch-tetra-v1") return stretch(params);
  if (name == "scale-tetra-v1") return scale(params);
  if (name == "wobble-tetra-v1") return wobble_tetra(params);
  if (name == "hinge-tetra-v1") return hinge(params);
  if (name == "wobble-octa-v1") return wobble_octa(params);
  throw GeometryError(fmt::format("unknown built-in family '{}'", name));
}

}  // namespace schlafli
