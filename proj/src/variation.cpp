#include "schlafli/variation.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace schlafli {

namespace {

VariationReport make_report(double t, double lhs, double rhs, Stencil s) {
  return VariationReport{t, lhs, rhs, std::abs(lhs - rhs), s};
}

}  // namespace

VariationReport schlafli_check(const PolyhedronFamily& family, double t, Stencil stencil, double volume_tol) {
  const auto edges = edge_data_derivative(family, t, stencil.h, stencil.order);
  const double lhs =
      central_difference([&](double s) { return volume(family.at(s), volume_tol); }, t, stencil.h, stencil.order);
  double rhs = 0.0;
  for (const auto& e : edges) rhs += 0.5 * e.length * e.d_angle;
  return make_report(t, lhs, rhs, stencil);
}

VariationReport dual_schlafli_check(const PolyhedronFamily& family, double t, Stencil stencil, double volume_tol) {
  const auto edges = edge_data_derivative(family, t, stencil.h, stencil.order);
  const double lhs = central_difference([&](double s) { return dual_volume(family.at(s), volume_tol); }, t,
                                        stencil.h, stencil.order);
  double rhs = 0.0;
  for (const auto& e : edges) rhs -= 0.5 * e.exterior_angle * e.d_length;
  return make_report(t, lhs, rhs, stencil);
}

double dual_identity_residual(const std::vector<EdgeVariation>& edges, double d_volume, double d_dual_volume) {
  double expected = d_volume;
  for (const auto& e : edges) expected -= 0.5 * (e.exterior_angle * e.d_length + e.length * e.d_angle);
  return std::abs(d_dual_volume - expected);
}

// ---------------------------------------------------------------- smooth families

std::string to_string(SmoothFamilySpec::Kind kind) {
  switch (kind) {
    case SmoothFamilySpec::Kind::GeodesicSphere:
      return "geodesic_sphere";
    case SmoothFamilySpec::Kind::PlaneTube:
      return "plane_tube";
    case SmoothFamilySpec::Kind::LineTube:
      return "line_tube";
  }
  return "unknown";
}

SmoothFamilySpec::Kind smooth_kind_from_string(std::string_view name) {
  if (name == "geodesic_sphere") return SmoothFamilySpec::Kind::GeodesicSphere;
  if (name == "plane_tube") return SmoothFamilySpec::Kind::PlaneTube;
  if (name == "line_tube") return SmoothFamilySpec::Kind::LineTube;
  throw GeometryError(fmt::format("unknown smooth family kind '{}'", name));
}

std::array<double, 4> SmoothFamilySpec::domain() const {
  switch (kind) {
    case Kind::GeodesicSphere:
      return {0.0, kPi, 0.0, 2.0 * kPi};
    case Kind::PlaneTube:
      return {-window, window, -window, window};
    case Kind::LineTube:
      return {0.0, length, 0.0, 2.0 * kPi};
  }
  return {};
}

FundamentalForms SmoothFamilySpec::forms(double t, double u, double /*v*/) const {
  const double r = rho(t);
  if (!(r > 0.0)) throw GeometryError("smooth family radius must stay positive");
  const double sh = std::sinh(r), ch = std::cosh(r);
  Mat2 g = Mat2::Identity();
  switch (kind) {
    case Kind::GeodesicSphere:
      g(1, 1) = std::sin(u) * std::sin(u);
      return FundamentalForms::from(sh * sh * g, -sh * ch * g);
    case Kind::PlaneTube:
      g(1, 1) = std::cosh(u) * std::cosh(u);
      return FundamentalForms::from(ch * ch * g, -sh * ch * g);
    case Kind::LineTube: {
      Mat2 first;
      first << ch * ch, 0.0, 0.0, sh * sh;
      return FundamentalForms::from(first, -sh * ch * Mat2::Identity());
    }
  }
  throw GeometryError("unknown smooth family kind");
}

Mat2 SmoothFamilySpec::delta_first(double t, double u, double /*v*/) const {
  const double s2 = std::sinh(2.0 * rho(t)) * rate;
  Mat2 g = Mat2::Identity();
  if (kind == Kind::GeodesicSphere) g(1, 1) = std::sin(u) * std::sin(u);
  if (kind == Kind::PlaneTube) g(1, 1) = std::cosh(u) * std::cosh(u);
  return s2 * g;
}

double SmoothFamilySpec::volume(double t) const {
  const double r = rho(t);
  std::function<double(double)> section;
  switch (kind) {
    case Kind::GeodesicSphere:
      section = [](double s) { return 4.0 * kPi * std::sinh(s) * std::sinh(s); };
      break;
    case Kind::PlaneTube: {
      const double area = 2.0 * window * 2.0 * std::sinh(window);
      section = [area](double s) { return area * std::cosh(s) * std::cosh(s); };
      break;
    }
    case Kind::LineTube:
      section = [this](double s) { return 2.0 * kPi * length * std::sinh(s) * std::cosh(s); };
      break;
  }
  return r > 0.0 ? integrate_1d(section, 0.0, r) : 0.0;
}

double SmoothFamilySpec::mean_curvature_integral(double t) const {
  const auto d = domain();
  return integrate_2d(
      [&](double u, double v) {
        const FundamentalForms f = forms(t, u, v);
        return f.mean_curvature * f.area_element();
      },
      d[0], d[1], d[2], d[3]);
}

double SmoothFamilySpec::dual_volume_derivative(double t) const {
  const double r = rho(t);
  switch (kind) {
    case Kind::GeodesicSphere:
      return -4.0 * kPi * std::cosh(r) * std::cosh(r) * rate;
    case Kind::PlaneTube:
      return -2.0 * window * 2.0 * std::sinh(window) * std::sinh(r) * std::sinh(r) * rate;
    case Kind::LineTube:
      return -kPi * length * std::sinh(2.0 * r) * rate;
  }
  return 0.0;
}

double delta_first_residual(const SmoothFamilySpec& spec, double t, double u, double v, double h) {
  const Mat2 fd = (-spec.forms(t + 2 * h, u, v).first + 8.0 * spec.forms(t + h, u, v).first -
                   8.0 * spec.forms(t - h, u, v).first + spec.forms(t - 2 * h, u, v).first) /
                  (12.0 * h);
  return (fd - spec.delta_first(t, u, v)).cwiseAbs().maxCoeff();
}

VariationReport smooth_dual_variation_check(const SmoothFamilySpec& spec, double t, Stencil stencil) {
  const double lhs =
      central_difference([&](double s) { return spec.dual_volume(s); }, t, stencil.h, stencil.order);
  const auto d = spec.domain();
  const double rhs = 0.25 * integrate_2d(
                                [&](double u, double v) {
                                  const FundamentalForms f = spec.forms(t, u, v);
                                  const Mat2 target = f.mean_curvature * f.first - f.second;
                                  return tensor_dot(f.first, spec.delta_first(t, u, v), target) *
                                         f.area_element();
                                },
                                d[0], d[1], d[2], d[3]);
  return make_report(t, lhs, rhs, stencil);
}

FlowIntegrand normal_flow_integrand(const SmoothFamilySpec& spec, double t, double u, double v) {
  const FundamentalForms f = spec.forms(t, u, v);
  FlowIntegrand out;
  out.contraction = tensor_dot(f.first, spec.delta_first(t, u, v), f.mean_curvature * f.first - f.second);
  out.curvature = -4.0 * spec.rate * f.extrinsic_curvature;
  if (std::abs(out.contraction - out.curvature) > 1e-9 * std::max(1.0, std::abs(out.curvature))) {
    throw GeometryError(fmt::format("normal flow integrand mismatch: {} vs {}", out.contraction, out.curvature));
  }
  return out;
}

// ---------------------------------------------------------------- monotonicity

MonotonicityResult monotonicity_check(const ConvexPolyhedron& inner, const ConvexPolyhedron& outer,
                                      double volume_tol) {
  MonotonicityResult r;
  r.contained = std::all_of(inner.vertices().begin(), inner.vertices().end(),
                            [&](const MPoint& v) { return outer.contains(v, 1e-9); });
  if (r.contained) r.margin = dual_volume(inner, volume_tol) - dual_volume(outer, volume_tol);
  return r;
}

std::pair<ConvexPolyhedron, ConvexPolyhedron> random_nested_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::exponential_distribution<double> gamma1(1.0);
  for (;;) {
    std::vector<MPoint> outer_pts;
    while (outer_pts.size() < 8) {
      const Vec3 y(unit(rng), unit(rng), unit(rng));
      if (y.norm() < 1.0) outer_pts.push_back(MPoint::from_klein(0.75 * y));
    }
    try {
      ConvexPolyhedron outer = ConvexPolyhedron::hull(outer_pts);
      std::vector<MPoint> inner_pts;
      const auto& ov = outer.vertices();
      for (int k = 0; k < 6; ++k) {
        Vec3 y = Vec3::Zero();
        double total = 0.0;
        for (const auto& v : ov) {
          const double w = gamma1(rng);
          y += w * v.klein();
          total += w;
        }
        inner_pts.push_back(MPoint::from_klein(y / total));
      }
      ConvexPolyhedron inner = ConvexPolyhedron::hull(inner_pts);
      return {std::move(inner), std::move(outer)};
    } catch (const GeometryError&) {
      // degenerate draw; try again
    }
  }
}

NestedFuzzResult monotonicity_fuzz(int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  NestedFuzzResult out;
  for (int i = 0; i < pairs; ++i) {
    const auto [inner, outer] = random_nested_pair(rng);
    const auto r = monotonicity_check(inner, outer);
    ++out.pairs;
    if (!r.contained) {
      ++out.violations;
      continue;
    }
    if (i == 0 || r.margin < out.worst_margin) out.worst_margin = r.margin;
    if (r.margin < -1e-9) ++out.violations;
  }
  return out;
}

// ---------------------------------------------------------------- continuity

double continuity_probe(const ConvexPolyhedron& p, double delta, PerturbationMode mode, int samples,
                        std::uint64_t seed) {
  if (!(delta >= 0.0)) throw GeometryError("perturbation size must be >= 0");
  if (delta == 0.0) return 0.0;
  const double base = dual_volume(p, kCheckVolumeTol);
  const Combinatorics lattice = ConvexPolyhedron::hull(p.vertices()).combinatorics();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<MPoint> moved;
    if (mode == PerturbationMode::RandomKlein) {
      for (const auto& v : p.vertices()) {
        Vec3 d(normal(rng), normal(rng), normal(rng));
        moved.push_back(MPoint::from_klein(v.klein() + delta * d.normalized()));
      }
    } else {
      Mat2c z;
      z << Complex(normal(rng), normal(rng)), Complex(normal(rng), normal(rng)),
          Complex(normal(rng), normal(rng)), Complex(0.0, 0.0);
      z(1, 1) = -z(0, 0);
      z *= delta / z.norm();
      const Isometry g = Isometry::from_sl2c(sl2c_exp(z));
      for (const auto& v : p.vertices()) moved.push_back(g.apply(v));
    }
    const ConvexPolyhedron q = ConvexPolyhedron::hull(moved);
    if (q.vertices().size() != moved.size() || q.combinatorics() != lattice) {
      throw CombinatorialChangeError(fmt::format("perturbation of size {} changes the face lattice", delta));
    }
    worst = std::max(worst, std::abs(dual_volume(q, kCheckVolumeTol) - base));
  }
  return worst;
}

}  // namespace schlafli
