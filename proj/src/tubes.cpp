#include "schlafli/tubes.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace schlafli {

namespace {

const Vec4 kE3 = Vec4::Unit(3);

double clamped_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

// p + the unit tangent at p pointing to q.
Vec4 tangent_towards(const Vec4& p, const Vec4& q) {
  const Vec4 w = q + minkowski_dot(p, q) * p;
  const double n2 = minkowski_dot(w, w);
  if (!(n2 > 0.0)) return Vec4::Zero();
  return w / std::sqrt(n2);
}

template <class S>
std::array<S, 4> combine(const std::array<S, 4>& x, double alpha, const Vec4& extra, double beta) {
  std::array<S, 4> out;
  for (int k = 0; k < 4; ++k) out[k] = alpha * x[k] + S(beta * extra[k]);
  return out;
}

// Closed-form pieces; shared by single specs and summed polyhedral data.
double flat_volume(double area, double e) { return 0.5 * area * (0.5 * std::sinh(2.0 * e) + e); }
double wedge_volume(double angle_length, double e) { return 0.25 * angle_length * (std::cosh(2.0 * e) - 1.0); }
double cone_volume(double omega, double e) { return 0.25 * omega * (std::sinh(2.0 * e) - 2.0 * e); }
double flat_mean(double area, double e) { return -area * std::sinh(2.0 * e); }
double wedge_mean(double angle_length, double e) { return -angle_length * std::cosh(2.0 * e); }
double cone_mean(double omega, double e) { return -omega * std::sinh(2.0 * e); }

}  // namespace

// ---------------------------------------------------------------- forms

FundamentalForms plane_tube_forms(double eps, double a, double /*b*/) {
  const double c2 = std::cosh(eps) * std::cosh(eps);
  Mat2 first;
  first << c2, 0.0, 0.0, c2 * std::cosh(a) * std::cosh(a);
  return FundamentalForms::from(first, -std::tanh(eps) * first);
}

FundamentalForms line_tube_forms(double eps, double /*s*/, double /*theta*/) {
  if (!(eps > 0.0)) throw GeometryError("line tube chart is degenerate at eps <= 0");
  const double c = std::cosh(eps), s = std::sinh(eps);
  Mat2 first;
  first << c * c, 0.0, 0.0, s * s;
  return FundamentalForms::from(first, -c * s * Mat2::Identity());
}

// ---------------------------------------------------------------- BentChain

struct BentChain::Piece {
  std::function<std::array<Jet2, 4>(const Jet2&, const Jet2&)> chart;
  double u0, u1, v0, v1;
  Vec4 hint;
};

BentChain::BentChain(std::vector<HPlane> planes, double half_width) : half_width_(half_width) {
  if (planes.size() < 2) throw GeometryError("bent chain needs at least two planes");
  if (!(half_width > 0.0)) throw GeometryError("bent chain window must have positive width");
  for (const auto& p : planes) {
    Vec4 n = p.normal();
    if (std::abs(n[3]) > 1e-10) throw GeometryError("bent chain planes must be orthogonal to {x3 = 0}");
    n[3] = 0.0;
    planes_.push_back(HPlane::from_normal(n));
  }
  double turning = 0.0;
  for (std::size_t i = 0; i + 1 < planes_.size(); ++i) {
    const Vec4& a = planes_[i].normal();
    const Vec4& b = planes_[i + 1].normal();
    const double c = minkowski_dot(a, b);
    if (!(c > -1.0 && c < 1.0)) throw GeometryError(fmt::format("planes {} and {} do not meet", i, i + 1));
    const double theta = clamped_acos(c);
    if (!(theta > 1e-12 && theta < kPi - 1e-12)) {
      throw GeometryError(fmt::format("bending angle {} at line {} is outside (0, pi)", theta, i));
    }
    Vec4 x = minkowski_cross(a, b, kE3);
    if (x[0] < 0.0) x = -x;
    corners_.push_back(MPoint::project(x));
    angles_.push_back(theta);

    Mat4 m;
    m << corners_.back().coords(), a, b, kE3;
    const double sign = m.determinant() > 0.0 ? 1.0 : -1.0;
    if (turning != 0.0 && sign != turning) throw GeometryError("bent chain does not turn consistently");
    turning = sign;
  }
  for (std::size_t i = 0; i < corners_.size(); ++i) {
    for (std::size_t j = 0; j < planes_.size(); ++j) {
      if (minkowski_dot(corners_[i].coords(), planes_[j].normal()) > 1e-9) {
        throw GeometryError(fmt::format("bent chain is not convex: corner {} violates plane {}", i, j));
      }
    }
  }
}

HGeodesic BentChain::bending_line(std::size_t i) const { return HGeodesic(corners_.at(i), kE3); }

std::vector<double> BentChain::face_lengths() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < corners_.size(); ++i) out.push_back(dist(corners_[i - 1], corners_[i]));
  return out;
}

std::vector<double> BentChain::face_areas() const {
  auto out = face_lengths();
  for (auto& a : out) a *= 2.0 * std::sinh(half_width_);
  return out;
}

double BentChain::bending_sum() const {
  double s = 0.0;
  for (double a : angles_) s += a;
  return s;
}

double BentChain::bending_length() const { return 2.0 * half_width_ * bending_sum(); }

BentChain::Split BentChain::split_with(std::size_t index, const HPlane& plane) const {
  if (index >= corners_.size()) throw GeometryError("split index out of range");
  return Split{clamped_acos(minkowski_dot(planes_[index].normal(), plane.normal())),
               clamped_acos(minkowski_dot(plane.normal(), planes_[index + 1].normal())), plane};
}

BentChain::Split BentChain::pencil_split(std::size_t index, double fraction) const {
  if (index >= corners_.size()) throw GeometryError("split index out of range");
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw GeometryError("pencil fraction must lie in [0, 1]");
  const double theta = angles_[index];
  const Vec4 n = (std::sin((1.0 - fraction) * theta) * planes_[index].normal() +
                  std::sin(fraction * theta) * planes_[index + 1].normal()) /
                 std::sin(theta);
  return Split{fraction * theta, (1.0 - fraction) * theta, HPlane::from_normal(n)};
}

BentChain BentChain::refine(std::size_t index, const Split& split) const {
  if (index >= corners_.size()) throw GeometryError("split index out of range");
  const Split measured = split_with(index, split.plane);
  if (std::abs(measured.theta1 - split.theta1) > 1e-9 || std::abs(measured.theta2 - split.theta2) > 1e-9) {
    throw GeometryError("split angles do not match the inserted plane");
  }
  if (split.theta1 < 0.0 || split.theta2 < 0.0 || split.theta1 + split.theta2 > angles_[index] + 1e-9) {
    throw GeometryError("non-convex split rejected");
  }
  if (split.theta1 <= 1e-12 || split.theta2 <= 1e-12) return *this;  // null line
  auto planes = planes_;
  planes.insert(planes.begin() + static_cast<std::ptrdiff_t>(index) + 1, split.plane);
  return BentChain(std::move(planes), half_width_);
}

MPoint BentChain::nearest_point(const MPoint& p) const {
  const Vec4& x = p.coords();
  bool inside = true;
  for (const auto& pl : planes_) inside = inside && minkowski_dot(x, pl.normal()) <= 0.0;
  if (inside) return p;
  // The region is a prism, so the nearest point lies on a face or on a bending line.
  double best = std::numeric_limits<double>::infinity();
  MPoint nearest = p;
  auto consider = [&](const MPoint& q) {
    const double d = dist(p, q);
    if (d < best) {
      best = d;
      nearest = q;
    }
  };
  for (const auto& pl : planes_) {
    const MPoint q = plane_projection(pl, p);
    bool ok = true;
    for (const auto& other : planes_) ok = ok && minkowski_dot(q.coords(), other.normal()) <= 1e-12;
    if (ok) consider(q);
  }
  for (const auto& c : corners_) {
    consider(MPoint::project(-minkowski_dot(x, c.coords()) * c.coords() + minkowski_dot(x, kE3) * kE3));
  }
  return nearest;
}

double BentChain::distance(const MPoint& p) const { return dist(p, nearest_point(p)); }

Vec4 BentChain::distance_gradient(const MPoint& p) const {
  const MPoint q = nearest_point(p);
  if (q.coords() == p.coords()) return Vec4::Zero();
  return -tangent_towards(p.coords(), q.coords());
}

std::vector<BentChain::Piece> BentChain::pieces(double eps) const {
  const double ce = std::cosh(eps), se = std::sinh(eps);
  const double w = half_width_;
  std::vector<Piece> out;
  for (std::size_t j = 1; j < corners_.size(); ++j) {
    // A plane through a bending line splits it and leaves a face of length zero.
    if (dist(corners_[j - 1], corners_[j]) < 1e-12) continue;
    const Vec4 q = corners_[j - 1].coords();
    const Vec4 u = tangent_towards(q, corners_[j].coords());
    const Vec4 n = planes_[j].normal();
    auto chart = [=](const Jet2& a, const Jet2& b) {
      std::array<Jet2, 4> x;
      for (int k = 0; k < 4; ++k) x[k] = cosh(a) * (cosh(b) * q[k] + sinh(b) * u[k]) + sinh(a) * kE3[k];
      return combine(x, ce, n, se);
    };
    out.push_back(Piece{chart, -w, w, 0.0, dist(corners_[j - 1], corners_[j]), n});
  }
  for (std::size_t i = 0; i < corners_.size(); ++i) {
    const Vec4 c = corners_[i].coords();
    const Vec4 n0 = planes_[i].normal();
    const Vec4 n1 = planes_[i + 1].normal();
    const double theta = angles_[i];
    const Vec4 m = (n1 - std::cos(theta) * n0) / std::sin(theta);
    auto chart = [=](const Jet2& s, const Jet2& t) {
      std::array<Jet2, 4> x;
      for (int k = 0; k < 4; ++k) {
        x[k] = ce * (cosh(s) * c[k] + sinh(s) * kE3[k]) + se * (cos(t) * n0[k] + sin(t) * m[k]);
      }
      return x;
    };
    out.push_back(Piece{chart, -w, w, 0.0, theta, n0 + n1});
  }
  return out;
}

double BentChain::window_tube_volume(double eps) const {
  double v = 0.0;
  for (double a : face_areas()) v += tube_volume({FlatPatch{a}, eps});
  for (double th : angles_) v += tube_volume({Wedge{2.0 * half_width_, th}, eps});
  return v;
}

double BentChain::window_mean_curvature_integral(double eps) const {
  if (!(eps > 0.0)) throw GeometryError("mean curvature quadrature needs eps > 0");
  double total = 0.0;
  for (const auto& piece : pieces(eps)) {
    auto integrand = [&](double u, double v) {
      const FundamentalForms f = forms_from_jet(chart_jet(piece.chart, u, v), piece.hint);
      return f.mean_curvature * f.area_element();
    };
    total += integrate_2d(integrand, piece.u0, piece.u1, piece.v0, piece.v1);
  }
  return total;
}

std::vector<FundamentalForms> BentChain::sample_forms(double eps, int n) const {
  if (!(eps > 0.0) || n < 2) throw GeometryError("form sampling needs eps > 0 and n >= 2");
  std::vector<FundamentalForms> out;
  for (const auto& piece : pieces(eps)) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const double u = piece.u0 + (piece.u1 - piece.u0) * i / (n - 1);
        const double v = piece.v0 + (piece.v1 - piece.v0) * k / (n - 1);
        out.push_back(forms_from_jet(chart_jet(piece.chart, u, v), piece.hint));
      }
  }
  return out;
}

HPlane circle_tangent_plane(double radius, double phi) {
  return HPlane::from_normal(
      Vec4(std::sinh(radius), std::cosh(radius) * std::cos(phi), std::cosh(radius) * std::sin(phi), 0.0));
}

double circle_tangent_angle(double radius, double delta) {
  return kPi - 2.0 * std::acos(std::cosh(radius) * std::sin(0.5 * delta));
}

BentChain circular_chain(double radius, double phi0, double phi1, int pieces, double half_width) {
  if (pieces < 1 || !(phi1 > phi0)) throw GeometryError("circular chain needs pieces >= 1 and phi1 > phi0");
  std::vector<HPlane> planes;
  for (int k = 0; k <= pieces; ++k) {
    planes.push_back(circle_tangent_plane(radius, phi0 + (phi1 - phi0) * k / pieces));
  }
  return BentChain(std::move(planes), half_width);
}

BentChain refine_circular(const BentChain& chain, double radius) {
  BentChain out = chain;
  for (std::size_t i = chain.line_count(); i-- > 0;) {
    const Vec4& a = chain.planes()[i].normal();
    const Vec4& b = chain.planes()[i + 1].normal();
    const double mid = 0.5 * (std::atan2(a[2], a[1]) + std::atan2(b[2], b[1]));
    out = out.refine(i, out.split_with(i, circle_tangent_plane(radius, mid)));
  }
  return out;
}

double gradient_deviation(const BentChain& chain, double radius, double eps, double phi0, double phi1, int n) {
  double worst = 0.0;
  const double r = radius + eps;
  for (int k = 0; k < n; ++k) {
    const double phi = n == 1 ? phi0 : phi0 + (phi1 - phi0) * k / (n - 1);
    const MPoint p = MPoint::from_minkowski(
        Vec4(std::cosh(r), std::sinh(r) * std::cos(phi), std::sinh(r) * std::sin(phi), 0.0));
    const Vec4 disc(std::sinh(r), std::cosh(r) * std::cos(phi), std::cosh(r) * std::sin(phi), 0.0);
    const Vec4 g = chain.distance_gradient(p);
    worst = std::max(worst, clamped_acos(minkowski_dot(g, disc)));
  }
  return worst;
}

// ---------------------------------------------------------------- tube volumes

void validate(const TubeSpec& spec) {
  if (!(spec.eps >= 0.0)) throw GeometryError("tube radius must be >= 0");
  std::visit(
      [](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, FlatPatch>) {
          if (!(b.area >= 0.0)) throw GeometryError("patch area must be >= 0");
        } else if constexpr (std::is_same_v<T, Wedge>) {
          if (!(b.length >= 0.0)) throw GeometryError("wedge length must be >= 0");
          if (!(b.angle >= 0.0 && b.angle <= 2.0 * kPi)) throw GeometryError("wedge angle must lie in [0, 2 pi]");
        } else if constexpr (std::is_same_v<T, VertexCone>) {
          if (!(b.solid_angle >= 0.0 && b.solid_angle <= 4.0 * kPi)) {
            throw GeometryError("solid angle must lie in [0, 4 pi]");
          }
        } else if constexpr (std::is_same_v<T, SolidTorusCore>) {
          if (!(b.length >= 0.0) || !(b.weight >= 0.0)) throw GeometryError("core length and weight must be >= 0");
        }
      },
      spec.base);
}

double tube_volume(const TubeSpec& spec) {
  validate(spec);
  const double e = spec.eps;
  return std::visit(
      [e](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, FlatPatch>) {
          return flat_volume(b.area, e);
        } else if constexpr (std::is_same_v<T, Wedge>) {
          return wedge_volume(b.angle * b.length, e);
        } else if constexpr (std::is_same_v<T, VertexCone>) {
          return cone_volume(b.solid_angle, e);
        } else if constexpr (std::is_same_v<T, SolidTorusCore>) {
          return wedge_volume(b.weight * b.length, e);
        } else {
          return b.window_tube_volume(e);
        }
      },
      spec.base);
}

double mean_curvature_integral(const TubeSpec& spec) {
  validate(spec);
  const double e = spec.eps;
  return std::visit(
      [e](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, FlatPatch>) {
          return flat_mean(b.area, e);
        } else if constexpr (std::is_same_v<T, Wedge>) {
          return wedge_mean(b.length * b.angle, e);
        } else if constexpr (std::is_same_v<T, VertexCone>) {
          return cone_mean(b.solid_angle, e);
        } else if constexpr (std::is_same_v<T, SolidTorusCore>) {
          return wedge_mean(b.weight * b.length, e);
        } else {
          return b.window_mean_curvature_integral(e);
        }
      },
      spec.base);
}

double core_mean_curvature_integral(int chi, double lmu, double eps) {
  return -2.0 * kPi * std::abs(chi) * std::sinh(2.0 * eps) - lmu * std::cosh(2.0 * eps);
}

double core_dual_volume_expansion(double vstar0, double lmu, int chi, double eps) {
  if (!(eps >= 0.0)) throw GeometryError("eps must be >= 0");
  return vstar0 - 0.25 * lmu * (std::cosh(2.0 * eps) - 1.0) -
         0.5 * kPi * std::abs(chi) * (std::sinh(2.0 * eps) - 2.0 * eps);
}

double solid_torus_dual_volume(double length, double eps) {
  const TubeSpec spec{SolidTorusCore{length}, eps};
  return tube_volume(spec) + 0.5 * mean_curvature_integral(spec);
}

NeighborhoodData neighborhood_data(const ConvexPolyhedron& p, double tol) {
  NeighborhoodData d;
  d.volume = volume(p, tol);
  d.bending_length = p.bending_length();
  for (double a : p.face_areas()) d.face_area += a;
  for (double o : p.normal_cone_solid_angles()) d.solid_angle += o;
  return d;
}

double neighborhood_volume(const NeighborhoodData& d, double eps) {
  if (!(eps >= 0.0)) throw GeometryError("eps must be >= 0");
  return d.volume + flat_volume(d.face_area, eps) + wedge_volume(d.bending_length, eps) +
         cone_volume(d.solid_angle, eps);
}

double neighborhood_mean_curvature_integral(const NeighborhoodData& d, double eps) {
  if (!(eps >= 0.0)) throw GeometryError("eps must be >= 0");
  return flat_mean(d.face_area, eps) + wedge_mean(d.bending_length, eps) + cone_mean(d.solid_angle, eps);
}

double neighborhood_dual_volume(const NeighborhoodData& d, double eps) {
  return neighborhood_volume(d, eps) + 0.5 * neighborhood_mean_curvature_integral(d, eps);
}

double richardson_limit(const std::vector<double>& eps, const std::vector<double>& values) {
  if (eps.empty() || eps.size() != values.size()) throw GeometryError("extrapolation needs matching samples");
  for (std::size_t i = 0; i < eps.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (eps[i] == eps[j]) throw GeometryError("extrapolation samples must be distinct");
  std::vector<double> p = values;
  const std::size_t n = eps.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i) {
      p[i] = (eps[i + m] * p[i] - eps[i] * p[i + 1]) / (eps[i + m] - eps[i]);
    }
  return p[0];
}

// ---------------------------------------------------------------- convexity margin

namespace {

std::array<Jet2, 4> apply_lorentz(const Mat4& l, const std::array<Jet2, 4>& x) {
  std::array<Jet2, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i] = Jet2(0.0);
    for (int j = 0; j < 4; ++j) out[i] += l(i, j) * x[j];
  }
  return out;
}

Mat4 isometry_path(double t) {
  Mat2c z;
  z << Complex(0.3, 0.2), Complex(0.4, -0.1), Complex(-0.2, 0.3), Complex(-0.3, -0.2);
  return lorentz_from_sl2c(sl2c_exp(t * z));
}

}  // namespace

std::vector<std::string> builtin_diffeo_names() { return {"identity-v1", "isometry-path-v1", "klein-dilation-v1"}; }

DiffeoFamily builtin_diffeo(std::string_view name) {
  if (name.starts_with("builtin:")) name.remove_prefix(8);
  if (name == "identity-v1") {
    return {"identity-v1", [](const std::array<Jet2, 4>& x, double) { return x; }};
  }
  if (name == "isometry-path-v1") {
    return {"isometry-path-v1", [](const std::array<Jet2, 4>& x, double t) { return apply_lorentz(isometry_path(t), x); }};
  }
  if (name == "klein-dilation-v1") {
    // Klein coordinates y = x_{1..3} / x_0 scaled by (1 + t), lifted back.
    return {"klein-dilation-v1", [](const std::array<Jet2, 4>& x, double t) {
              std::array<Jet2, 4> y;
              Jet2 r2(0.0);
              for (int k = 1; k < 4; ++k) {
                y[k] = (1.0 + t) * x[k] / x[0];
                r2 += y[k] * y[k];
              }
              if (!(r2.v < 1.0)) throw GeometryError("Klein dilation leaves the ball at a probe point");
              const Jet2 lift = 1.0 / sqrt(1.0 - r2);
              y[0] = lift;
              for (int k = 1; k < 4; ++k) y[k] = y[k] * lift;
              return y;
            }};
  }
  throw GeometryError(fmt::format("unknown built-in diffeomorphism family '{}'", name));
}

double convexity_margin(const DiffeoFamily& family, const HPlane& plane, double eps, double t,
                        const MarginProbe& probe) {
  if (!(eps > 0.0)) throw GeometryError("margin needs eps > 0");
  if (probe.grid < 1 || !(probe.radius > 0.0)) throw GeometryError("margin probe grid is empty");
  const MPoint c = plane.foot_of_origin();
  const Vec4 n = plane.normal();
  Vec4 e1, e2;
  complete_frame(c, n, e1, e2);
  auto surface = [&](double dist_from_plane) {
    const double ce = std::cosh(dist_from_plane), se = std::sinh(dist_from_plane);
    return [=, &family](const Jet2& a, const Jet2& b) {
      std::array<Jet2, 4> x;
      for (int k = 0; k < 4; ++k) {
        x[k] = ce * (cosh(a) * cosh(b) * c.coords()[k] + sinh(a) * e1[k] + cosh(a) * sinh(b) * e2[k]) + se * n[k];
      }
      return family.map(x, t);
    };
  };
  const auto sigma = surface(eps);
  const auto beyond = surface(eps + 0.1);

  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < probe.grid; ++i)
    for (int k = 0; k < probe.grid; ++k) {
      const double a = probe.grid == 1 ? 0.0 : probe.radius * (2.0 * i / (probe.grid - 1) - 1.0);
      const double b = probe.grid == 1 ? 0.0 : probe.radius * (2.0 * k / (probe.grid - 1) - 1.0);
      const ChartJet j = chart_jet(sigma, a, b);
      const ChartJet out = chart_jet(beyond, a, b);
      const FundamentalForms f = forms_from_jet(j, out.x - j.x);
      worst = std::max(worst, f.max_principal_curvature() + std::tanh(eps));
    }
  return worst;
}

}  // namespace schlafli
