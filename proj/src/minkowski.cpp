#include "schlafli/minkowski.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

namespace schlafli {

namespace {

constexpr double kRenormalizeDrift = 1e-13;

const Complex kI(0.0, 1.0);

Mat2c pauli(int k) {
  Mat2c s;
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

double sheet_drift(const Vec4& x) { return std::abs(minkowski_dot(x, x) + 1.0); }

Mat2c boost_to(const MPoint& p) {
  const Mat2c x = hermitian_from_minkowski(p.coords());
  return (x + Mat2c::Identity()) / std::sqrt(2.0 * p[0] + 2.0);
}

}  // namespace

Mat4 minkowski_metric() {
  Mat4 eta = Mat4::Identity();
  eta(0, 0) = -1.0;
  return eta;
}

Vec4 minkowski_cross(const Vec4& a, const Vec4& b, const Vec4& d) {
  // Covector c with c . w = det[w, a, b, d], then raise the index.
  Vec4 c;
  Mat4 m;
  m.col(1) = a;
  m.col(2) = b;
  m.col(3) = d;
  for (int i = 0; i < 4; ++i) {
    m.col(0) = Vec4::Unit(i);
    c[i] = m.determinant();
  }
  return minkowski_metric() * c;
}

// ---------------------------------------------------------------- MPoint

MPoint MPoint::from_minkowski(const Vec4& x) {
  if (!x.allFinite()) throw GeometryError("point has non-finite coordinates");
  if (x[0] < 1.0 - 1e-9) throw GeometryError("point is not on the upper sheet (x0 < 1)");
  if (sheet_drift(x) > 1e-6 * std::max(1.0, x[0] * x[0])) {
    throw GeometryError("point is off the hyperboloid: <x,x> != -1");
  }
  if (sheet_drift(x) > kRenormalizeDrift) return project(x);
  return MPoint(x);
}

MPoint MPoint::from_klein(const Vec3& y) {
  const double r2 = y.squaredNorm();
  if (!(r2 < 1.0)) throw GeometryError("Klein coordinates must satisfy |y| < 1");
  const double s = 1.0 / std::sqrt(1.0 - r2);
  Vec4 x;
  x << s, s * y[0], s * y[1], s * y[2];
  return MPoint(x);
}

MPoint MPoint::project(const Vec4& x) {
  const double q = -minkowski_dot(x, x);
  if (!(q > 0.0) || x[0] <= 0.0) throw GeometryError("vector is not future timelike");
  return MPoint(x / std::sqrt(q));
}

// ---------------------------------------------------------------- TangentVec

TangentVec::TangentVec(const MPoint& base, const Vec4& v) : base_(base), v_(v) {
  const double scale = std::max(1.0, v.norm() * base.coords().norm());
  if (std::abs(minkowski_dot(base.coords(), v)) > 1e-8 * scale) {
    throw GeometryError("vector is not tangent at its base point");
  }
  v_ = v + minkowski_dot(v, base.coords()) * base.coords();
}

TangentVec TangentVec::project(const MPoint& base, const Vec4& v) {
  return TangentVec(base, v + minkowski_dot(v, base.coords()) * base.coords(), Unchecked{});
}

double TangentVec::norm() const { return std::sqrt(std::max(0.0, minkowski_dot(v_, v_))); }

// ---------------------------------------------------------------- HPlane

HPlane HPlane::from_normal(const Vec4& n) {
  const double q = minkowski_dot(n, n);
  if (!(q > 1e-300)) throw GeometryError("plane normal must be spacelike");
  return HPlane(n / std::sqrt(q));
}

HPlane HPlane::from_klein(const Vec3& a, double b) {
  const double an = a.norm();
  if (!(an > 0.0)) throw GeometryError("degenerate Klein plane");
  if (std::abs(b) >= an) throw GeometryError("Klein plane misses the unit ball");
  Vec4 n;
  n << b, a[0], a[1], a[2];
  return from_normal(n);
}

HPlane HPlane::through(const MPoint& p, const MPoint& q, const MPoint& r, const MPoint& inside) {
  Vec4 n = minkowski_cross(p.coords(), q.coords(), r.coords());
  HPlane plane = from_normal(n);
  if (minkowski_dot(inside.coords(), plane.n_) > 0.0) plane.n_ = -plane.n_;
  return plane;
}

MPoint HPlane::foot_of_origin() const { return plane_projection(*this, MPoint::origin()); }

// ---------------------------------------------------------------- HGeodesic

HGeodesic::HGeodesic(const MPoint& p, const Vec4& unit_direction) : p_(p) {
  const TangentVec t = TangentVec::project(p, unit_direction);
  const double n = t.norm();
  if (std::abs(n - 1.0) > 1e-8) throw GeometryError("geodesic direction must be a unit tangent");
  u_ = t.vec() / n;
}

HGeodesic HGeodesic::through(const MPoint& from, const MPoint& to) {
  const Vec4 w = to.coords() + minkowski_dot(to.coords(), from.coords()) * from.coords();
  const double n = std::sqrt(std::max(0.0, minkowski_dot(w, w)));
  if (!(n > 1e-300)) throw GeometryError("geodesic through coincident points");
  return HGeodesic(from, w / n);
}

MPoint HGeodesic::point_at(double s) const {
  return MPoint::project(std::cosh(s) * p_.coords() + std::sinh(s) * u_);
}

Vec4 HGeodesic::tangent_at(double s) const { return std::sinh(s) * p_.coords() + std::cosh(s) * u_; }

// ---------------------------------------------------------------- SL(2,C) <-> SO+(1,3)

Mat2c hermitian_from_minkowski(const Vec4& x) {
  Mat2c h;
  h << Complex(x[0] + x[3], 0.0), Complex(x[1], -x[2]), Complex(x[1], x[2]), Complex(x[0] - x[3], 0.0);
  return h;
}

Vec4 minkowski_from_hermitian(const Mat2c& h) {
  Vec4 x;
  x[0] = 0.5 * (h(0, 0).real() + h(1, 1).real());
  x[3] = 0.5 * (h(0, 0).real() - h(1, 1).real());
  x[1] = 0.5 * (h(1, 0).real() + h(0, 1).real());
  x[2] = 0.5 * (h(1, 0).imag() - h(0, 1).imag());
  return x;
}

Mat4 lorentz_from_sl2c(const Mat2c& a) {
  Mat4 l;
  for (int mu = 0; mu < 4; ++mu) {
    l.col(mu) = minkowski_from_hermitian(a * pauli(mu) * a.adjoint());
  }
  return l;
}

Mat2c sl2c_from_lorentz(const Mat4& lorentz) {
  const MPoint p = MPoint::project(lorentz.col(0));
  const Mat2c boost = boost_to(p);
  const Mat4 eta = minkowski_metric();
  const Mat4 rotation = eta * lorentz_from_sl2c(boost).transpose() * eta * lorentz;
  Mat3 r3 = rotation.block<3, 3>(1, 1);
  // Re-orthonormalize before extracting the quaternion.
  Eigen::JacobiSVD<Mat3> svd(r3, Eigen::ComputeFullU | Eigen::ComputeFullV);
  r3 = svd.matrixU() * svd.matrixV().transpose();
  const Eigen::Quaterniond q(r3);
  Mat2c u = q.w() * Mat2c::Identity() - kI * (q.x() * pauli(1) + q.y() * pauli(2) + q.z() * pauli(3));
  return boost * u;
}

Mat2c sl2c_exp(const Mat2c& z) {
  // exp(Z) = cosh(mu) I + sinh(mu)/mu Z with mu^2 = -det Z.
  const Complex mu = std::sqrt(-z.determinant());
  const Complex shc = std::abs(mu) < 1e-8 ? Complex(1.0) + mu * mu / 6.0 : std::sinh(mu) / mu;
  return std::cosh(mu) * Mat2c::Identity() + shc * z;
}

// ---------------------------------------------------------------- Isometry

Isometry::Isometry() : lorentz_(Mat4::Identity()), sl2c_(Mat2c::Identity()) {}

Isometry Isometry::from_lorentz(const Mat4& lorentz) {
  const Mat4 eta = minkowski_metric();
  if ((lorentz.transpose() * eta * lorentz - eta).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, lorentz.squaredNorm())) {
    throw GeometryError("matrix does not preserve the Minkowski form");
  }
  if (lorentz(0, 0) <= 0.0) throw GeometryError("isometry reverses time orientation");
  if (lorentz.determinant() <= 0.0) throw GeometryError("isometry reverses orientation");
  return Isometry(lorentz, sl2c_from_lorentz(lorentz));
}

Isometry Isometry::from_sl2c(const Mat2c& a) {
  if (std::abs(a.determinant() - Complex(1.0, 0.0)) > 1e-10) {
    throw GeometryError("2x2 matrix must have unit determinant");
  }
  return Isometry(lorentz_from_sl2c(a), a);
}

MPoint Isometry::apply(const MPoint& p) const {
  const Vec4 y = lorentz_ * p.coords();
  if (sheet_drift(y) > kRenormalizeDrift) return MPoint::project(y);
  return MPoint::from_minkowski(y);
}

TangentVec Isometry::apply(const TangentVec& v) const {
  return TangentVec::project(apply(v.base()), lorentz_ * v.vec());
}

HPlane Isometry::apply(const HPlane& plane) const { return HPlane::from_normal(lorentz_ * plane.normal()); }

Isometry Isometry::compose(const Isometry& inner) const {
  return Isometry(lorentz_ * inner.lorentz_, sl2c_ * inner.sl2c_);
}

Isometry Isometry::inverse() const {
  const Mat4 eta = minkowski_metric();
  Mat2c inv;
  inv << sl2c_(1, 1), -sl2c_(0, 1), -sl2c_(1, 0), sl2c_(0, 0);
  return Isometry(eta * lorentz_.transpose() * eta, inv);
}

// ---------------------------------------------------------------- operations

double dist(const MPoint& p, const MPoint& q) {
  const double c = -minkowski_dot(p.coords(), q.coords());
  if (c < 1.0 - 1e-9) throw GeometryError("invalid points: -<p,q> < 1");
  // 2 asinh(|p - q|/2) is accurate for nearby points where acosh(c) is not.
  const Vec4 d = p.coords() - q.coords();
  const double m = std::max(0.0, minkowski_dot(d, d));
  return 2.0 * std::asinh(0.5 * std::sqrt(m));
}

MPoint exp_map(const TangentVec& v, double t) {
  const double n = v.norm();
  if (!(n > 1e-300)) throw GeometryError("exp_map: zero direction");
  const double s = t * n;
  return MPoint::project(std::cosh(s) * v.base().coords() + std::sinh(s) * (v.vec() / n));
}

TangentVec parallel_transport(const TangentVec& w, const HGeodesic& geodesic, double s) {
  if ((w.base().coords() - geodesic.base().coords()).norm() > 1e-9 * geodesic.base()[0]) {
    throw GeometryError("parallel_transport: vector is not based at the geodesic base point");
  }
  const double along = minkowski_dot(w.vec(), geodesic.direction());
  const Vec4 normal_part = w.vec() - along * geodesic.direction();
  return TangentVec::project(geodesic.point_at(s), along * geodesic.tangent_at(s) + normal_part);
}

double plane_signed_distance(const HPlane& plane, const MPoint& p) {
  return std::asinh(minkowski_dot(p.coords(), plane.normal()));
}

MPoint plane_projection(const HPlane& plane, const MPoint& p) {
  const double k = minkowski_dot(p.coords(), plane.normal());
  return MPoint::project(p.coords() - k * plane.normal());
}

void complete_frame(const MPoint& p, const Vec4& u, Vec4& e2, Vec4& e3) {
  auto orthogonalize = [&](Vec4 w, const Vec4* extra) {
    w += minkowski_dot(w, p.coords()) * p.coords();
    w -= minkowski_dot(w, u) * u;
    if (extra) w -= minkowski_dot(w, *extra) * *extra;
    return w;
  };
  auto pick = [&](const Vec4* extra) {
    Vec4 best = Vec4::Zero();
    double best_norm = -1.0;
    for (int i = 1; i < 4; ++i) {
      const Vec4 w = orthogonalize(Vec4::Unit(i), extra);
      const double n = minkowski_dot(w, w);
      if (n > best_norm) {
        best_norm = n;
        best = w;
      }
    }
    return Vec4(best / std::sqrt(best_norm));
  };
  e2 = pick(nullptr);
  e3 = pick(&e2);
  Mat4 frame;
  frame << p.coords(), u, e2, e3;
  if (frame.determinant() < 0.0) e3 = -e3;
}

namespace {

// exp(lambda/2 s3) conjugated onto the axis.
Isometry axis_isometry(const HGeodesic& axis, Complex lambda) {
  const Complex half = 0.5 * lambda;
  Mat2c standard = Mat2c::Zero();
  standard(0, 0) = std::exp(half);
  standard(1, 1) = std::exp(-half);

  // Standard axis: through the origin, pointing along +e3.
  const Mat2c boost = boost_to(axis.base());
  const Mat2c boost_inv = boost.inverse();
  const Vec4 w = lorentz_from_sl2c(boost_inv) * axis.direction();
  Vec3 dir = w.tail<3>().normalized();
  const Vec3 e3 = Vec3::UnitZ();
  Vec3 rot_axis = e3.cross(dir);
  double angle = std::acos(std::clamp(e3.dot(dir), -1.0, 1.0));
  if (rot_axis.norm() < 1e-14) {
    rot_axis = Vec3::UnitX();
  } else {
    rot_axis.normalize();
  }
  const Eigen::Quaterniond q(Eigen::AngleAxisd(angle, rot_axis));
  const Mat2c rot = q.w() * Mat2c::Identity() - kI * (q.x() * pauli(1) + q.y() * pauli(2) + q.z() * pauli(3));
  const Mat2c frame = boost * rot;
  Mat2c a = frame * standard * frame.inverse();
  a /= std::sqrt(a.determinant());
  return Isometry::from_sl2c(a);
}

}  // namespace

Isometry loxodromic(const HGeodesic& axis, double length, double twist) {
  if (!(length > 0.0)) throw GeometryError("loxodromic: translation length must be positive");
  return axis_isometry(axis, Complex(length, twist));
}

Isometry rotation_about(const HGeodesic& axis, double angle) {
  return axis_isometry(axis, Complex(0.0, angle));
}

}  // namespace schlafli
