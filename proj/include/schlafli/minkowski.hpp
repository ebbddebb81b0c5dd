#pragma once

// Hyperboloid model of H^3 inside R^{1,3}, signature (-,+,+,+).

#include <Eigen/Dense>
#include <complex>

#include "schlafli/errors.hpp"

namespace schlafli {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Complex = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;

inline double minkowski_dot(const Vec4& a, const Vec4& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

/// eta = diag(-1, 1, 1, 1)
Mat4 minkowski_metric();

/// A vector Minkowski-orthogonal to a, b and d (zero iff they are dependent).
Vec4 minkowski_cross(const Vec4& a, const Vec4& b, const Vec4& d);

/// A point on the upper sheet {<x,x> = -1, x0 >= 1}.
class MPoint {
 public:
  MPoint() : x_(1.0, 0.0, 0.0, 0.0) {}

  static MPoint origin() { return MPoint(); }

  /// Validates that x is on the upper sheet up to a relative drift of 1e-6,
  /// then re-normalizes if the drift exceeds 1e-13.
  static MPoint from_minkowski(const Vec4& x);

  /// Lifts a point of the open unit ball (Klein model).
  static MPoint from_klein(const Vec3& y);

  /// Radial projection of a future timelike vector onto the sheet.
  static MPoint project(const Vec4& x);

  const Vec4& coords() const { return x_; }
  double operator[](int i) const { return x_[i]; }
  Vec3 klein() const { return x_.tail<3>() / x_[0]; }

 private:
  explicit MPoint(const Vec4& x) : x_(x) {}
  Vec4 x_;
};

/// A tangent vector v at base, <base, v> = 0.
class TangentVec {
 public:
  /// Projects v onto T_base H^3 after checking it is tangent up to 1e-8.
  TangentVec(const MPoint& base, const Vec4& v);

  /// Orthogonal projection of an arbitrary ambient vector.
  static TangentVec project(const MPoint& base, const Vec4& v);

  const MPoint& base() const { return base_; }
  const Vec4& vec() const { return v_; }
  double norm() const;

 private:
  struct Unchecked {};
  TangentVec(const MPoint& base, const Vec4& v, Unchecked) : base_(base), v_(v) {}
  MPoint base_;
  Vec4 v_;
};

/// Oriented plane with unit spacelike normal n; the half-space is {<x,n> <= 0}.
class HPlane {
 public:
  /// Normalizes n; rejects non-spacelike vectors.
  static HPlane from_normal(const Vec4& n);

  /// Euclidean plane {a.y = b} of the Klein ball, half-space {a.y <= b}.
  static HPlane from_klein(const Vec3& a, double b);

  /// Plane through three points, oriented so that `inside` is in the half-space.
  static HPlane through(const MPoint& p, const MPoint& q, const MPoint& r, const MPoint& inside);

  const Vec4& normal() const { return n_; }
  HPlane flipped() const { return HPlane(-n_); }

  /// Closest point of the plane to the origin of the model.
  MPoint foot_of_origin() const;

 private:
  explicit HPlane(const Vec4& n) : n_(n) {}
  Vec4 n_;
};

/// Unit-speed geodesic s -> cosh(s) p + sinh(s) u.
class HGeodesic {
 public:
  HGeodesic(const MPoint& p, const Vec4& unit_direction);

  static HGeodesic through(const MPoint& from, const MPoint& to);

  const MPoint& base() const { return p_; }
  const Vec4& direction() const { return u_; }
  MPoint point_at(double s) const;
  Vec4 tangent_at(double s) const;

 private:
  MPoint p_;
  Vec4 u_;
};

/// Orientation- and time-orientation-preserving isometry. Both the 4x4
/// Lorentz matrix and a 2x2 unit-determinant complex lift are stored; the
/// complex lift is the authoritative one for traces (defined up to sign).
class Isometry {
 public:
  Isometry();

  /// Validates L^T eta L = eta within 1e-10, L00 > 0, det L = +1.
  static Isometry from_lorentz(const Mat4& lorentz);
  /// Validates |det A - 1| <= 1e-10.
  static Isometry from_sl2c(const Mat2c& a);

  const Mat4& lorentz() const { return lorentz_; }
  const Mat2c& sl2c() const { return sl2c_; }

  MPoint apply(const MPoint& p) const;
  TangentVec apply(const TangentVec& v) const;
  HPlane apply(const HPlane& plane) const;

  Isometry compose(const Isometry& inner) const;  // this o inner
  Isometry inverse() const;

 private:
  Isometry(const Mat4& l, const Mat2c& a) : lorentz_(l), sl2c_(a) {}
  Mat4 lorentz_;
  Mat2c sl2c_;
};

// Hermitian picture: x <-> X = x0 I + x1 s1 + x2 s2 + x3 s3, acted on by A X A^*.
Mat2c hermitian_from_minkowski(const Vec4& x);
Vec4 minkowski_from_hermitian(const Mat2c& x);
Mat4 lorentz_from_sl2c(const Mat2c& a);
/// Matrix exponential of a traceless 2x2 complex matrix.
Mat2c sl2c_exp(const Mat2c& traceless);
/// One of the two lifts +-A of an element of SO+(1,3).
Mat2c sl2c_from_lorentz(const Mat4& lorentz);

/// Hyperbolic distance; throws GeometryError when -<p,q> < 1 - 1e-9.
double dist(const MPoint& p, const MPoint& q);

/// exp_base(t v) = cosh(t|v|) base + sinh(t|v|) v/|v|. Zero v is rejected.
MPoint exp_map(const TangentVec& v, double t);

/// Parallel transport of w (based at geodesic.base()) to geodesic.point_at(s).
TangentVec parallel_transport(const TangentVec& w, const HGeodesic& geodesic, double s);

/// asinh(<p, n>): negative inside the half-space, zero on the plane.
double plane_signed_distance(const HPlane& plane, const MPoint& p);

/// Nearest point of the plane.
MPoint plane_projection(const HPlane& plane, const MPoint& p);

/// Loxodromic isometry translating by `length` along axis and rotating by
/// `twist`, with complex length length + i twist. Throws for length <= 0.
Isometry loxodromic(const HGeodesic& axis, double length, double twist);

/// Elliptic rotation about the axis with complex length i*angle.
Isometry rotation_about(const HGeodesic& axis, double angle);

/// Completes (p, u) to a positively oriented orthonormal frame (p, u, e2, e3).
void complete_frame(const MPoint& p, const Vec4& u, Vec4& e2, Vec4& e3);

}  // namespace schlafli
