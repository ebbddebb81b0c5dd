#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schlafli/minkowski.hpp"
#include "schlafli/quadrature.hpp"

namespace schlafli {

inline constexpr double kDefaultVolumeTol = 1e-10;
inline constexpr double kDefaultFdStep = 1e-4;

struct Face {
  HPlane plane;             // outward
  std::vector<int> cycle;   // vertex indices, counter-clockwise seen from outside
};

struct Edge {
  int v0 = 0, v1 = 0;       // vertex indices, v0 < v1
  int f0 = 0, f1 = 0;       // adjacent faces
  double length = 0.0;
  double exterior_angle = 0.0;  // arccos <n0, n1>, in (0, pi)
  double interior_angle() const { return kPi - exterior_angle; }
};

/// Face lattice expressed in the indices of the points a hull was built from.
/// Each face cycle starts at its smallest index.
struct Combinatorics {
  std::vector<std::vector<int>> faces;
  bool operator==(const Combinatorics&) const = default;
};

class ConvexPolyhedron {
 public:
  /// Convex hull of the Klein images, lifted back. Coplanar faces within 1e-10
  /// are merged. Throws GeometryError for fewer than 4 points or a flat cloud.
  static ConvexPolyhedron hull(std::span<const MPoint> points);

  const std::vector<MPoint>& vertices() const { return vertices_; }
  /// Index into the hull input of each vertex (increasing).
  const std::vector<int>& source_indices() const { return source_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Edge>& edges() const { return edges_; }

  Combinatorics combinatorics() const;
  int euler_characteristic() const;

  /// <p, n_f> <= tol for every face.
  bool contains(const MPoint& p, double tol = 1e-9) const;
  ConvexPolyhedron transformed(const Isometry& g) const;

  /// Sum over edges of length * exterior angle.
  double bending_length() const;
  /// Hyperbolic areas, (k - 2) pi - (sum of corner angles).
  std::vector<double> face_areas() const;
  /// Corner angle of face f at its k-th cycle vertex.
  double corner_angle(int face, int k) const;
  /// Solid angle of the outward normal cone at each vertex: 2 pi - sum of corner angles.
  std::vector<double> normal_cone_solid_angles() const;

  /// Barycentric cone decomposition into Klein-model tetrahedra.
  std::vector<Tetrahedron> klein_tetrahedra() const;

 private:
  std::vector<MPoint> vertices_;
  std::vector<int> source_;
  std::vector<Face> faces_;
  std::vector<Edge> edges_;
};

inline ConvexPolyhedron hull(std::span<const MPoint> points) { return ConvexPolyhedron::hull(points); }

/// Integral of (1 - |y|^2)^-2 over the Klein image. tol >= 1e-12.
QuadratureResult volume_with_error(const ConvexPolyhedron& p, double tol = kDefaultVolumeTol);
double volume(const ConvexPolyhedron& p, double tol = kDefaultVolumeTol);

/// Vol - 1/2 sum l(e) theta(e).
double dual_volume(const ConvexPolyhedron& p, double tol = kDefaultVolumeTol);
/// (Vol + Vol*) / 2.
double w_volume(const ConvexPolyhedron& p, double tol = kDefaultVolumeTol);

/// One-parameter family of polyhedra with a fixed face lattice.
class PolyhedronFamily {
 public:
  using VertexPath = std::function<std::vector<MPoint>(double)>;

  /// Validates the combinatorics at `validation_samples` equally spaced times.
  PolyhedronFamily(std::string name, VertexPath path, double t_min, double t_max,
                   int validation_samples = 9);

  /// Dense samples interpolated by local degree-4 Lagrange polynomials in
  /// Klein coordinates. Times must be strictly increasing.
  static PolyhedronFamily from_samples(std::vector<double> times, std::vector<std::vector<MPoint>> vertices);

  const std::string& name() const { return name_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  const Combinatorics& combinatorics() const { return combinatorics_; }

  std::vector<MPoint> vertices(double t) const;
  /// Throws CombinatorialChangeError if the hull at t differs from the family's lattice.
  ConvexPolyhedron at(double t) const;

 private:
  std::string name_;
  VertexPath path_;
  double t_min_, t_max_;
  Combinatorics combinatorics_;
};

/// Names of the frozen built-in families.
std::vector<std::string> builtin_family_names();
/// Built-in families "builtin:<name>" or "<name>"; params override defaults.
PolyhedronFamily builtin_family(std::string_view name, const std::map<std::string, double>& params = {});

struct EdgeVariation {
  int v0 = 0, v1 = 0;  // family vertex indices
  double length = 0.0;
  double exterior_angle = 0.0;
  double d_length = 0.0;
  double d_angle = 0.0;
};

/// Central differences of every edge's length and exterior angle; order 2
/// (t +- h) or 4 (t +- h, t +- 2h).
std::vector<EdgeVariation> edge_data_derivative(const PolyhedronFamily& family, double t,
                                                double h = kDefaultFdStep, int order = 2);

/// Central difference of a scalar function of t.
double central_difference(const std::function<double(double)>& f, double t, double h, int order);

}  // namespace schlafli
