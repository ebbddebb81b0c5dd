#pragma once

// Equidistant surfaces, tube volumes and the dual volume of neighborhoods.

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "schlafli/polyhedra.hpp"
#include "schlafli/surface.hpp"

namespace schlafli {

// ---------------------------------------------------------------- charts

/// Distance-eps surface above the plane {x3 = 0}, in the chart
/// p(a, b) = cosh a cosh b e0 + sinh a e1 + cosh a sinh b e2 of the plane.
template <class S>
std::array<S, 4> plane_tube_point(double eps, const S& a, const S& b) {
  using std::cosh;
  using std::sinh;
  const double c = std::cosh(eps), s = std::sinh(eps);
  return {c * cosh(a) * cosh(b), c * sinh(a), c * cosh(a) * sinh(b), S(s) + 0.0 * a};
}

/// Distance-eps surface around the geodesic cosh s e0 + sinh s e1.
template <class S>
std::array<S, 4> line_tube_point(double eps, const S& s, const S& theta) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  const double c = std::cosh(eps), h = std::sinh(eps);
  return {c * cosh(s), c * sinh(s), h * cos(theta) + 0.0 * s, h * sin(theta) + 0.0 * s};
}

/// I = cosh^2 eps (da^2 + cosh^2 a db^2), II = -tanh eps I.
FundamentalForms plane_tube_forms(double eps, double a, double b);
/// I = cosh^2 eps ds^2 + sinh^2 eps dtheta^2, II = -cosh eps sinh eps (ds^2 + dtheta^2).
/// Throws GeometryError for eps <= 0.
FundamentalForms line_tube_forms(double eps, double s, double theta);

// ---------------------------------------------------------------- bent chains

/// Intersection of half-spaces whose planes are all orthogonal to the plane
/// {x3 = 0}: a prism over a convex polygonal chain. Bending lines are the
/// geodesics orthogonal to {x3 = 0} through the chain's corners; the window
/// keeps |x3-distance| <= half_width along every line and face.
class BentChain {
 public:
  struct Split {
    double theta1 = 0.0;  // angle between the left plane and the new one
    double theta2 = 0.0;  // angle between the new plane and the right one
    HPlane plane;
  };

  /// Validates: at least two planes, normals with zero e3 component,
  /// consecutive angles in (0, pi), every corner inside every half-space,
  /// and a consistent turning direction. Faces of length zero are allowed;
  /// they come from planes inserted through a bending line.
  BentChain(std::vector<HPlane> planes, double half_width);

  const std::vector<HPlane>& planes() const { return planes_; }
  double half_width() const { return half_width_; }
  std::size_t line_count() const { return corners_.size(); }

  /// Corner i, where planes i and i + 1 meet {x3 = 0}.
  const std::vector<MPoint>& corners() const { return corners_; }
  const std::vector<double>& bending_angles() const { return angles_; }
  HGeodesic bending_line(std::size_t i) const;
  /// Lengths of the interior faces between consecutive corners.
  std::vector<double> face_lengths() const;
  /// Window areas of the interior faces: length * 2 sinh(half_width).
  std::vector<double> face_areas() const;

  /// Sum of bending angles met by a transverse arc.
  double bending_sum() const;
  /// Window bending length: sum of theta_i * 2 half_width.
  double bending_length() const;

  /// Inserts split.plane between planes index and index + 1. The declared
  /// angles must match the plane within 1e-9. A split with one angle zero is
  /// a null line and returns the chain unchanged.
  BentChain refine(std::size_t index, const Split& split) const;
  /// The split whose plane is the given one, with angles measured.
  Split split_with(std::size_t index, const HPlane& plane) const;
  /// Plane through bending line index, at angle fraction * theta_index from the left plane.
  Split pencil_split(std::size_t index, double fraction) const;

  /// Distance from p to the prism, and its unit gradient (zero inside).
  double distance(const MPoint& p) const;
  Vec4 distance_gradient(const MPoint& p) const;

  /// Tube volume of the window (faces plus wedges) at distance eps.
  double window_tube_volume(double eps) const;
  /// Integral of H over the window's eps-surface by 2D quadrature of the forms.
  double window_mean_curvature_integral(double eps) const;
  /// Forms sampled on an n x n grid over every window piece.
  std::vector<FundamentalForms> sample_forms(double eps, int n) const;

 private:
  struct Piece;
  std::vector<Piece> pieces(double eps) const;
  MPoint nearest_point(const MPoint& p) const;

  std::vector<HPlane> planes_;
  double half_width_;
  std::vector<MPoint> corners_;
  std::vector<double> angles_;
};

/// Outward normal of the line tangent to the circle of the given radius
/// about the origin of {x3 = 0}, at polar angle phi.
HPlane circle_tangent_plane(double radius, double phi);
/// Chain of pieces + 1 tangent planes at equally spaced angles in [phi0, phi1].
BentChain circular_chain(double radius, double phi0, double phi1, int pieces, double half_width);
/// Inserts the tangent plane at the mid-angle of every bending line.
BentChain refine_circular(const BentChain& chain, double radius);
/// Exterior angle between tangent planes whose polar angles differ by delta.
double circle_tangent_angle(double radius, double delta);

/// Largest angle between the gradients of the distance to the chain and to
/// the target disc, over points at distance eps from the disc with polar
/// angle in [phi0, phi1] (n samples).
double gradient_deviation(const BentChain& chain, double radius, double eps, double phi0, double phi1, int n);

// ---------------------------------------------------------------- tube volumes

struct FlatPatch {
  double area = 0.0;
};
struct Wedge {
  double length = 0.0;
  double angle = 0.0;  // theta_0 in [0, 2 pi]
};
struct VertexCone {
  double solid_angle = 0.0;  // Omega in [0, 4 pi]
};
/// Core geodesic of a solid torus; the bending weight is a full turn.
struct SolidTorusCore {
  double length = 0.0;
  double weight = 2.0 * kPi;
};

using TubeBase = std::variant<FlatPatch, Wedge, VertexCone, SolidTorusCore, BentChain>;

struct TubeSpec {
  TubeBase base;
  double eps = 0.0;
};

/// Throws GeometryError for negative sizes, eps < 0, theta_0 > 2 pi or Omega > 4 pi.
void validate(const TubeSpec& spec);

/// Volume of the eps-neighborhood piece over the base.
double tube_volume(const TubeSpec& spec);
/// Integral of the mean curvature over the eps-surface piece.
double mean_curvature_integral(const TubeSpec& spec);
/// -2 pi |chi| sinh 2eps - lmu cosh 2eps.
double core_mean_curvature_integral(int chi, double lmu, double eps);

/// Vol*_0 - lmu/4 (cosh 2eps - 1) - pi/2 |chi| (sinh 2eps - 2eps).
double core_dual_volume_expansion(double vstar0, double lmu, int chi, double eps);

/// Vol(N_eps) + 1/2 int H for the solid torus, assembled from the pieces.
double solid_torus_dual_volume(double length, double eps);

/// Edge, face and vertex data that determine the neighborhood of a polyhedron.
struct NeighborhoodData {
  double volume = 0.0;
  double bending_length = 0.0;  // sum l theta
  double face_area = 0.0;       // sum of face areas
  double solid_angle = 0.0;     // sum of normal-cone solid angles
};
NeighborhoodData neighborhood_data(const ConvexPolyhedron& p, double tol = kDefaultVolumeTol);

double neighborhood_volume(const NeighborhoodData& d, double eps);
double neighborhood_mean_curvature_integral(const NeighborhoodData& d, double eps);
/// Vol(N_eps P) + 1/2 int H over its boundary.
double neighborhood_dual_volume(const NeighborhoodData& d, double eps);

/// Polynomial extrapolation to eps = 0 through the samples (Neville).
double richardson_limit(const std::vector<double>& eps, const std::vector<double>& values);

// ---------------------------------------------------------------- convexity margin

/// Smooth family of maps F_t of H^3 with F_0 the identity, written on jets
/// of Minkowski coordinates.
struct DiffeoFamily {
  std::string name;
  std::function<std::array<Jet2, 4>(const std::array<Jet2, 4>&, double)> map;
};

std::vector<std::string> builtin_diffeo_names();
/// "identity-v1", "isometry-path-v1", "klein-dilation-v1" (optionally "builtin:" prefixed).
DiffeoFamily builtin_diffeo(std::string_view name);

struct MarginProbe {
  double radius = 0.5;  // chart square [-radius, radius]^2 about the foot of the origin
  int grid = 7;
};

/// Largest eigenvalue of I_t^{-1}(II_t + tanh eps I_t) over the probe grid on
/// F_t(S), where S is the eps-surface outside the half-space of `plane`.
double convexity_margin(const DiffeoFamily& family, const HPlane& plane, double eps, double t,
                        const MarginProbe& probe = {});

}  // namespace schlafli
