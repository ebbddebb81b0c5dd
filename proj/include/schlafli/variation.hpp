#pragma once

// Finite-difference verification of variation formulas for volume and dual
// volume, on polyhedron families and on closed-form smooth families.

#include <cstdint>
#include <random>
#include <utility>

#include "schlafli/polyhedra.hpp"
#include "schlafli/surface.hpp"

namespace schlafli {

struct Stencil {
  double h = kDefaultFdStep;
  int order = 2;
};

struct VariationReport {
  double t = 0.0;
  double lhs = 0.0;       // finite-difference derivative
  double rhs = 0.0;       // formula value
  double residual = 0.0;  // |lhs - rhs|
  Stencil stencil;
};

/// Quadrature tolerance used for the volumes inside checks. Tighter than the
/// library default so that quadrature noise divided by h stays far below 1e-6.
inline constexpr double kCheckVolumeTol = 1e-12;

/// lhs = FD of Vol, rhs = 1/2 sum l(e) dtheta(e).
VariationReport schlafli_check(const PolyhedronFamily& family, double t, Stencil stencil = {},
                               double volume_tol = kCheckVolumeTol);
/// lhs = FD of Vol*, rhs = -1/2 sum theta(e) dl(e). Polyhedral version of the
/// dual variation formula for convex cores.
VariationReport dual_schlafli_check(const PolyhedronFamily& family, double t, Stencil stencil = {},
                                    double volume_tol = kCheckVolumeTol);

/// |dVol* - (dVol - 1/2 sum (theta dl + l dtheta))| for given derivatives.
double dual_identity_residual(const std::vector<EdgeVariation>& edges, double d_volume, double d_dual_volume);

// ---------------------------------------------------------------- smooth families

/// Closed-form convex families: a geodesic ball of radius rho(t), the
/// one-sided rho(t)-neighborhood of a square plane patch, and the
/// rho(t)-tube around a geodesic segment; rho(t) = base + rate t. The normal
/// speed of the boundary is the constant rate.
struct SmoothFamilySpec {
  enum class Kind { GeodesicSphere, PlaneTube, LineTube };
  Kind kind = Kind::GeodesicSphere;
  double base = 0.5;
  double rate = 1.0;
  double window = 1.0;  // plane tube: chart square [-window, window]^2
  double length = 1.0;  // line tube: core length

  double rho(double t) const { return base + rate * t; }
  /// Chart domain [u0, u1] x [v0, v1].
  std::array<double, 4> domain() const;
  FundamentalForms forms(double t, double u, double v) const;
  /// t-derivative of the first fundamental form.
  Mat2 delta_first(double t, double u, double v) const;
  /// Enclosed volume by radial quadrature (relative to the core for tubes).
  double volume(double t) const;
  /// Integral of H over the boundary by 2D quadrature of the forms.
  double mean_curvature_integral(double t) const;
  double dual_volume(double t) const { return volume(t) + 0.5 * mean_curvature_integral(t); }
  /// Closed form of dVol*/dt.
  double dual_volume_derivative(double t) const;
};

std::string to_string(SmoothFamilySpec::Kind kind);
SmoothFamilySpec::Kind smooth_kind_from_string(std::string_view name);

/// Order-4 central difference of I_t against delta_first; max entry deviation.
double delta_first_residual(const SmoothFamilySpec& spec, double t, double u, double v, double h = 1e-3);

/// lhs = FD of Vol*(t); rhs = 1/4 int <dI, H I - II> da.
VariationReport smooth_dual_variation_check(const SmoothFamilySpec& spec, double t,
                                            Stencil stencil = {1e-3, 4});

struct FlowIntegrand {
  double contraction = 0.0;  // <dI, H I - II>
  double curvature = 0.0;    // -4 f K_e
};
/// Both expressions for the normal-flow integrand; throws GeometryError when
/// they differ by more than 1e-9.
FlowIntegrand normal_flow_integrand(const SmoothFamilySpec& spec, double t, double u, double v);

// ---------------------------------------------------------------- monotonicity and continuity

struct MonotonicityResult {
  bool contained = false;
  double margin = 0.0;  // Vol*(inner) - Vol*(outer), when contained
};

MonotonicityResult monotonicity_check(const ConvexPolyhedron& inner, const ConvexPolyhedron& outer,
                                      double volume_tol = kCheckVolumeTol);

/// Outer: hull of random Klein points; inner: hull of random convex
/// combinations of the outer vertices.
std::pair<ConvexPolyhedron, ConvexPolyhedron> random_nested_pair(std::mt19937_64& rng);

struct NestedFuzzResult {
  int pairs = 0;
  int violations = 0;   // margin < -1e-9
  double worst_margin = 0.0;
};
NestedFuzzResult monotonicity_fuzz(int pairs, std::uint64_t seed);

enum class PerturbationMode { RandomKlein, Isometry };

/// Largest |Vol*(P') - Vol*(P)| over `samples` perturbations whose vertex
/// motions have Klein norm at most delta. Throws CombinatorialChangeError if
/// a perturbation changes the face lattice.
double continuity_probe(const ConvexPolyhedron& p, double delta, PerturbationMode mode = PerturbationMode::RandomKlein,
                        int samples = 16, std::uint64_t seed = 0);

}  // namespace schlafli
