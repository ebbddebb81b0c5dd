#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "schlafli/minkowski.hpp"

namespace schlafli {

using Tetrahedron = std::array<Vec3, 4>;

/// Barycentric points and weights (summing to one) of a rule on the
/// 3-simplex.
struct SimplexRule {
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Grundmann-Moeller rule of degree 2s + 1 on the tetrahedron.
SimplexRule grundmann_moeller_rule(int s);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;        // estimated absolute error
  std::size_t regions = 0;   // tetrahedra in the final subdivision
};

/// Globally adaptive cubature over a union of tetrahedra: the region with the
/// largest error estimate (|degree-9 - degree-7|) is bisected along its
/// longest edge until the summed estimate drops below tol. The result is
/// independent of evaluation order for a given input.
QuadratureResult integrate_tetrahedra(const std::function<double(const Vec3&)>& f,
                                      const std::vector<Tetrahedron>& tets, double tol,
                                      std::size_t max_regions = 200000);

double tetrahedron_volume(const Tetrahedron& t);

/// Adaptive Gauss-Kronrod on [a, b] with relative tolerance.
double integrate_1d(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13);

/// Nested Gauss-Kronrod on [u0, u1] x [v0, v1].
double integrate_2d(const std::function<double(double, double)>& f, double u0, double u1, double v0,
                    double v1, double rel_tol = 1e-12);

}  // namespace schlafli
