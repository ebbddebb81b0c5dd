#pragma once

// Holonomy representations, complex lengths from traces, rational
// laminations and first variations of length.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "schlafli/minkowski.hpp"

namespace schlafli {

/// Generators of a representation; each has determinant 1 within 1e-10.
class Rep {
 public:
  explicit Rep(std::vector<Mat2c> generators);
  const std::vector<Mat2c>& generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }

 private:
  std::vector<Mat2c> generators_;
};

struct Letter {
  int generator = 0;
  bool inverse = false;
  bool operator==(const Letter&) const = default;
};
using Word = std::vector<Letter>;

/// Lowercase a, b, c, ... are generators 0, 1, 2, ...; uppercase their
/// inverses. Whitespace is ignored. Throws GeometryError unless the word is
/// nonempty and cyclically reduced.
Word parse_word(std::string_view text);
std::string format_word(const Word& word);
/// Cyclic rotation by k letters.
Word rotate_word(const Word& word, std::size_t k);

/// Product of the letters, left to right.
Mat2c evaluate(const Rep& rep, const Word& word);

/// lambda with tr A = +-2 cosh(lambda / 2), Re lambda > 0, Im lambda in (-pi, pi].
/// Throws NonLoxodromicError (index 0) when Re lambda <= 1e-12.
Complex complex_length(const Mat2c& a);
double real_length(const Mat2c& a);

struct WeightedCurve {
  Word word;
  double weight = 1.0;
};

/// Finite weighted sum of simple closed curves.
class RationalLamination {
 public:
  RationalLamination() = default;
  explicit RationalLamination(std::vector<WeightedCurve> curves);
  /// Parses each word; weights must be positive.
  static RationalLamination parse(const std::vector<std::pair<std::string, double>>& curves);

  const std::vector<WeightedCurve>& curves() const { return curves_; }
  RationalLamination united(const RationalLamination& other) const;
  RationalLamination scaled(double factor) const;

 private:
  std::vector<WeightedCurve> curves_;
};

/// Sum of weight * real length. Throws NonLoxodromicError carrying the curve index.
double lamination_length(const Rep& rep, const RationalLamination& lamination);

/// Smooth path of representations. derivatives may be empty, in which case
/// generator derivatives are taken by order-4 central differences.
struct RepPath {
  std::string name;
  double t_min = -1.0;
  double t_max = 1.0;
  std::function<std::vector<Mat2c>(double)> generators;
  std::function<std::vector<Mat2c>(double)> derivatives;

  Rep at(double t) const;
  std::vector<Mat2c> generator_derivatives(double t) const;
};

std::vector<std::string> builtin_rep_path_names();
/// "constant-v1", "loxodromic-v1", "twist-v1", "bending-v1" (optionally "builtin:" prefixed).
RepPath builtin_rep_path(std::string_view name, const std::map<std::string, double>& params = {});
/// The lamination each built-in path is checked against.
RationalLamination builtin_path_lamination(std::string_view name);

struct LengthDerivative {
  double fd = 0.0;        // central difference of lamination_length
  double analytic = 0.0;  // sum u Re(tau' / sinh(lambda / 2)), tau' by the product rule
  double residual = 0.0;
};

/// Throws BranchCrossingError when Im lambda of some curve jumps by more than
/// pi inside the stencil.
LengthDerivative length_derivative(const RepPath& path, const RationalLamination& lamination, double t,
                                   double h = 1e-4);

/// Metric variation on a 3D chart: g0, its t-derivative and a g0-geodesic.
struct MetricDeformation {
  std::string name;
  std::function<Mat3(const Vec3&)> metric;
  std::function<Mat3(const Vec3&)> variation;
  std::function<Vec3(double)> curve;
  std::function<Vec3(double)> velocity;
  double s0 = 0.0;
  double s1 = 1.0;
  /// Length of the fixed curve under g_t, when available in closed form or by
  /// direct quadrature; used for finite-difference cross-checks.
  std::function<double(double)> curve_length;
};

std::vector<std::string> builtin_deformation_names();
/// "warped-solid-torus-v1", "conformal-v1", "zero-v1", "klein-shear-v1".
MetricDeformation builtin_deformation(std::string_view name, const std::map<std::string, double>& params = {});

/// Largest |gamma'' + Gamma(gamma', gamma')| over n samples, Christoffel
/// symbols from central differences of g0.
double geodesic_residual(const MetricDeformation& d, int n = 17);
/// Throws GeometryError unless g0 is positive definite along the curve and
/// the geodesic residual is at most 1e-8.
void validate(const MetricDeformation& d);

/// Integral of gdot(c', c') / (2 g0(c', c')) with respect to g0 arclength.
double first_variation_integral(const MetricDeformation& d);

}  // namespace schlafli
