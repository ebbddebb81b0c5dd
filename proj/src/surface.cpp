#include "schlafli/surface.hpp"

#include <Eigen/Eigenvalues>

namespace schlafli {

FundamentalForms FundamentalForms::from(const Mat2& first, const Mat2& second) {
  if (!(first(0, 0) > 0.0) || !(first.determinant() > 0.0)) {
    throw GeometryError("first fundamental form is not positive definite");
  }
  FundamentalForms f;
  f.first = 0.5 * (first + first.transpose());
  f.second = 0.5 * (second + second.transpose());
  const Mat2 b = f.shape_operator();
  f.mean_curvature = b.trace();
  f.extrinsic_curvature = b.determinant();
  return f;
}

double FundamentalForms::max_principal_curvature() const {
  // Generalized symmetric problem II x = k I x.
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat2> solver(second, first);
  return solver.eigenvalues().maxCoeff();
}

double tensor_dot(const Mat2& first, const Mat2& a, const Mat2& b) {
  const Mat2 inv = first.inverse();
  return (inv * a * inv * b).trace();
}

Vec4 unit_normal(const ChartJet& j, const Vec4& outward_hint) {
  Vec4 n = minkowski_cross(j.x, j.du, j.dv);
  const double q = minkowski_dot(n, n);
  if (!(q > 0.0)) throw GeometryError("chart is singular: no spacelike normal");
  n /= std::sqrt(q);
  if (minkowski_dot(n, outward_hint) < 0.0) n = -n;
  return n;
}

FundamentalForms forms_from_jet(const ChartJet& j, const Vec4& outward_hint) {
  const Vec4 nu = unit_normal(j, outward_hint);
  Mat2 first;
  first << minkowski_dot(j.du, j.du), minkowski_dot(j.du, j.dv), minkowski_dot(j.dv, j.du),
      minkowski_dot(j.dv, j.dv);
  // II_ab = <nu, D_a sigma_b>; the normal correction of the ambient second
  // derivative is proportional to x and drops out against nu.
  Mat2 second;
  second << minkowski_dot(nu, j.duu), minkowski_dot(nu, j.duv), minkowski_dot(nu, j.duv),
      minkowski_dot(nu, j.dvv);
  return FundamentalForms::from(first, second);
}

}  // namespace schlafli
