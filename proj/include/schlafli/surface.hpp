#pragma once

// Extrinsic geometry of parametrized surfaces in H^3. Conventions: outward
// unit normal nu, shape operator B U = -D_U nu, II(U, V) = I(B U, V),
// H = tr B, K_e = det B. Convex bodies therefore have II <= 0.

#include <array>

#include "schlafli/jet.hpp"
#include "schlafli/minkowski.hpp"

namespace schlafli {

struct FundamentalForms {
  Mat2 first = Mat2::Identity();
  Mat2 second = Mat2::Zero();
  double mean_curvature = 0.0;
  double extrinsic_curvature = 0.0;

  /// Fills H and K_e from I and II; throws if I is not positive definite.
  static FundamentalForms from(const Mat2& first, const Mat2& second);

  Mat2 shape_operator() const { return first.inverse() * second; }
  double area_element() const { return std::sqrt(first.determinant()); }
  /// Largest eigenvalue of I^{-1} II (<= 0 on convex surfaces).
  double max_principal_curvature() const;
};

/// <A, B> = tr(I^{-1} A I^{-1} B), the scalar product induced by I on 2-tensors.
double tensor_dot(const Mat2& first, const Mat2& a, const Mat2& b);

/// Ambient position and derivatives of a chart at one parameter point.
struct ChartJet {
  Vec4 x;
  Vec4 du, dv;
  Vec4 duu, duv, dvv;
};

/// Evaluates a chart written as a generic callable (auto u, auto v) ->
/// std::array<S, 4> of Minkowski coordinates on second-order jets.
template <class Chart>
ChartJet chart_jet(const Chart& chart, double u, double v) {
  const std::array<Jet2, 4> c = chart(Jet2::variable(u, 0), Jet2::variable(v, 1));
  ChartJet j;
  for (int i = 0; i < 4; ++i) {
    j.x[i] = c[i].v;
    j.du[i] = c[i].g[0];
    j.dv[i] = c[i].g[1];
    j.duu[i] = c[i].h(0, 0);
    j.duv[i] = c[i].h(0, 1);
    j.dvv[i] = c[i].h(1, 1);
  }
  return j;
}

/// Unit normal at the chart point with <nu, outward_hint> > 0.
Vec4 unit_normal(const ChartJet& j, const Vec4& outward_hint);

/// I and II of the embedded chart, II taken against the normal selected by
/// outward_hint.
FundamentalForms forms_from_jet(const ChartJet& j, const Vec4& outward_hint);

template <class Chart>
FundamentalForms embedded_forms(const Chart& chart, double u, double v, const Vec4& outward_hint) {
  return forms_from_jet(chart_jet(chart, u, v), outward_hint);
}

}  // namespace schlafli
