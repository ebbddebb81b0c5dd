#include <doctest.h>

#include "oracles.hpp"
#include "schlafli/quadrature.hpp"
#include "schlafli/surface.hpp"
#include "schlafli/tubes.hpp"

using namespace schlafli;

namespace {

oracle::LVec4 lhint(const Vec4& h) { return {h[0], h[1], h[2], h[3]}; }

void check_against_oracle(const FundamentalForms& f, const oracle::Forms& o, double tol) {
  CHECK((f.first - o.first).cwiseAbs().maxCoeff() < tol);
  CHECK((f.second - o.second).cwiseAbs().maxCoeff() < tol);
}

}  // namespace

TEST_CASE("jets carry exact first and second derivatives") {
  const double u = 0.7, v = -0.3;
  const Jet2 x = Jet2::variable(u, 0), y = Jet2::variable(v, 1);
  const Jet2 f = sin(x * y) + exp(x) / cosh(y) + sqrt(x * x + 1.0);
  const double xy = u * v;
  CHECK(f.v == doctest::Approx(std::sin(xy) + std::exp(u) / std::cosh(v) + std::sqrt(u * u + 1)).epsilon(1e-15));
  CHECK(f.g[0] == doctest::Approx(v * std::cos(xy) + std::exp(u) / std::cosh(v) + u / std::sqrt(u * u + 1)));
  CHECK(f.g[1] == doctest::Approx(u * std::cos(xy) - std::exp(u) * std::tanh(v) / std::cosh(v)));
  CHECK(f.h(0, 0) == doctest::Approx(-v * v * std::sin(xy) + std::exp(u) / std::cosh(v) +
                                     1.0 / std::pow(u * u + 1, 1.5)));
  CHECK(f.h(0, 1) == doctest::Approx(std::cos(xy) - xy * std::sin(xy) - std::exp(u) * std::tanh(v) / std::cosh(v)));
  CHECK(f.h(0, 1) == f.h(1, 0));
}

TEST_CASE("embedded forms agree with long-double finite differences") {
  SUBCASE("plane tube") {
    for (double eps : {0.2, 0.9}) {
      const auto chart = [eps](const auto& a, const auto& b) { return plane_tube_point(eps, a, b); };
      const auto lchart = [eps](long double a, long double b) {
        const long double c = std::cosh((long double)eps), s = std::sinh((long double)eps);
        return oracle::LVec4{c * std::cosh(a) * std::cosh(b), c * std::sinh(a), c * std::cosh(a) * std::sinh(b), s};
      };
      const Vec4 hint(0, 0, 0, 1);
      for (double a : {-0.5, 0.1, 0.6}) {
        const FundamentalForms f = embedded_forms(chart, a, 0.3, hint);
        check_against_oracle(f, oracle::fd_forms(lchart, a, 0.3L, lhint(hint)), 1e-9);
        const FundamentalForms closed = plane_tube_forms(eps, a, 0.3);
        CHECK((f.first - closed.first).norm() < 1e-13);
        CHECK((f.second - closed.second).norm() < 1e-13);
        CHECK(f.mean_curvature == doctest::Approx(-2.0 * std::tanh(eps)));
        CHECK(f.max_principal_curvature() == doctest::Approx(-std::tanh(eps)));
      }
    }
  }
  SUBCASE("line tube") {
    const double eps = 0.6;
    const auto chart = [eps](const auto& s, const auto& th) { return line_tube_point(eps, s, th); };
    const auto lchart = [eps](long double s, long double th) {
      const long double c = std::cosh((long double)eps), h = std::sinh((long double)eps);
      return oracle::LVec4{c * std::cosh(s), c * std::sinh(s), h * std::cos(th), h * std::sin(th)};
    };
    for (double th : {0.0, 1.0, 2.5}) {
      const Vec4 hint(0, 0, std::cos(th), std::sin(th));
      const FundamentalForms f = embedded_forms(chart, 0.4, th, hint);
      check_against_oracle(f, oracle::fd_forms(lchart, 0.4L, th, lhint(hint)), 1e-9);
      const FundamentalForms closed = line_tube_forms(eps, 0.4, th);
      CHECK((f.first - closed.first).norm() < 1e-13);
      CHECK((f.second - closed.second).norm() < 1e-13);
      CHECK(f.extrinsic_curvature == doctest::Approx(1.0));  // tanh eps * coth eps
    }
    CHECK_THROWS_AS(line_tube_forms(0.0, 0.0, 0.0), GeometryError);
  }
  SUBCASE("sphere about an off-origin centre") {
    // Geodesic sphere of radius r about c, built with an explicit frame.
    const Vec4 c(std::cosh(0.5), std::sinh(0.5), 0.0, 0.0);
    const Vec4 e1(std::sinh(0.5), std::cosh(0.5), 0.0, 0.0), e2(0, 0, 1, 0), e3(0, 0, 0, 1);
    const double r = 0.8;
    const auto chart = [&](const auto& th, const auto& ph) {
      using std::cos;
      using std::sin;
      std::array<std::decay_t<decltype(th)>, 4> out;
      const auto x = sin(th) * cos(ph), y = sin(th) * sin(ph), z = cos(th);
      for (int i = 0; i < 4; ++i)
        out[i] = std::cosh(r) * c[i] + std::sinh(r) * (x * e1[i] + y * e2[i] + z * e3[i]);
      return out;
    };
    const auto lchart = [&](long double th, long double ph) {
      oracle::LVec4 out;
      const long double x = std::sin(th) * std::cos(ph), y = std::sin(th) * std::sin(ph), z = std::cos(th);
      for (int i = 0; i < 4; ++i)
        out[i] = std::cosh((long double)r) * c[i] + std::sinh((long double)r) * (x * e1[i] + y * e2[i] + z * e3[i]);
      return out;
    };
    const double th = 1.1, ph = 0.4;
    const auto p = chart(th, ph);
    const Vec4 hint = Vec4(p[0], p[1], p[2], p[3]) - c;  // away from the centre
    const FundamentalForms f = embedded_forms(chart, th, ph, hint);
    check_against_oracle(f, oracle::fd_forms(lchart, th, ph, lhint(hint)), 1e-9);
    CHECK(f.mean_curvature == doctest::Approx(-2.0 / std::tanh(r)).epsilon(1e-12));
    CHECK(f.extrinsic_curvature == doctest::Approx(1.0 / std::pow(std::tanh(r), 2)).epsilon(1e-12));
  }
}

TEST_CASE("fundamental form validation and tensor products") {
  Mat2 bad;
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(FundamentalForms::from(bad, Mat2::Zero()), GeometryError);

  Mat2 g, a, b;
  g << 2.0, 0.3, 0.3, 1.5;
  a << 1.0, -0.2, -0.2, 0.4;
  b << 0.5, 0.7, 0.7, -1.0;
  const Mat2 gi = g.inverse();
  CHECK(tensor_dot(g, a, b) == doctest::Approx((gi * a * gi * b).trace()));
  CHECK(tensor_dot(g, a, b) == doctest::Approx(tensor_dot(g, b, a)));
  CHECK(tensor_dot(g, g, g) == doctest::Approx(2.0));
}

TEST_CASE("Grundmann-Moeller rules integrate monomials exactly up to their degree") {
  const Tetrahedron unit{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  for (int s = 0; s <= 4; ++s) {
    const SimplexRule rule = grundmann_moeller_rule(s);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
    auto apply = [&](int a, int b, int c) {
      double sum = 0.0;
      for (std::size_t k = 0; k < rule.points.size(); ++k) {
        const auto& p = rule.points[k];
        const Vec3 x = p[0] * unit[0] + p[1] * unit[1] + p[2] * unit[2] + p[3] * unit[3];
        sum += rule.weights[k] * std::pow(x[0], a) * std::pow(x[1], b) * std::pow(x[2], c);
      }
      return sum * tetrahedron_volume(unit);
    };
    for (int a = 0; a <= rule.degree; ++a)
      for (int b = 0; a + b <= rule.degree; ++b)
        for (int c = 0; a + b + c <= rule.degree; ++c)
          CHECK(apply(a, b, c) == doctest::Approx(oracle::simplex_monomial(a, b, c)).epsilon(1e-12));
    const int over = rule.degree + 1;
    CHECK(std::abs(apply(over, 0, 0) - oracle::simplex_monomial(over, 0, 0)) > 1e-14);
  }
}

TEST_CASE("adaptive cubature over tetrahedra") {
  const Tetrahedron unit{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  const auto r = integrate_tetrahedra([](const Vec3& x) { return std::exp(x[0]); }, {unit}, 1e-13);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 2.5).epsilon(1e-12));
  CHECK(r.error <= 1e-13);

  // Box [0, l] x [0, th] x [0, e] split into six tetrahedra; the wedge tube integrand.
  const double l = 1.3, th = 2.4, e = 0.75;
  const Vec3 d(l, th, e);
  std::vector<Tetrahedron> box;
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& p : perms) {
    Vec3 v = Vec3::Zero();
    Tetrahedron t;
    t[0] = v;
    for (int k = 0; k < 3; ++k) {
      v[p[k]] = d[p[k]];
      t[k + 1] = v;
    }
    box.push_back(t);
  }
  const auto w = integrate_tetrahedra([](const Vec3& x) { return std::cosh(x[2]) * std::sinh(x[2]); }, box, 1e-12);
  CHECK(w.value == doctest::Approx(th * l * (std::cosh(2 * e) - 1) / 4).epsilon(1e-12));

  CHECK_THROWS_AS(integrate_tetrahedra([](const Vec3& x) { return 1.0 / x.norm(); }, {unit}, 1e-15, 50),
                  QuadratureError);
}

TEST_CASE("one and two dimensional quadrature") {
  for (double r : {0.1, 0.7, 1.5}) {
    const double ball = integrate_1d([](double s) { return 4 * kPi * std::sinh(s) * std::sinh(s); }, 0.0, r);
    CHECK(ball == doctest::Approx(kPi * (std::sinh(2 * r) - 2 * r)).epsilon(1e-13));
    CHECK(ball == doctest::Approx(oracle::simpson([](double s) { return 4 * kPi * std::sinh(s) * std::sinh(s); },
                                                  0.0, r, 2000))
                      .epsilon(1e-10));
  }
  const double q = integrate_2d([](double u, double v) { return std::cos(u) * std::exp(v); }, 0.0, 1.0, -1.0, 0.5);
  CHECK(q == doctest::Approx(std::sin(1.0) * (std::exp(0.5) - std::exp(-1.0))).epsilon(1e-12));
}
