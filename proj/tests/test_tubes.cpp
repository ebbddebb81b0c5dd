#include <doctest.h>

#include "oracles.hpp"
#include "schlafli/tubes.hpp"

using namespace schlafli;

namespace {

// Volume densities of the three tube pieces in normal coordinates.
double flat_oracle(double area, double eps) {
  return area * oracle::simpson([](double s) { return std::pow(std::cosh(s), 2); }, 0.0, eps, 400);
}
double wedge_oracle(double length, double theta, double eps) {
  return length * theta * oracle::simpson([](double s) { return std::cosh(s) * std::sinh(s); }, 0.0, eps, 400);
}
double vertex_oracle(double omega, double eps) {
  return omega * oracle::simpson([](double s) { return std::pow(std::sinh(s), 2); }, 0.0, eps, 400);
}

MPoint point_along(const MPoint& p, const Vec4& unit, double d) {
  return MPoint::project(std::cosh(d) * p.coords() + std::sinh(d) * unit);
}

}  // namespace

TEST_CASE("tube volumes against radial integrals") {
  for (double eps : {0.0, 0.1, 0.5, 1.0}) {
    CAPTURE(eps);
    CHECK(tube_volume({FlatPatch{2.3}, eps}) == doctest::Approx(flat_oracle(2.3, eps)).epsilon(1e-11));
    CHECK(tube_volume({Wedge{1.3, 2.4}, eps}) == doctest::Approx(wedge_oracle(1.3, 2.4, eps)).epsilon(1e-11));
    CHECK(tube_volume({VertexCone{4 * kPi}, eps}) == doctest::Approx(vertex_oracle(4 * kPi, eps)).epsilon(1e-11));
    CHECK(tube_volume({SolidTorusCore{1.7}, eps}) ==
          doctest::Approx(wedge_oracle(1.7, 2 * kPi, eps)).epsilon(1e-11));
  }
  // The full-angle vertex is a geodesic ball.
  CHECK(tube_volume({VertexCone{4 * kPi}, 0.8}) == doctest::Approx(kPi * (std::sinh(1.6) - 1.6)));

  const double e = 0.7;
  CHECK(mean_curvature_integral({FlatPatch{2.0}, e}) == doctest::Approx(-2.0 * std::sinh(2 * e)));
  CHECK(mean_curvature_integral({Wedge{1.3, 0.9}, e}) == doctest::Approx(-1.3 * 0.9 * std::cosh(2 * e)));
  CHECK(mean_curvature_integral({VertexCone{3.0}, e}) == doctest::Approx(-3.0 * std::sinh(2 * e)));
  // d/deps area = -int H for equidistant surfaces; area = d/deps volume.
  const auto second = [](const TubeBase& b, double x) {
    const double h = 1e-3;
    return (tube_volume({b, x + h}) - 2 * tube_volume({b, x}) + tube_volume({b, x - h})) / (h * h);
  };
  for (const TubeBase& b : {TubeBase(FlatPatch{2.0}), TubeBase(Wedge{1.3, 0.9}), TubeBase(VertexCone{3.0})})
    CHECK(second(b, e) == doctest::Approx(-mean_curvature_integral({b, e})).epsilon(1e-6));
}

TEST_CASE("tube validation") {
  CHECK_THROWS_AS(validate({FlatPatch{-1.0}, 0.1}), GeometryError);
  CHECK_THROWS_AS(validate({FlatPatch{1.0}, -0.1}), GeometryError);
  CHECK_THROWS_AS(validate({Wedge{1.0, 7.0}, 0.1}), GeometryError);
  CHECK_THROWS_AS(validate({Wedge{-1.0, 1.0}, 0.1}), GeometryError);
  CHECK_THROWS_AS(validate({VertexCone{13.0}, 0.1}), GeometryError);
  CHECK_THROWS_AS(tube_volume({VertexCone{-0.5}, 0.1}), GeometryError);
  CHECK_NOTHROW(validate({Wedge{1.0, 2 * kPi}, 0.0}));
  CHECK(tube_volume({FlatPatch{1.0}, 0.0}) == 0.0);
}

TEST_CASE("solid torus and core expansion") {
  const double l = 1.7;
  for (double e : {0.1, 0.5, 1.0}) {
    CHECK(solid_torus_dual_volume(l, e) == doctest::Approx(-kPi * l * std::pow(std::cosh(e), 2)).epsilon(1e-12));
    CHECK(core_dual_volume_expansion(-kPi * l, 2 * kPi * l, 0, e) == doctest::Approx(solid_torus_dual_volume(l, e)));
    CHECK(core_mean_curvature_integral(0, 2 * kPi * l, e) ==
          doctest::Approx(mean_curvature_integral({SolidTorusCore{l}, e})));
    CHECK(core_mean_curvature_integral(-2, 1.0, e) ==
          doctest::Approx(-4 * kPi * std::sinh(2 * e) - std::cosh(2 * e)));
    // |chi| enters, not its sign.
    CHECK(core_dual_volume_expansion(1.0, 0.5, -2, e) == core_dual_volume_expansion(1.0, 0.5, 2, e));
  }
  CHECK(core_dual_volume_expansion(1.25, 3.0, 1, 0.0) == 1.25);
}

TEST_CASE("tube chart points sit at distance eps") {
  for (double eps : {0.2, 0.9}) {
    const auto p = plane_tube_point(eps, 0.4, -0.3);
    const MPoint x = MPoint::from_minkowski(Vec4(p[0], p[1], p[2], p[3]));
    CHECK(plane_signed_distance(HPlane::from_normal(Vec4(0, 0, 0, 1)), x) == doctest::Approx(eps));
    const auto q = line_tube_point(eps, 0.7, 2.0);
    const MPoint y = MPoint::from_minkowski(Vec4(q[0], q[1], q[2], q[3]));
    const MPoint foot = MPoint::from_minkowski(Vec4(std::cosh(0.7), std::sinh(0.7), 0, 0));
    CHECK(dist(y, foot) == doctest::Approx(eps));
  }
}

TEST_CASE("bent chains") {
  const double R = 0.8, w = 0.5;
  const auto chain = circular_chain(R, 0.0, 1.2, 4, w);
  CHECK(chain.planes().size() == 5);
  CHECK(chain.line_count() == 4);
  for (double a : chain.bending_angles()) CHECK(a == doctest::Approx(circle_tangent_angle(R, 0.3)));
  for (std::size_t i = 0; i < 4; ++i) {
    const double between = std::acos(minkowski_dot(chain.planes()[i].normal(), chain.planes()[i + 1].normal()));
    CHECK(chain.bending_angles()[i] == doctest::Approx(between));
  }
  CHECK(chain.bending_sum() == doctest::Approx(4 * circle_tangent_angle(R, 0.3)));
  CHECK(chain.bending_length() == doctest::Approx(chain.bending_sum() * 2 * w));
  for (std::size_t i = 0; i < chain.face_lengths().size(); ++i)
    CHECK(chain.face_areas()[i] == doctest::Approx(chain.face_lengths()[i] * 2 * std::sinh(w)));

  SUBCASE("validation") {
    CHECK_THROWS_AS(BentChain({circle_tangent_plane(R, 0.0)}, w), GeometryError);
    CHECK_THROWS_AS(BentChain({HPlane::from_normal(Vec4(0, 0, 0, 1)), circle_tangent_plane(R, 0.3)}, w),
                    GeometryError);
    CHECK_THROWS_AS(circular_chain(R, 0.3, 0.2, 2, w), GeometryError);
    // Turning back on itself.
    CHECK_THROWS_AS(
        BentChain({circle_tangent_plane(R, 0.0), circle_tangent_plane(R, 0.5), circle_tangent_plane(R, 0.1)}, w),
        GeometryError);
  }

  SUBCASE("refinement keeps the window volume and curvature") {
    const auto split = chain.pencil_split(1, 0.3);
    CHECK(split.theta1 == doctest::Approx(0.3 * chain.bending_angles()[1]));
    CHECK(split.theta1 + split.theta2 == doctest::Approx(chain.bending_angles()[1]));
    const auto measured = chain.split_with(1, split.plane);
    CHECK(measured.theta1 == doctest::Approx(split.theta1));
    const auto finer = chain.refine(1, split);
    CHECK(finer.line_count() == 5);
    CHECK(finer.bending_sum() == doctest::Approx(chain.bending_sum()));
    for (double e : {0.2, 0.6}) {
      CHECK(finer.window_tube_volume(e) == doctest::Approx(chain.window_tube_volume(e)).epsilon(1e-12));
      CHECK(finer.window_mean_curvature_integral(e) ==
            doctest::Approx(chain.window_mean_curvature_integral(e)).epsilon(1e-9));
    }
    // A null line changes nothing.
    const auto null = chain.refine(2, chain.pencil_split(2, 0.0));
    CHECK(null.line_count() == chain.line_count());
    auto bad = split;
    bad.theta1 += 1e-3;
    CHECK_THROWS_AS(chain.refine(1, bad), GeometryError);
  }

  SUBCASE("window integrals against the piece formulas") {
    for (double e : {0.25, 0.75}) {
      double area = 0.0;
      for (double a : chain.face_areas()) area += a;
      const double vol = area * (std::sinh(2 * e) / 2 + e) / 2 + chain.bending_length() * (std::cosh(2 * e) - 1) / 4;
      CHECK(chain.window_tube_volume(e) == doctest::Approx(vol).epsilon(1e-12));
      const double h = -area * std::sinh(2 * e) - chain.bending_length() * std::cosh(2 * e);
      CHECK(chain.window_mean_curvature_integral(e) == doctest::Approx(h).epsilon(1e-9));
    }
    CHECK_THROWS_AS(chain.window_mean_curvature_integral(0.0), GeometryError);
  }

  SUBCASE("distance and gradient") {
    // Straight out from a face midpoint, and out from a corner inside its normal cone.
    const auto& c = chain.corners();
    const MPoint mid = MPoint::project(c[0].coords() + c[1].coords());
    CHECK(chain.distance(point_along(mid, chain.planes()[1].normal(), 0.4)) == doctest::Approx(0.4).epsilon(1e-12));
    const Vec4 n = chain.planes()[2].normal() + 2.0 * chain.planes()[3].normal();
    const Vec4 u = n / std::sqrt(minkowski_dot(n, n));
    CHECK(chain.distance(point_along(c[2], u, 0.7)) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(chain.distance(MPoint::from_klein(Vec3::Zero())) == 0.0);
    CHECK(chain.distance_gradient(MPoint::from_klein(Vec3::Zero())) == Vec4::Zero());

    const MPoint p = MPoint::from_klein(Vec3(0.55, 0.45, 0.1));
    const Vec4 g = chain.distance_gradient(p);
    CHECK(minkowski_dot(g, g) == doctest::Approx(1.0));
    Vec4 e1, e2;
    complete_frame(p, g, e1, e2);
    for (const Vec4& v : {g, e1, e2, Vec4(0.6 * g + 0.8 * e1)}) {
      const TangentVec tv(p, v);
      const double h = 1e-5;
      const double fd = (chain.distance(exp_map(tv, h)) - chain.distance(exp_map(tv, -h))) / (2 * h);
      CHECK(fd == doctest::Approx(minkowski_dot(g, v)).epsilon(1e-7).scale(1.0));
    }
  }

  SUBCASE("refinement towards the disc") {
    auto c = circular_chain(R, 0.0, 1.2, 2, w);
    std::vector<double> dev;
    for (int level = 0; level < 4; ++level) {
      dev.push_back(gradient_deviation(c, R, 0.3, 0.0, 1.2, 41));
      c = refine_circular(c, R);
    }
    for (std::size_t i = 1; i < dev.size(); ++i) CHECK(dev[i] < dev[i - 1]);
    CHECK(dev[3] / dev[2] == doctest::Approx(0.5).epsilon(0.1));
  }

  SUBCASE("eps-surfaces are convex") {
    for (const auto& f : chain.sample_forms(0.4, 5)) {
      CHECK(f.max_principal_curvature() <= 1e-12);
      CHECK(f.max_principal_curvature() >= -std::tanh(0.4) - 1e-12);
    }
  }
}

TEST_CASE("neighborhoods of polyhedra") {
  const auto p = builtin_family("wobble-octa-v1").at(0.2);
  const auto d = neighborhood_data(p, 1e-12);
  CHECK(d.solid_angle == doctest::Approx(4 * kPi + d.face_area).epsilon(1e-12));
  CHECK(d.bending_length == doctest::Approx(p.bending_length()));
  CHECK(neighborhood_volume(d, 0.0) == doctest::Approx(d.volume));
  CHECK(neighborhood_dual_volume(d, 0.0) == doctest::Approx(dual_volume(p, 1e-12)).epsilon(1e-12));
  const double e = 0.4, h = 1e-3;
  const double second =
      (neighborhood_volume(d, e + h) - 2 * neighborhood_volume(d, e) + neighborhood_volume(d, e - h)) / (h * h);
  CHECK(second == doctest::Approx(-neighborhood_mean_curvature_integral(d, e)).epsilon(1e-6));
}

TEST_CASE("extrapolation to eps = 0") {
  // Exact on polynomials of matching degree, and equal to the Vandermonde solve.
  const std::vector<double> x{0.3, 0.2, 0.1, 0.05};
  std::vector<double> y;
  for (double v : x) y.push_back(2.0 - v + 3 * v * v - 0.5 * v * v * v);
  CHECK(richardson_limit(x, y) == doctest::Approx(2.0).epsilon(1e-13));
  y = {std::exp(0.3), std::exp(0.2), std::exp(0.1), std::exp(0.05)};
  CHECK(richardson_limit(x, y) == doctest::Approx(oracle::vandermonde_limit(x, y)).epsilon(1e-13));
  CHECK_THROWS(richardson_limit({0.1, 0.1}, {1.0, 1.0}));

  // On polyhedra the neighborhood dual volume has a cubic term of size
  // -(sum A + sum Omega)/3, so three samples leave c3 * e1 e2 e3.
  for (const char* name : {"stretch-tetra-v1", "wobble-octa-v1"}) {
    const auto p = builtin_family(name).at(0.0);
    const auto d = neighborhood_data(p, 1e-12);
    const double target = dual_volume(p, 1e-12);
    const std::vector<double> e3{0.02, 0.01, 0.005}, e4{0.04, 0.02, 0.01, 0.005};
    std::vector<double> v3, v4;
    for (double e : e3) v3.push_back(neighborhood_dual_volume(d, e));
    for (double e : e4) v4.push_back(neighborhood_dual_volume(d, e));
    const double prod = 0.02 * 0.01 * 0.005, sum = 0.035;
    const double c3 = -(d.face_area + d.solid_angle) / 3, c4 = -d.bending_length / 6;
    const double err3 = richardson_limit(e3, v3) - target;
    CHECK(err3 == doctest::Approx(c3 * prod - c4 * sum * prod).epsilon(1e-3));
    CHECK(std::abs(err3) > 1e-7);
    CHECK(std::abs(richardson_limit(e4, v4) - target) <= 1e-7);
  }
}

TEST_CASE("convexity margins") {
  const HPlane plane = HPlane::from_klein(Vec3(0.2, 0.1, 0.9).normalized(), 0.1);
  for (double t : {-0.3, 0.0, 0.4}) {
    CHECK(std::abs(convexity_margin(builtin_diffeo("identity-v1"), plane, 0.3, t)) < 1e-9);
    CHECK(std::abs(convexity_margin(builtin_diffeo("builtin:isometry-path-v1"), plane, 0.3, t)) < 1e-9);
  }
  const auto dil = builtin_diffeo("klein-dilation-v1");
  CHECK(std::abs(convexity_margin(dil, plane, 0.3, 0.0)) < 1e-9);
  const double m1 = convexity_margin(dil, plane, 0.3, 0.01), m2 = convexity_margin(dil, plane, 0.3, 0.02);
  CHECK(m1 > 0.0);
  CHECK(m2 / m1 == doctest::Approx(2.0).epsilon(0.05));
  CHECK_THROWS_AS(convexity_margin(dil, plane, 0.3, 5.0), GeometryError);
  CHECK_THROWS_AS(convexity_margin(dil, plane, 0.0, 0.1), GeometryError);
  CHECK_THROWS_AS(builtin_diffeo("twist-v9"), GeometryError);
  CHECK(builtin_diffeo_names().size() == 3);
}
