#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "schlafli/polyhedra.hpp"

using namespace schlafli;

namespace {

std::vector<MPoint> klein_points(std::initializer_list<Vec3> ys) {
  std::vector<MPoint> out;
  for (const auto& y : ys) out.push_back(MPoint::from_klein(y));
  return out;
}

std::vector<MPoint> cube(double s) {
  std::vector<MPoint> out;
  for (int i = 0; i < 8; ++i)
    out.push_back(MPoint::from_klein(s * Vec3(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1)));
  return out;
}

// Interior dihedral angle at edge (i, j) of a tetrahedron, from Minkowski
// normals of the two faces not containing the opposite vertices.
double oracle_dihedral(const std::vector<MPoint>& v, int i, int j) {
  std::vector<int> rest;
  for (int k = 0; k < 4; ++k)
    if (k != i && k != j) rest.push_back(k);
  auto normal = [&](int opp) {
    Eigen::Matrix<double, 3, 4> m;
    int r = 0;
    for (int k = 0; k < 4; ++k) {
      if (k == opp) continue;
      m.row(r) = v[k].coords().transpose();
      m(r++, 0) *= -1.0;
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(m, Eigen::ComputeFullV);
    Vec4 n = svd.matrixV().col(3);
    if (minkowski_dot(n, v[opp].coords()) > 0) n = -n;
    return Vec4(n / std::sqrt(minkowski_dot(n, n)));
  };
  return kPi - std::acos(minkowski_dot(normal(rest[0]), normal(rest[1])));
}

const Edge& find_edge(const ConvexPolyhedron& p, int a, int b) {
  for (const auto& e : p.edges())
    if (e.v0 == std::min(a, b) && e.v1 == std::max(a, b)) return e;
  throw std::runtime_error("edge not found");
}

}  // namespace

TEST_CASE("hull combinatorics") {
  const auto tet = ConvexPolyhedron::hull(
      klein_points({{0.5, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.0, 0.0, 0.5}, {-0.3, -0.3, -0.3}, {0.05, 0.05, 0.05}}));
  CHECK(tet.vertices().size() == 4);
  CHECK(tet.faces().size() == 4);
  CHECK(tet.edges().size() == 6);
  CHECK(tet.euler_characteristic() == 2);
  CHECK(tet.source_indices() == std::vector<int>{0, 1, 2, 3});  // the interior point is dropped

  const auto box = ConvexPolyhedron::hull(cube(0.4));
  CHECK(box.faces().size() == 6);  // coplanar triangles merge into squares
  CHECK(box.edges().size() == 12);
  for (const auto& f : box.faces()) CHECK(f.cycle.size() == 4);
  for (const auto& e : box.edges()) {
    CHECK(e.v0 < e.v1);
    CHECK(e.exterior_angle > 0.0);
    CHECK(e.exterior_angle < kPi);
  }
  for (const auto& f : box.combinatorics().faces) CHECK(f.front() == *std::min_element(f.begin(), f.end()));

  CHECK_THROWS_AS(ConvexPolyhedron::hull(klein_points({{0.1, 0, 0}, {0, 0.1, 0}, {0, 0, 0.1}})), GeometryError);
  CHECK_THROWS_AS(
      ConvexPolyhedron::hull(klein_points({{0.1, 0, 0}, {0, 0.1, 0}, {0.2, 0.3, 0}, {-0.1, 0.2, 0}})), GeometryError);
}

TEST_CASE("hull containment fuzz") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  std::exponential_distribution<double> w(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<MPoint> pts;
    while (pts.size() < 10) {
      const Vec3 y(u(rng), u(rng), u(rng));
      if (y.norm() < 0.8) pts.push_back(MPoint::from_klein(y));
    }
    const auto p = ConvexPolyhedron::hull(pts);
    for (const auto& x : pts) CHECK(p.contains(x));
    for (int k = 0; k < 20; ++k) {
      Vec3 y = Vec3::Zero();
      double total = 0.0;
      for (const auto& v : p.vertices()) {
        const double wk = w(rng);
        y += wk * v.klein();
        total += wk;
      }
      CHECK(p.contains(MPoint::from_klein(y / total)));
    }
    // Radially beyond the outermost vertex is outside.
    Vec3 far = Vec3::Zero();
    for (const auto& v : p.vertices())
      if (v.klein().norm() > far.norm()) far = v.klein();
    CHECK_FALSE(p.contains(MPoint::from_klein(far + 0.5 * (1.0 - far.norm()) * far.normalized())));
    // Faces are planar and outward.
    for (const auto& f : p.faces())
      for (int idx : f.cycle) CHECK(std::abs(minkowski_dot(p.vertices()[idx].coords(), f.plane.normal())) < 1e-10);
    CHECK(p.euler_characteristic() == 2);
  }
}

TEST_CASE("orthoscheme volume matches the Lobachevsky formula") {
  for (const Vec3& abc : {Vec3(0.5, 0.4, 0.3), Vec3(0.3, 0.6, 0.2), Vec3(0.7, 0.2, 0.5)}) {
    const auto pts = klein_points({{0, 0, 0}, {abc[0], 0, 0}, {abc[0], abc[1], 0}, abc});
    const auto p = ConvexPolyhedron::hull(pts);
    // Three right angles, three essential ones.
    for (auto [i, j] : {std::pair{0, 2}, std::pair{1, 2}, std::pair{1, 3}})
      CHECK(oracle_dihedral(pts, i, j) == doctest::Approx(kPi / 2).epsilon(1e-12));
    const double a1 = oracle_dihedral(pts, 0, 1), a2 = oracle_dihedral(pts, 0, 3), a3 = oracle_dihedral(pts, 2, 3);
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 3}, std::pair{2, 3}, std::pair{0, 2}})
      CHECK(find_edge(p, i, j).interior_angle() == doctest::Approx(oracle_dihedral(pts, i, j)).epsilon(1e-12));
    const auto r = volume_with_error(p, 1e-12);
    CHECK(r.value == doctest::Approx(oracle::orthoscheme_volume(a1, a2, a3)).epsilon(1e-10));
    CHECK(r.error <= 1e-12);
  }
}

TEST_CASE("volume invariants") {
  const auto pts = klein_points({{0.55, 0.05, -0.1}, {-0.25, 0.5, 0.05}, {-0.2, -0.45, 0.15}, {0.05, -0.05, 0.6}});
  const auto p = ConvexPolyhedron::hull(pts);
  Mat2c a;
  a << Complex(1.1, 0.2), Complex(0.3, -0.4), Complex(-0.2, 0.1), Complex(0.8, 0.3);
  a /= std::sqrt(a.determinant());
  const auto q = p.transformed(Isometry::from_sl2c(a));
  CHECK(volume(q, 1e-12) == doctest::Approx(volume(p, 1e-12)).epsilon(1e-10));
  CHECK(q.bending_length() == doctest::Approx(p.bending_length()).epsilon(1e-10));
  CHECK(q.combinatorics() == p.combinatorics());

  CHECK(dual_volume(p) == doctest::Approx(volume(p) - 0.5 * p.bending_length()));
  CHECK(w_volume(p) == doctest::Approx(0.5 * (volume(p) + dual_volume(p))));
  CHECK_THROWS_AS(volume(p, 1e-14), GeometryError);

  // Small polyhedra are nearly Euclidean.
  const auto tiny = ConvexPolyhedron::hull(cube(1e-3));
  CHECK(volume(tiny) == doctest::Approx(8e-9).epsilon(1e-5));

  // Gauss-Bonnet for the angle data.
  double area = 0.0, omega = 0.0;
  for (double x : p.face_areas()) area += x;
  for (double x : p.normal_cone_solid_angles()) omega += x;
  CHECK(omega == doctest::Approx(4.0 * kPi + area).epsilon(1e-13));
  for (double x : p.face_areas()) CHECK(x > 0.0);
}

TEST_CASE("klein tetrahedra tile the hull") {
  const auto box = ConvexPolyhedron::hull(cube(0.4));
  double total = 0.0;
  for (const auto& t : box.klein_tetrahedra()) total += tetrahedron_volume(t);
  CHECK(total == doctest::Approx(0.8 * 0.8 * 0.8).epsilon(1e-13));
}

TEST_CASE("built-in families") {
  const auto names = builtin_family_names();
  CHECK(names.size() == 6);
  for (const auto& n : names) {
    const auto f = builtin_family("builtin:" + n);
    CHECK(f.name() == n);
    CHECK(f.t_min() == -1.0);
    CHECK(f.t_max() == 1.0);
    CHECK(f.at(0.3).combinatorics() == f.combinatorics());
  }
  CHECK_THROWS_AS(builtin_family("no-such-family"), GeometryError);
  CHECK_THROWS_AS(builtin_family("stretch-tetra-v1", {{"bogus", 1.0}}), GeometryError);
  CHECK_THROWS_AS(builtin_family("stretch-tetra-v1").vertices(1.5), GeometryError);

  // Rigid motions leave volume unchanged.
  const auto rigid = builtin_family("rigid-tetra-v1");
  CHECK(volume(rigid.at(-0.7), 1e-12) == doctest::Approx(volume(rigid.at(0.8), 1e-12)).epsilon(1e-10));
}

TEST_CASE("volume change integrates the Schlafli sum") {
  // V(t1) - V(t0) = int 1/2 sum l dtheta/dt, with the right side built from
  // edge data only.
  const auto f = builtin_family("stretch-tetra-v1");
  const double t0 = -0.5, t1 = 0.5;
  const double rhs = oracle::simpson(
      [&](double t) {
        double s = 0.0;
        for (const auto& e : edge_data_derivative(f, t, 1e-3, 4)) s += 0.5 * e.length * e.d_angle;
        return s;
      },
      t0, t1, 40);
  CHECK(volume(f.at(t1), 1e-12) - volume(f.at(t0), 1e-12) == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("sampled families interpolate") {
  const auto f = builtin_family("wobble-tetra-v1");
  std::vector<double> times;
  std::vector<std::vector<MPoint>> verts;
  for (int i = 0; i <= 40; ++i) {
    times.push_back(-1.0 + 0.05 * i);
    verts.push_back(f.vertices(times.back()));
  }
  const auto g = PolyhedronFamily::from_samples(times, verts);
  for (double t : {-0.83, 0.0, 0.412}) {
    const auto a = f.vertices(t), b = g.vertices(t);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i].klein() - b[i].klein()).norm() < 1e-7);
  }
  CHECK_THROWS_AS(PolyhedronFamily::from_samples({0.0, 0.0, 1.0}, {verts[0], verts[1], verts[2]}), GeometryError);
}

TEST_CASE("combinatorial change inside a stencil is reported") {
  // The apex dips through the base face only for t near 0.125, between the
  // validation samples.
  const auto path = [](double t) {
    const double lift = 0.02 - 0.04 * std::exp(-std::pow((t - 0.125) / 0.02, 2));
    std::vector<MPoint> v = klein_points(
        {{0.4, 0.0, 0.0}, {-0.2, 0.35, 0.0}, {-0.2, -0.35, 0.0}, {0.0, 0.0, -0.4}, {0.0, 0.0, lift}});
    return v;
  };
  // A square-based double pyramid would merge; use a fifth point above the
  // triangle z = 0 so the hull has 5 vertices when lift > 0.
  const PolyhedronFamily f("dipping-apex", path, -1.0, 1.0);
  CHECK_NOTHROW(f.at(0.5));
  CHECK_THROWS_AS(f.at(0.125), CombinatorialChangeError);
  CHECK_THROWS_AS(edge_data_derivative(f, 0.125, 1e-3), CombinatorialChangeError);
}

TEST_CASE("central differences") {
  const auto cubic = [](double t) { return t * t * t - 2 * t; };
  CHECK(central_difference(cubic, 0.5, 1e-2, 2) == doctest::Approx(3 * 0.25 - 2 + 1e-4).epsilon(1e-12));
  const auto quartic = [](double t) { return t * t * t * t; };
  CHECK(central_difference(quartic, 0.5, 1e-2, 4) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS(central_difference(cubic, 0.0, 1e-2, 3));
}
