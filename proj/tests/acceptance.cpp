// Acceptance run: one PASS/FAIL line per criterion. With --only N a single
// criterion runs. Exit status is nonzero when any criterion that ran failed.

#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "schlafli/laminations.hpp"
#include "schlafli/quadrature.hpp"
#include "schlafli/tubes.hpp"
#include "schlafli/variation.hpp"

using namespace schlafli;

namespace {

struct Outcome {
  bool pass = false;
  std::string metrics;
};

struct Criterion {
  int id;
  std::string description;
  double budget_s;
  std::function<Outcome()> run;
};

const std::vector<std::string> kTetraFamilies{"stretch-tetra-v1", "scale-tetra-v1", "wobble-tetra-v1",
                                              "hinge-tetra-v1"};
const std::vector<double> kT{-0.5, -0.25, 0.0, 0.25, 0.5};

Outcome schlafli_criterion() {
  double worst = 0.0;
  int checked = 0;
  for (const auto& name : kTetraFamilies) {
    const auto f = builtin_family(name);
    for (double t : kT) {
      worst = std::max(worst, schlafli_check(f, t).residual);
      ++checked;
    }
  }
  // Truncation-dominated families must show the second-order ratio.
  double lo = 1e300, hi = 0.0;
  int ratios = 0;
  for (const auto& name : kTetraFamilies) {
    const auto f = builtin_family(name);
    const double coarse = schlafli_check(f, 0.25, {1e-2, 2}).residual;
    const double fine = schlafli_check(f, 0.25, {5e-3, 2}).residual;
    if (coarse < 1e-9) continue;
    lo = std::min(lo, coarse / fine);
    hi = std::max(hi, coarse / fine);
    ++ratios;
  }
  const bool pass = worst <= 1e-6 && ratios >= 1 && lo >= 3.0 && hi <= 5.0;
  return {pass, fmt::format("{} checks, max residual {:.3g} (tol 1e-6); h-halving ratio in [{:.3f}, {:.3f}] over {} "
                            "families (need [3, 5])",
                            checked, worst, lo, hi, ratios)};
}

Outcome dual_schlafli_criterion() {
  double worst = 0.0;
  int checked = 0;
  for (const auto& name : kTetraFamilies) {
    const auto f = builtin_family(name);
    for (double t : kT) {
      worst = std::max(worst, dual_schlafli_check(f, t).residual);
      ++checked;
    }
  }
  return {worst <= 1e-6, fmt::format("{} checks, max residual {:.3g} (tol 1e-6)", checked, worst)};
}

Outcome core_criterion() {
  const double l = 1.7;
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double eps = 0.1 * k;
    const double assembled = solid_torus_dual_volume(l, eps);
    const double expansion = core_dual_volume_expansion(-kPi * l, 2.0 * kPi * l, 0, eps);
    const double closed = -kPi * l * std::pow(std::cosh(eps), 2);
    worst = std::max({worst, std::abs(assembled - expansion), std::abs(assembled - closed)});
  }
  return {worst <= 1e-9, fmt::format("eps 0.1..1.0, length {}, max deviation {:.3g} (tol 1e-9)", l, worst)};
}

Outcome wedge_criterion() {
  const double l = 1.3;
  double worst = 0.0;
  for (double theta : {0.3, 0.9, 1.5, 2.4, 3.0})
    for (double eps : {0.1, 0.25, 0.5, 0.75, 1.0}) {
      // Box [0, l] x [0, theta] x [0, eps] as six tetrahedra along the diagonal.
      const Vec3 d(l, theta, eps);
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
      const double quad =
          integrate_tetrahedra([](const Vec3& x) { return std::cosh(x[2]) * std::sinh(x[2]); }, box, 1e-12).value;
      const double closed = theta * l * (std::cosh(2 * eps) - 1) / 4;
      worst = std::max({worst, std::abs(tube_volume({Wedge{l, theta}, eps}) - quad), std::abs(closed - quad)});
    }
  return {worst <= 1e-7, fmt::format("5x5 (theta, eps) grid, max deviation {:.3g} (tol 1e-7)", worst)};
}

Outcome smooth_criterion() {
  double worst = 0.0;
  int n = 0;
  for (double r = 0.1; r <= 1.5 + 1e-12; r += 0.1, ++n) {
    const SmoothFamilySpec sphere{SmoothFamilySpec::Kind::GeodesicSphere, r, 1.0};
    const auto rep = smooth_dual_variation_check(sphere, 0.0);
    const double closed = -4.0 * kPi * std::pow(std::cosh(r), 2);
    worst = std::max({worst, rep.residual, std::abs(rep.rhs - closed), std::abs(rep.lhs - closed)});
  }
  return {worst <= 1e-7, fmt::format("{} radii in [0.1, 1.5], max deviation {:.3g} (tol 1e-7)", n, worst)};
}

Outcome monotonicity_criterion() {
  const auto r = monotonicity_fuzz(100, 0);
  return {r.pairs == 100 && r.violations == 0,
          fmt::format("{} pairs, seed 0, {} violations, smallest margin {:.4g}", r.pairs, r.violations,
                      r.worst_margin)};
}

Outcome length_criterion() {
  double worst = 0.0;
  int checked = 0;
  for (const auto& name : builtin_rep_path_names()) {
    const auto path = builtin_rep_path(name);
    const auto lam = builtin_path_lamination(name);
    for (double t : kT) {
      if (t - 1e-3 < path.t_min || t + 1e-3 > path.t_max) continue;
      worst = std::max(worst, length_derivative(path, lam, t).residual);
      ++checked;
    }
  }
  const auto warped = builtin_deformation("warped-solid-torus-v1");
  validate(warped);
  const double l0 = warped.s1 - warped.s0;
  const double metric = std::abs(first_variation_integral(warped) - l0);
  return {worst <= 1e-6 && metric <= 1e-9,
          fmt::format("{} path checks, max residual {:.3g} (tol 1e-6); warped deviation from l0 = {} is {:.3g} "
                      "(tol 1e-9)",
                      checked, worst, l0, metric)};
}

Outcome margin_criterion() {
  const auto family = builtin_diffeo("klein-dilation-v1");
  const HPlane plane = HPlane::from_klein(Vec3(0.2, 0.1, 0.9).normalized(), 0.1);
  const double eps = 0.3;
  const std::vector<double> ts{-0.02, -0.01, -0.005, 0.005, 0.01, 0.02};
  std::vector<double> m;
  double d = 0.0;
  for (double t : ts) {
    m.push_back(convexity_margin(family, plane, eps, t));
    d = std::max(d, m.back() / std::abs(t));
  }
  double excess = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) excess = std::max(excess, m[i] - d * std::abs(ts[i]));
  // The fitted constant must describe every t, not just the largest ratio.
  const double small = std::max(m[2] / 0.005, m[3] / 0.005), large = std::max(m[0] / 0.02, m[5] / 0.02);
  const double spread = std::abs(small - large) / std::max(small, large);
  const double zero = convexity_margin(family, plane, eps, 0.0);
  const bool pass = excess <= 0.0 && spread <= 0.05 && zero <= 1e-9;
  return {pass, fmt::format("D = {:.5f}, max excess {:.3g}, ratio spread {:.4f} (tol 0.05), margin(0) = {:.3g} "
                            "(tol 1e-9)",
                            d, excess, spread, zero)};
}

Outcome limit_criterion() {
  const std::vector<double> eps{0.02, 0.01, 0.005};
  double worst = 0.0;
  std::string detail;
  for (const char* name : {"stretch-tetra-v1", "wobble-octa-v1"}) {
    const auto p = builtin_family(name).at(0.0);
    const auto data = neighborhood_data(p, 1e-12);
    std::vector<double> v;
    for (double e : eps) v.push_back(neighborhood_dual_volume(data, e));
    const double err = std::abs(richardson_limit(eps, v) - dual_volume(p, 1e-12));
    // Leading error of three-point extrapolation: the cubic coefficient
    // -(sum A + sum Omega) / 3 times e1 e2 e3.
    const double predicted = (data.face_area + data.solid_angle) / 3 * eps[0] * eps[1] * eps[2];
    worst = std::max(worst, err);
    detail += fmt::format("{} error {:.3g} (cubic term {:.3g}); ", name, err, predicted);
  }
  return {worst <= 1e-7, detail + "tol 1e-7"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      fmt::print(stderr, "usage: {} [--only N]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "Schlafli formula on tetrahedron families", 20.0, schlafli_criterion},
      {2, "dual Schlafli formula on tetrahedron families", 20.0, dual_schlafli_criterion},
      {3, "solid-torus dual volume vs core expansion", 1.0, core_criterion},
      {4, "wedge tube volume vs 3D quadrature", 10.0, wedge_criterion},
      {5, "smooth dual variation on geodesic spheres", 5.0, smooth_criterion},
      {6, "dual volume monotonicity fuzz", 60.0, monotonicity_criterion},
      {7, "length first variation", 5.0, length_criterion},
      {8, "convexity margin is linear in t", 10.0, margin_criterion},
      {9, "eps -> 0 limit of neighborhood dual volume", 10.0, limit_criterion},
  };

  bool all = true;
  int ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      out.pass = false;
      out.metrics += fmt::format("; over the {} s budget", c.budget_s);
    }
    all = all && out.pass;
    fmt::print("C{} {} {}: {} ({:.2f} s)\n", c.id, out.pass ? "PASS" : "FAIL", c.description, out.metrics, secs);
    std::fflush(stdout);
  }
  if (ran == 0) {
    fmt::print(stderr, "no criterion {}\n", only);
    return 2;
  }
  return all ? 0 : 1;
}
