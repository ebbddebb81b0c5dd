#include "schlafli/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fmt/format.h>
#include <queue>

namespace schlafli {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// All compositions of `total` into 4 non-negative parts.
std::vector<std::array<int, 4>> compositions(int total) {
  std::vector<std::array<int, 4>> out;
  for (int a = 0; a <= total; ++a)
    for (int b = 0; a + b <= total; ++b)
      for (int c = 0; a + b + c <= total; ++c) out.push_back({a, b, c, total - a - b - c});
  return out;
}

struct Region {
  Tetrahedron tet;
  double value;
  double error;
};

class TetraCubature {
 public:
  TetraCubature() : high_(grundmann_moeller_rule(4)), low_(grundmann_moeller_rule(3)) {}

  Region evaluate(const std::function<double(const Vec3&)>& f, const Tetrahedron& t) const {
    const double vol = tetrahedron_volume(t);
    const double qh = apply(high_, f, t) * vol;
    const double ql = apply(low_, f, t) * vol;
    return Region{t, qh, std::abs(qh - ql)};
  }

 private:
  static double apply(const SimplexRule& rule, const std::function<double(const Vec3&)>& f,
                      const Tetrahedron& t) {
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
      const auto& b = rule.points[k];
      const Vec3 x = b[0] * t[0] + b[1] * t[1] + b[2] * t[2] + b[3] * t[3];
      sum += rule.weights[k] * f(x);
    }
    return sum;
  }

  SimplexRule high_;
  SimplexRule low_;
};

std::pair<Tetrahedron, Tetrahedron> bisect_longest_edge(const Tetrahedron& t) {
  int bi = 0, bj = 1;
  double best = -1.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double d = (t[i] - t[j]).squaredNorm();
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  const Vec3 mid = 0.5 * (t[bi] + t[bj]);
  Tetrahedron a = t, b = t;
  a[bj] = mid;
  b[bi] = mid;
  return {a, b};
}

}  // namespace

SimplexRule grundmann_moeller_rule(int s) {
  constexpr int n = 3;
  const int d = 2 * s + 1;
  SimplexRule rule;
  rule.degree = d;
  for (int i = 0; i <= s; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const double w = sign * std::pow(2.0, -2 * s) * std::pow(d + n - 2 * i, d) / factorial(i) /
                     factorial(d + n - i) * factorial(n);
    for (const auto& beta : compositions(s - i)) {
      std::array<double, 4> p{};
      for (int k = 0; k < 4; ++k) p[k] = (2.0 * beta[k] + 1.0) / (d + n - 2 * i);
      rule.points.push_back(p);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

double tetrahedron_volume(const Tetrahedron& t) {
  Mat3 m;
  m << t[1] - t[0], t[2] - t[0], t[3] - t[0];
  return std::abs(m.determinant()) / 6.0;
}

QuadratureResult integrate_tetrahedra(const std::function<double(const Vec3&)>& f,
                                      const std::vector<Tetrahedron>& tets, double tol,
                                      std::size_t max_regions) {
  static const TetraCubature cubature;
  std::vector<Region> regions;
  regions.reserve(tets.size() * 4);
  for (const auto& t : tets) regions.push_back(cubature.evaluate(f, t));

  auto by_error = [&](std::size_t a, std::size_t b) {
    if (regions[a].error != regions[b].error) return regions[a].error < regions[b].error;
    return a > b;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)> queue(by_error);
  double total_error = 0.0;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    queue.push(i);
    total_error += regions[i].error;
  }

  std::size_t steps = 0;
  while (total_error > tol) {
    if (regions.size() >= max_regions) {
      throw QuadratureError(fmt::format(
          "tetrahedral quadrature did not reach tol={:.3g} within {} regions (estimate {:.3g})", tol,
          max_regions, total_error));
    }
    const std::size_t i = queue.top();
    queue.pop();
    const auto [a, b] = bisect_longest_edge(regions[i].tet);
    total_error -= regions[i].error;
    regions[i] = cubature.evaluate(f, a);
    regions.push_back(cubature.evaluate(f, b));
    total_error += regions[i].error + regions.back().error;
    queue.push(i);
    queue.push(regions.size() - 1);
    // Re-sum periodically so the running estimate does not drift.
    if (++steps % 256 == 0) {
      total_error = 0.0;
      for (const auto& r : regions) total_error += r.error;
    }
  }

  QuadratureResult result;
  for (const auto& r : regions) {
    result.value += r.value;
    result.error += r.error;
  }
  result.regions = regions.size();
  return result;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol, &err);
}

double integrate_2d(const std::function<double(double, double)>& f, double u0, double u1, double v0,
                    double v1, double rel_tol) {
  auto inner = [&](double u) {
    return integrate_1d([&](double v) { return f(u, v); }, v0, v1, rel_tol);
  };
  return integrate_1d(inner, u0, u1, rel_tol);
}

}  // namespace schlafli
