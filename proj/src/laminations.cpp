#include "schlafli/laminations.hpp"

#include <cctype>
#include <cmath>
#include <fmt/format.h>

#include "schlafli/quadrature.hpp"

namespace schlafli {

namespace {

Mat2c inverse_sl2(const Mat2c& a) {
  Mat2c inv;
  inv << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
  return inv;
}

using Params = std::map<std::string, double>;

double param(const Params& given, const Params& defaults, std::string_view family, const std::string& key) {
  for (const auto& [k, v] : given) {
    if (!defaults.count(k)) throw GeometryError(fmt::format("'{}' has no parameter '{}'", family, k));
  }
  const auto it = given.find(key);
  return it != given.end() ? it->second : defaults.at(key);
}

Mat2c diag_lox(Complex lambda) {
  Mat2c a = Mat2c::Zero();
  a(0, 0) = std::exp(0.5 * lambda);
  a(1, 1) = std::exp(-0.5 * lambda);
  return a;
}

// A second loxodromic generator whose axis is far from the first one.
Mat2c second_generator() {
  Mat2c c;
  c << Complex(1.0, 0.0), Complex(0.6, 0.2), Complex(0.4, -0.3), Complex(1.0, 0.0);
  const Mat2c conj = c / std::sqrt(c.determinant());
  return conj * diag_lox(Complex(1.4, -0.35)) * inverse_sl2(conj);
}

Mat2c first_generator() { return diag_lox(Complex(1.1, 0.4)); }

}  // namespace

Rep::Rep(std::vector<Mat2c> generators) : generators_(std::move(generators)) {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (std::abs(generators_[i].determinant() - 1.0) > 1e-10) {
      throw GeometryError(fmt::format("generator {} does not have unit determinant", i));
    }
  }
}

Word parse_word(std::string_view text) {
  Word w;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (!std::isalpha(static_cast<unsigned char>(ch))) {
      throw GeometryError(fmt::format("word '{}' contains '{}'", text, ch));
    }
    const bool inverse = std::isupper(static_cast<unsigned char>(ch));
    w.push_back({std::tolower(static_cast<unsigned char>(ch)) - 'a', inverse});
  }
  if (w.empty()) throw GeometryError("empty word");
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Letter& x = w[i];
    const Letter& y = w[(i + 1) % w.size()];
    if (x.generator == y.generator && x.inverse != y.inverse) {
      throw GeometryError(fmt::format("word '{}' is not cyclically reduced", text));
    }
  }
  return w;
}

std::string format_word(const Word& word) {
  std::string s;
  for (const auto& l : word) {
    const char c = static_cast<char>('a' + l.generator);
    s.push_back(l.inverse ? static_cast<char>(std::toupper(c)) : c);
  }
  return s;
}

Word rotate_word(const Word& word, std::size_t k) {
  Word out;
  for (std::size_t i = 0; i < word.size(); ++i) out.push_back(word[(i + k) % word.size()]);
  return out;
}

Mat2c evaluate(const Rep& rep, const Word& word) {
  Mat2c m = Mat2c::Identity();
  for (const auto& l : word) {
    if (l.generator < 0 || static_cast<std::size_t>(l.generator) >= rep.size()) {
      throw GeometryError(fmt::format("word uses generator {} but the rep has {}", l.generator, rep.size()));
    }
    const Mat2c& g = rep.generators()[l.generator];
    m = m * (l.inverse ? inverse_sl2(g) : g);
  }
  return m;
}

Complex complex_length(const Mat2c& a) {
  Complex tr = a.trace();
  if (tr.real() < 0.0 || (tr.real() == 0.0 && tr.imag() < 0.0)) tr = -tr;
  Complex lambda = 2.0 * std::acosh(0.5 * tr);
  if (!(lambda.real() > 1e-12)) throw NonLoxodromicError("element is not loxodromic", 0);
  if (lambda.imag() <= -kPi) lambda += Complex(0.0, 2.0 * kPi);
  if (lambda.imag() > kPi) lambda -= Complex(0.0, 2.0 * kPi);
  return lambda;
}

double real_length(const Mat2c& a) { return complex_length(a).real(); }

RationalLamination::RationalLamination(std::vector<WeightedCurve> curves) : curves_(std::move(curves)) {
  for (std::size_t i = 0; i < curves_.size(); ++i) {
    if (!(curves_[i].weight > 0.0)) throw GeometryError(fmt::format("curve {} has non-positive weight", i));
    if (curves_[i].word.empty()) throw GeometryError(fmt::format("curve {} has an empty word", i));
  }
}

RationalLamination RationalLamination::parse(const std::vector<std::pair<std::string, double>>& curves) {
  std::vector<WeightedCurve> out;
  for (const auto& [w, u] : curves) out.push_back({parse_word(w), u});
  return RationalLamination(std::move(out));
}

RationalLamination RationalLamination::united(const RationalLamination& other) const {
  auto c = curves_;
  c.insert(c.end(), other.curves_.begin(), other.curves_.end());
  return RationalLamination(std::move(c));
}

RationalLamination RationalLamination::scaled(double factor) const {
  auto c = curves_;
  for (auto& x : c) x.weight *= factor;
  return RationalLamination(std::move(c));
}

double lamination_length(const Rep& rep, const RationalLamination& lamination) {
  double total = 0.0;
  const auto& curves = lamination.curves();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    try {
      total += curves[i].weight * real_length(evaluate(rep, curves[i].word));
    } catch (const NonLoxodromicError&) {
      throw NonLoxodromicError(
          fmt::format("curve {} ('{}') is not loxodromic", i, format_word(curves[i].word)), i);
    }
  }
  return total;
}

// ---------------------------------------------------------------- paths

Rep RepPath::at(double t) const {
  if (t < t_min - 1e-12 || t > t_max + 1e-12) {
    throw GeometryError(fmt::format("path '{}': t = {} outside [{}, {}]", name, t, t_min, t_max));
  }
  return Rep(generators(t));
}

std::vector<Mat2c> RepPath::generator_derivatives(double t) const {
  if (derivatives) return derivatives(t);
  const double h = 1e-3;
  const auto a = generators(t + 2 * h), b = generators(t + h), c = generators(t - h), d = generators(t - 2 * h);
  std::vector<Mat2c> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back((-a[i] + 8.0 * b[i] - 8.0 * c[i] + d[i]) / (12.0 * h));
  return out;
}

std::vector<std::string> builtin_rep_path_names() { return {"constant-v1", "loxodromic-v1", "twist-v1", "bending-v1"}; }

RepPath builtin_rep_path(std::string_view name, const std::map<std::string, double>& params) {
  if (name.starts_with("builtin:")) name.remove_prefix(8);
  RepPath p;
  p.name = std::string(name);
  if (name == "constant-v1") {
    if (!params.empty()) throw GeometryError("'constant-v1' takes no parameters");
    p.generators = [](double) { return std::vector<Mat2c>{first_generator(), second_generator()}; };
    p.derivatives = [](double) { return std::vector<Mat2c>{Mat2c::Zero(), Mat2c::Zero()}; };
    return p;
  }
  if (name == "loxodromic-v1") {
    const double rate = param(params, {{"rate", 1.0}}, name, "rate");
    // diag(e^{1 + rate t}, e^{-(1 + rate t)}): real length 2 (1 + rate t).
    p.t_min = -0.9;
    p.t_max = 0.9;
    p.generators = [rate](double t) { return std::vector<Mat2c>{diag_lox(Complex(2.0 * (1.0 + rate * t), 0.0))}; };
    p.derivatives = [rate](double t) {
      const Mat2c a = diag_lox(Complex(2.0 * (1.0 + rate * t), 0.0));
      Mat2c d = Mat2c::Zero();
      d(0, 0) = rate * a(0, 0);
      d(1, 1) = -rate * a(1, 1);
      return std::vector<Mat2c>{d};
    };
    return p;
  }
  if (name == "twist-v1" || name == "bending-v1") {
    // b(t) = b exp(t X) with X diagonal, i.e. commuting with a: a shear along
    // the axis of a (real X) or a bend about it (imaginary X).
    const double rate = param(params, {{"rate", 1.0}}, name, "rate");
    const Complex k = name == "twist-v1" ? Complex(0.5 * rate, 0.0) : Complex(0.0, 0.5 * rate);
    Mat2c x = Mat2c::Zero();
    x(0, 0) = k;
    x(1, 1) = -k;
    p.generators = [x](double t) {
      return std::vector<Mat2c>{first_generator(), second_generator() * sl2c_exp(t * x)};
    };
    p.derivatives = [x](double t) {
      return std::vector<Mat2c>{Mat2c::Zero(), Mat2c(second_generator() * sl2c_exp(t * x) * x)};
    };
    return p;
  }
  throw GeometryError(fmt::format("unknown built-in rep path '{}'", name));
}

RationalLamination builtin_path_lamination(std::string_view name) {
  if (name.starts_with("builtin:")) name.remove_prefix(8);
  if (name == "loxodromic-v1") return RationalLamination::parse({{"a", 1.0}});
  return RationalLamination::parse({{"a", 1.0}, {"ab", 0.5}, {"aB", 2.0}, {"abAB", 0.25}});
}

LengthDerivative length_derivative(const RepPath& path, const RationalLamination& lamination, double t, double h) {
  if (!(h > 0.0)) throw GeometryError("finite-difference step must be positive");
  const Rep rm = path.at(t - h), r0 = path.at(t), rp = path.at(t + h);
  LengthDerivative out;
  out.fd = (lamination_length(rp, lamination) - lamination_length(rm, lamination)) / (2.0 * h);

  const auto& gens = r0.generators();
  const auto dgens = path.generator_derivatives(t);
  const auto& curves = lamination.curves();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const Word& w = curves[i].word;
    const Complex lm = complex_length(evaluate(rm, w));
    const Complex lp = complex_length(evaluate(rp, w));
    const Complex l0 = complex_length(evaluate(r0, w));
    if (std::abs(lp.imag() - l0.imag()) > kPi || std::abs(l0.imag() - lm.imag()) > kPi) {
      throw BranchCrossingError(
          fmt::format("curve {} ('{}'): complex length crosses the branch cut near t = {}", i, format_word(w), t));
    }
    // tau' = sum over letters of the product with that letter differentiated;
    // (g^{-1})' = -g^{-1} g' g^{-1}.
    Complex dtau(0.0, 0.0);
    for (std::size_t k = 0; k < w.size(); ++k) {
      Mat2c m = Mat2c::Identity();
      for (std::size_t j = 0; j < w.size(); ++j) {
        const Letter& l = w[j];
        const Mat2c& g = gens.at(l.generator);
        if (j != k) {
          m = m * (l.inverse ? inverse_sl2(g) : g);
        } else {
          const Mat2c gi = inverse_sl2(g);
          m = m * (l.inverse ? Mat2c(-gi * dgens.at(l.generator) * gi) : dgens.at(l.generator));
        }
      }
      dtau += m.trace();
    }
    Complex tau = evaluate(r0, w).trace();
    if (tau.real() < 0.0 || (tau.real() == 0.0 && tau.imag() < 0.0)) dtau = -dtau;
    out.analytic += curves[i].weight * (dtau / std::sinh(0.5 * l0)).real();
  }
  out.residual = std::abs(out.fd - out.analytic);
  return out;
}

// ---------------------------------------------------------------- metric deformations

namespace {

// H^3 near a geodesic in coordinates (s, x, y), where (x, y) are Cartesian
// coordinates on the normal disc: cosh^2 r ds^2 + dr^2 + sinh^2 r dtheta^2.
Mat3 warped_metric(const Vec3& p) {
  const double r2 = p[1] * p[1] + p[2] * p[2];
  const double r = std::sqrt(r2);
  const double ch = std::cosh(r);
  // sinh^2 r / r^2, with its series near the axis.
  const double q = r < 1e-4 ? 1.0 + r2 / 3.0 : std::sinh(r) * std::sinh(r) / r2;
  Mat3 g = Mat3::Zero();
  g(0, 0) = ch * ch;
  Eigen::Matrix2d radial = Eigen::Matrix2d::Zero();
  if (r2 > 0.0) {
    const Eigen::Vector2d e(p[1] / r, p[2] / r);
    radial = e * e.transpose();
  }
  g.block<2, 2>(1, 1) = radial + q * (Eigen::Matrix2d::Identity() - radial);
  return g;
}

Mat3 klein_metric(const Vec3& y) {
  const double q = 1.0 - y.squaredNorm();
  return Mat3::Identity() / q + y * y.transpose() / (q * q);
}

// Derivative of the Klein metric at y in direction v.
Mat3 klein_metric_derivative(const Vec3& y, const Vec3& v) {
  const double q = 1.0 - y.squaredNorm();
  const double dq = -2.0 * y.dot(v);
  return -dq / (q * q) * Mat3::Identity() + (v * y.transpose() + y * v.transpose()) / (q * q) -
         2.0 * dq / (q * q * q) * y * y.transpose();
}

Mat3 shear_matrix() {
  Mat3 s;
  s << 0.0, 0.3, 0.0, 0.0, 0.0, -0.1, 0.2, 0.0, 0.0;
  return s;
}

}  // namespace

std::vector<std::string> builtin_deformation_names() {
  return {"warped-solid-torus-v1", "conformal-v1", "zero-v1", "klein-shear-v1"};
}

MetricDeformation builtin_deformation(std::string_view name, const std::map<std::string, double>& params) {
  if (name.starts_with("builtin:")) name.remove_prefix(8);
  MetricDeformation d;
  d.name = std::string(name);
  if (name == "warped-solid-torus-v1" || name == "conformal-v1" || name == "zero-v1") {
    const double len = param(params, {{"length", 1.5}}, name, "length");
    d.metric = warped_metric;
    d.curve = [](double s) { return Vec3(s, 0.0, 0.0); };
    d.velocity = [](double) { return Vec3(1.0, 0.0, 0.0); };
    d.s1 = len;
    if (name == "warped-solid-torus-v1") {
      // g_t = (1 + t)^2 cosh^2 r ds^2 + (transverse part).
      d.variation = [](const Vec3& p) {
        Mat3 v = Mat3::Zero();
        v(0, 0) = 2.0 * warped_metric(p)(0, 0);
        return v;
      };
      d.curve_length = [len](double t) { return (1.0 + t) * len; };
    } else if (name == "conformal-v1") {
      // g_t = (1 + 2 t sin s) g_0.
      d.variation = [](const Vec3& p) { return Mat3(2.0 * std::sin(p[0]) * warped_metric(p)); };
      d.curve_length = [len](double t) {
        return integrate_1d([t](double s) { return std::sqrt(1.0 + 2.0 * t * std::sin(s)); }, 0.0, len);
      };
    } else {
      d.variation = [](const Vec3&) { return Mat3::Zero(); };
      d.curve_length = [len](double) { return len; };
    }
    return d;
  }
  if (name == "klein-shear-v1") {
    const double len = param(params, {{"length", 1.2}}, name, "length");
    // g_t is the pull-back of the Klein metric by y -> y + t S y. The curve
    // is a unit-speed geodesic of g_0 through a point off the origin.
    const MPoint p = MPoint::from_klein(Vec3(0.1, -0.2, 0.15));
    const Vec4 u = TangentVec::project(p, Vec4(0.0, 0.6, 0.3, -0.5)).vec();
    const Vec4 dir = u / std::sqrt(minkowski_dot(u, u));
    const HGeodesic g(p, dir);
    d.metric = klein_metric;
    d.variation = [](const Vec3& y) {
      const Mat3 s = shear_matrix();
      const Mat3 g0 = klein_metric(y);
      return Mat3(s.transpose() * g0 + g0 * s + klein_metric_derivative(y, s * y));
    };
    d.curve = [g](double s) { return g.point_at(s).klein(); };
    d.velocity = [g](double s) {
      const Vec4 x = g.point_at(s).coords();
      const Vec4 v = g.tangent_at(s);
      return Vec3((v.tail<3>() * x[0] - x.tail<3>() * v[0]) / (x[0] * x[0]));
    };
    d.s1 = len;
    d.curve_length = [c = d.curve, v = d.velocity, len](double t) {
      const Mat3 j = Mat3::Identity() + t * shear_matrix();
      return integrate_1d(
          [&](double s) {
            const Vec3 w = j * v(s);
            return std::sqrt(w.dot(klein_metric(j * c(s)) * w));
          },
          0.0, len);
    };
    return d;
  }
  throw GeometryError(fmt::format("unknown built-in metric deformation '{}'", name));
}

double geodesic_residual(const MetricDeformation& d, int n) {
  const double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const double s = d.s0 + (d.s1 - d.s0) * k / std::max(1, n - 1);
    const Vec3 x = d.curve(s);
    const Vec3 v = d.velocity(s);
    const Vec3 acc = (d.velocity(s + h) - d.velocity(s - h)) / (2.0 * h);
    std::array<Mat3, 3> dg;
    for (int l = 0; l < 3; ++l) {
      const Vec3 e = h * Vec3::Unit(l);
      dg[l] = (d.metric(x + e) - d.metric(x - e)) / (2.0 * h);
    }
    const Mat3 ginv = d.metric(x).inverse();
    // Gamma^k_ij v^i v^j = g^{kl} (d_i g_lj - 1/2 d_l g_ij) v^i v^j.
    Vec3 lowered = Vec3::Zero();
    for (int l = 0; l < 3; ++l) {
      double sum = 0.0;
      for (int i = 0; i < 3; ++i) sum += v[i] * (dg[i].row(l).dot(v));
      lowered[l] = sum - 0.5 * v.dot(dg[l] * v);
    }
    worst = std::max(worst, (acc + ginv * lowered).cwiseAbs().maxCoeff());
  }
  return worst;
}

void validate(const MetricDeformation& d) {
  for (int k = 0; k <= 16; ++k) {
    const double s = d.s0 + (d.s1 - d.s0) * k / 16.0;
    Eigen::SelfAdjointEigenSolver<Mat3> es(d.metric(d.curve(s)));
    if (!(es.eigenvalues().minCoeff() > 0.0)) throw GeometryError("g0 is not positive definite along the curve");
  }
  const double r = geodesic_residual(d);
  if (r > 1e-8) throw GeometryError(fmt::format("curve is not a g0-geodesic (residual {:.3g})", r));
}

double first_variation_integral(const MetricDeformation& d) {
  return integrate_1d(
      [&](double s) {
        const Vec3 x = d.curve(s);
        const Vec3 v = d.velocity(s);
        const double speed2 = v.dot(d.metric(x) * v);
        return v.dot(d.variation(x) * v) / (2.0 * speed2) * std::sqrt(speed2);
      },
      d.s0, d.s1);
}

}  // namespace schlafli
