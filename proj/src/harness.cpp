#include "schlafli/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fmt/format.h>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "schlafli/errors.hpp"
#include "schlafli/laminations.hpp"
#include "schlafli/quadrature.hpp"
#include "schlafli/tubes.hpp"
#include "schlafli/variation.hpp"

namespace schlafli::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

using Task = std::function<std::vector<Row>()>;

Row row(std::string check, std::string anchor, double lhs, double rhs, double residual, double tolerance) {
  return Row{std::move(check), std::move(anchor), lhs, rhs, residual, tolerance, residual <= tolerance};
}

Row difference_row(std::string check, std::string anchor, double lhs, double rhs, double tolerance) {
  return row(std::move(check), std::move(anchor), lhs, rhs, std::abs(lhs - rhs), tolerance);
}

// Rows come back in task order whatever the completion order.
std::vector<Row> run_tasks(const std::vector<Task>& tasks, int threads) {
  std::vector<std::vector<Row>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Row> rows;
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(rows));
  return rows;
}

std::string num(double x) { return fmt::format("{:g}", x); }

// ---------------------------------------------------------------- polyhedral variation

struct NamedFamily {
  std::string label;
  PolyhedronFamily family;
};

std::vector<NamedFamily> families(const Config& c, const SuiteInputs& inputs) {
  std::vector<NamedFamily> out;
  for (const auto& name : c.families) out.push_back({name, builtin_family(name)});
  for (const auto& [label, f] : inputs.families) out.push_back({label, f});
  return out;
}

void schlafli_tasks(std::vector<Task>& tasks, const Config& c, const SuiteInputs& inputs) {
  for (const auto& nf : families(c, inputs)) {
    for (double t : c.t_grid) {
      tasks.push_back([&c, nf, t] {
        const auto r = schlafli_check(nf.family, t, {c.fd_step, c.fd_order}, c.volume_tol);
        return std::vector<Row>{row(fmt::format("schlafli/{}/t={}", nf.label, num(t)), "schlafli-formula", r.lhs,
                                    r.rhs, r.residual, c.tol.schlafli)};
      });
    }
  }
}

void dual_schlafli_tasks(std::vector<Task>& tasks, const Config& c, const SuiteInputs& inputs) {
  for (const auto& nf : families(c, inputs)) {
    for (double t : c.t_grid) {
      tasks.push_back([&c, nf, t] {
        const Stencil s{c.fd_step, c.fd_order};
        const auto dual = dual_schlafli_check(nf.family, t, s, c.volume_tol);
        // The identity is checked with a fourth-order stencil: the volume
        // quadrature noise is common to Vol and Vol*, so what remains is the
        // product-rule mismatch of the differences, O(h^4) here.
        const auto vol = [&](double x) { return volume(nf.family.at(x), c.volume_tol); };
        const auto dvol = [&](double x) { return dual_volume(nf.family.at(x), c.volume_tol); };
        const double d_volume = central_difference(vol, t, s.h, 4);
        const double d_dual = central_difference(dvol, t, s.h, 4);
        const auto edges = edge_data_derivative(nf.family, t, s.h, 4);
        double expected = d_volume;
        for (const auto& e : edges) expected -= 0.5 * (e.exterior_angle * e.d_length + e.length * e.d_angle);
        const std::string id = fmt::format("dual-schlafli/{}/t={}", nf.label, num(t));
        return std::vector<Row>{
            row(id, "dual-schlafli-polyhedral", dual.lhs, dual.rhs, dual.residual, c.tol.dual_schlafli),
            row(id + "/identity", "dual-volume-identity", d_dual, expected,
                dual_identity_residual(edges, d_volume, d_dual), c.tol.dual_identity)};
      });
    }
  }
}

void smooth_tasks(std::vector<Task>& tasks, const Config& c) {
  for (double r : c.radius_grid) {
    tasks.push_back([&c, r] {
      SmoothFamilySpec spec;
      spec.base = r;
      const auto rep = smooth_dual_variation_check(spec, 0.0, {c.smooth_fd_step, 4});
      const double closed = -4.0 * kPi * std::cosh(r) * std::cosh(r);
      const std::string id = fmt::format("smooth/geodesic_sphere/r={}", num(r));
      return std::vector<Row>{
          difference_row(id + "/fd-vs-integral", "smooth-dual-variation", rep.lhs, rep.rhs, c.tol.smooth),
          difference_row(id + "/integral-vs-closed-form", "smooth-dual-variation", rep.rhs, closed, c.tol.smooth)};
    });
  }
  for (auto kind : {SmoothFamilySpec::Kind::PlaneTube, SmoothFamilySpec::Kind::LineTube}) {
    tasks.push_back([&c, kind] {
      SmoothFamilySpec spec;
      spec.kind = kind;
      const auto rep = smooth_dual_variation_check(spec, 0.0, {c.smooth_fd_step, 4});
      const std::string id = fmt::format("smooth/{}/r={}", to_string(kind), num(spec.base));
      return std::vector<Row>{
          difference_row(id + "/fd-vs-integral", "smooth-dual-variation", rep.lhs, rep.rhs, c.tol.smooth),
          difference_row(id + "/integral-vs-closed-form", "smooth-dual-variation", rep.rhs,
                         spec.dual_volume_derivative(0.0), c.tol.smooth)};
    });
  }
}

void monotonicity_tasks(std::vector<Task>& tasks, const Config& c) {
  tasks.push_back([&c] {
    const auto f = monotonicity_fuzz(c.fuzz_pairs, c.seed);
    return std::vector<Row>{
        row(fmt::format("monotonicity/fuzz/pairs={}/seed={}", c.fuzz_pairs, c.seed), "dual-volume-monotonicity",
            f.violations, 0.0, f.violations, 0.0),
        row("monotonicity/fuzz/worst-margin", "dual-volume-monotonicity", f.worst_margin, 0.0,
            std::max(0.0, -f.worst_margin), c.tol.monotonicity)};
  });
}

void continuity_tasks(std::vector<Task>& tasks, const Config& c) {
  tasks.push_back([&c] {
    const ConvexPolyhedron p = builtin_family("stretch-tetra-v1").at(0.0);
    const double delta = 1e-3;
    const double m1 = continuity_probe(p, delta, PerturbationMode::RandomKlein, 16, c.seed);
    const double m2 = continuity_probe(p, delta / 2, PerturbationMode::RandomKlein, 16, c.seed);
    const double iso = continuity_probe(p, 0.3, PerturbationMode::Isometry, 16, c.seed);
    return std::vector<Row>{
        row("continuity/stretch-tetra-v1/halving", "dual-volume-continuity", m2, m1, m2 / m1,
            c.tol.continuity_ratio),
        row("continuity/stretch-tetra-v1/isometry", "dual-volume-continuity", iso, 0.0, iso, c.tol.isometry)};
  });
}

// ---------------------------------------------------------------- tubes

constexpr double kWedgeLength = 1.3;
constexpr double kWindow = 0.6;

double wedge_quadrature(double length, double angle, double eps) {
  return integrate_1d(
      [&](double) {
        return integrate_1d(
            [&](double) {
              return integrate_1d([](double t) { return std::cosh(t) * std::sinh(t); }, 0.0, eps);
            },
            0.0, angle);
      },
      0.0, length);
}

void tube_tasks(std::vector<Task>& tasks, const Config& c) {
  for (double theta : c.angle_grid) {
    for (double eps : c.eps_grid) {
      tasks.push_back([&c, theta, eps] {
        return std::vector<Row>{difference_row(fmt::format("tubes/wedge/theta={}/eps={}", num(theta), num(eps)),
                                               "wedge-tube-volume",
                                               tube_volume({Wedge{kWedgeLength, theta}, eps}),
                                               wedge_quadrature(kWedgeLength, theta, eps), c.tol.tube)};
      });
    }
  }
  for (double eps : c.eps_grid) {
    tasks.push_back([&c, eps] {
      const double area = 4.0 * kWindow * std::sinh(kWindow);
      const std::string e = num(eps);
      std::vector<Row> rows{
          difference_row(fmt::format("tubes/flat/eps={}", e), "flat-tube-volume", tube_volume({FlatPatch{area}, eps}),
                         area * integrate_1d([](double t) { return std::cosh(t) * std::cosh(t); }, 0.0, eps),
                         c.tol.tube),
          difference_row(fmt::format("tubes/vertex/eps={}", e), "vertex-tube-volume",
                         tube_volume({VertexCone{4.0 * kPi}, eps}),
                         4.0 * kPi * integrate_1d([](double t) { return std::sinh(t) * std::sinh(t); }, 0.0, eps),
                         c.tol.tube),
          difference_row(fmt::format("tubes/torus/eps={}", e), "solid-torus-tube-volume",
                         tube_volume({SolidTorusCore{kWedgeLength}, eps}),
                         wedge_quadrature(kWedgeLength, 2.0 * kPi, eps), c.tol.tube)};
      if (eps > 0.0) {
        const double flat_h = integrate_2d(
            [eps](double a, double b) {
              const auto f = plane_tube_forms(eps, a, b);
              return f.mean_curvature * f.area_element();
            },
            -kWindow, kWindow, -kWindow, kWindow);
        const double wedge_h = integrate_2d(
            [eps](double s, double th) {
              const auto f = line_tube_forms(eps, s, th);
              return f.mean_curvature * f.area_element();
            },
            0.0, kWedgeLength, 0.0, 1.5);
        const BentChain chain = circular_chain(0.8, 0.0, 1.2, 4, 0.5);
        const double chain_closed = [&] {
          double total = 0.0;
          for (double a : chain.face_areas()) total += mean_curvature_integral({FlatPatch{a}, eps});
          for (double th : chain.bending_angles())
            total += mean_curvature_integral({Wedge{2.0 * chain.half_width(), th}, eps});
          return total;
        }();
        rows.push_back(difference_row(fmt::format("tubes/flat/eps={}/mean-curvature", e), "tube-mean-curvature",
                                      mean_curvature_integral({FlatPatch{area}, eps}), flat_h, c.tol.tube));
        rows.push_back(difference_row(fmt::format("tubes/wedge/theta=1.5/eps={}/mean-curvature", e),
                                      "tube-mean-curvature",
                                      mean_curvature_integral({Wedge{kWedgeLength, 1.5}, eps}), wedge_h, c.tol.tube));
        rows.push_back(difference_row(fmt::format("tubes/bent-chain/eps={}/mean-curvature", e), "tube-mean-curvature",
                                      chain_closed, chain.window_mean_curvature_integral(eps), c.tol.tube));
      }
      return rows;
    });
  }
  tasks.push_back([] {
    // Refining a chain towards a circle halves the gradient deviation.
    const double radius = 0.8, eps = 0.3;
    BentChain chain = circular_chain(radius, 0.0, 1.2, 2, 0.5);
    std::vector<double> dev;
    for (int level = 0; level < 4; ++level) {
      dev.push_back(gradient_deviation(chain, radius, eps, 0.0, 1.2, 41));
      chain = refine_circular(chain, radius);
    }
    return std::vector<Row>{row("tubes/bent-chain/refinement-ratio", "standard-approximation", dev[3], dev[2],
                                dev[3] / dev[2], 0.6)};
  });
}

// ---------------------------------------------------------------- core expansion

void core_tasks(std::vector<Task>& tasks, const Config& c) {
  const double length = 1.7;
  for (double eps : c.core_eps_grid) {
    tasks.push_back([&c, length, eps] {
      const std::string id = fmt::format("core-expansion/solid-torus/eps={}", num(eps));
      const double assembled = solid_torus_dual_volume(length, eps);
      std::vector<Row> rows{
          difference_row(id, "core-dual-volume-expansion", assembled,
                         core_dual_volume_expansion(-kPi * length, 2.0 * kPi * length, 0, eps), c.tol.core),
          difference_row(id + "/closed-form", "core-dual-volume-expansion", assembled,
                         -kPi * length * std::cosh(eps) * std::cosh(eps), c.tol.core)};
      if (eps > 0.0) {
        const double quad = integrate_2d(
            [eps](double s, double th) {
              const auto f = line_tube_forms(eps, s, th);
              return f.mean_curvature * f.area_element();
            },
            0.0, length, 0.0, 2.0 * kPi);
        rows.push_back(difference_row(id + "/mean-curvature", "core-mean-curvature",
                                      core_mean_curvature_integral(0, 2.0 * kPi * length, eps), quad, c.tol.core));
      }
      return rows;
    });
  }
  for (const std::string name : {"stretch-tetra-v1", "wobble-octa-v1"}) {
    tasks.push_back([&c, name] {
      const ConvexPolyhedron p = builtin_family(name).at(0.0);
      const NeighborhoodData d = neighborhood_data(p, c.volume_tol);
      std::vector<double> values;
      for (double e : c.limit_eps) values.push_back(neighborhood_dual_volume(d, e));
      const std::string id = fmt::format("core-expansion/{}", name);
      return std::vector<Row>{
          difference_row(id + "/gauss-bonnet", "gauss-bonnet", d.solid_angle, 4.0 * kPi + d.face_area, c.tol.core),
          difference_row(id + "/eps-limit", "epsilon-continuity", richardson_limit(c.limit_eps, values),
                         dual_volume(p, c.volume_tol), c.tol.epsilon_limit)};
    });
  }
}

// ---------------------------------------------------------------- lengths

void length_tasks(std::vector<Task>& tasks, const Config& c) {
  for (const auto& name : builtin_rep_path_names()) {
    tasks.push_back([&c, name] {
      const RepPath path = builtin_rep_path(name);
      const RationalLamination lam = builtin_path_lamination(name);
      std::vector<Row> rows;
      for (double t : c.t_grid) {
        if (t - 2 * c.length_fd_step < path.t_min || t + 2 * c.length_fd_step > path.t_max) continue;
        const auto d = length_derivative(path, lam, t, c.length_fd_step);
        rows.push_back(row(fmt::format("lengths/{}/t={}", name, num(t)), "length-first-variation", d.fd, d.analytic,
                           d.residual, c.tol.length));
      }
      return rows;
    });
  }
  for (const auto& name : builtin_deformation_names()) {
    tasks.push_back([&c, name] {
      const MetricDeformation d = builtin_deformation(name);
      validate(d);
      const double integral = first_variation_integral(d);
      const double fd = central_difference(d.curve_length, 0.0, 1e-3, 4);
      const std::string id = fmt::format("lengths/metric/{}", name);
      std::vector<Row> rows;
      if (name == "warped-solid-torus-v1") {
        rows.push_back(difference_row(id + "/closed-form", "metric-first-variation", integral, d.s1 - d.s0, c.tol.metric));
      } else if (name == "conformal-v1") {
        rows.push_back(difference_row(id + "/closed-form", "metric-first-variation", integral,
                                      std::cos(d.s0) - std::cos(d.s1), c.tol.metric));
      } else if (name == "zero-v1") {
        rows.push_back(difference_row(id + "/closed-form", "metric-first-variation", integral, 0.0, c.tol.metric));
      }
      rows.push_back(difference_row(id + "/fd", "metric-first-variation", integral, fd, 1e-7));
      return rows;
    });
  }
}

// ---------------------------------------------------------------- margins

HPlane margin_plane() { return HPlane::from_klein(Vec3(0.2, 0.1, 0.9).normalized(), 0.1); }

void margin_tasks(std::vector<Task>& tasks, const Config& c) {
  tasks.push_back([&c] {
    const DiffeoFamily f = builtin_diffeo("klein-dilation-v1");
    const HPlane plane = margin_plane();
    std::vector<double> margins;
    for (double t : c.margin_t) margins.push_back(convexity_margin(f, plane, c.margin_eps, t));
    double fitted = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i)
      fitted = std::max(fitted, margins[i] / std::abs(c.margin_t[i]));
    std::vector<Row> rows;
    for (std::size_t i = 0; i < margins.size(); ++i) {
      const double bound = fitted * std::abs(c.margin_t[i]);
      rows.push_back(row(fmt::format("margins/klein-dilation-v1/t={}", num(c.margin_t[i])), "convexity-margin",
                         margins[i], bound, std::max(0.0, margins[i] - bound), 0.0));
    }
    const double m0 = convexity_margin(f, plane, c.margin_eps, 0.0);
    rows.push_back(row("margins/klein-dilation-v1/t=0", "convexity-margin", m0, 0.0, std::max(0.0, m0),
                       c.tol.margin_zero));
    // The fitted constant is meaningful only if margin / t settles as t -> 0.
    double small = 0.0, large = 0.0, tmin = 1e300, tmax = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
      const double t = c.margin_t[i];
      if (t <= 0.0) continue;
      if (t < tmin) tmin = t, small = margins[i] / t;
      if (t > tmax) tmax = t, large = margins[i] / t;
    }
    if (tmax > 0.0) {
      rows.push_back(row("margins/klein-dilation-v1/linearity", "convexity-margin", small, large,
                         std::abs(small - large) / std::max(std::abs(small), 1e-300), c.tol.margin_linearity));
    }
    return rows;
  });
  for (const std::string name : {"identity-v1", "isometry-path-v1"}) {
    tasks.push_back([&c, name] {
      const DiffeoFamily f = builtin_diffeo(name);
      std::vector<Row> rows;
      for (double t : c.margin_t) {
        const double m = convexity_margin(f, margin_plane(), c.margin_eps, t);
        rows.push_back(row(fmt::format("margins/{}/t={}", name, num(t)), "convexity-margin", m, 0.0,
                           std::max(0.0, m), c.tol.margin_zero));
      }
      return rows;
    });
  }
}

// ---------------------------------------------------------------- serialization

void write_json(std::ostream& out, const ordered_json& j, int indent) {
  const std::string pad(indent + 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad << json(k).dump() << ": ";
        write_json(out, v, indent + 2);
      }
      out << "\n" << std::string(indent, ' ') << "}";
      return;
    }
    case json::value_t::array: {
      // Scalar arrays stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const auto& v) { return v.is_structured(); });
      if (j.empty() || flat) {
        out << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out << ", ";
          write_json(out, j[i], indent);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        write_json(out, j[i], indent + 2);
      }
      out << "\n" << std::string(indent, ' ') << "]";
      return;
    }
    case json::value_t::number_float:
      out << format_number(j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else {
      out.back() += ch;
    }
  }
  return out;
}

double parse_number(const std::string& s) {
  if (s.empty() || s == "null") return std::nan("");
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return x;
}

double json_number(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

constexpr const char* kCsvHeader = "suite,check,anchor,lhs,rhs,residual,tolerance,pass";

}  // namespace

// ---------------------------------------------------------------- config

Config default_config() {
  Config c;
  if (const char* env = std::getenv("SCHLAFLI_LAB_THREADS")) {
    try {
      c.threads = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw InputError("SCHLAFLI_LAB_THREADS", "", "expected a positive integer");
    }
  }
  return c;
}

Config config_from_json(const json& j, const std::string& path) {
  Config c = default_config();
  if (!j.is_object()) throw InputError(path, "", "config must be an object");
  auto number = [&](const json& v, const std::string& ptr) {
    if (!v.is_number()) throw InputError(path, ptr, "expected a number");
    return v.get<double>();
  };
  auto integer = [&](const json& v, const std::string& ptr) {
    if (!v.is_number_integer()) throw InputError(path, ptr, "expected an integer");
    return v.get<long long>();
  };
  auto numbers = [&](const json& v, const std::string& ptr) {
    if (!v.is_array()) throw InputError(path, ptr, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], ptr + "/" + std::to_string(i)));
    return out;
  };
  for (const auto& [key, v] : j.items()) {
    const std::string ptr = "/" + key;
    if (key == "tolerances") {
      if (!v.is_object()) throw InputError(path, ptr, "expected an object");
      Tolerances& t = c.tol;
      const std::map<std::string, double*> fields{
          {"schlafli", &t.schlafli},         {"dual_schlafli", &t.dual_schlafli},
          {"dual_identity", &t.dual_identity}, {"isometry", &t.isometry},
          {"smooth", &t.smooth},
          {"monotonicity", &t.monotonicity}, {"continuity_ratio", &t.continuity_ratio},
          {"tube", &t.tube},                 {"core", &t.core},
          {"epsilon_limit", &t.epsilon_limit}, {"length", &t.length},
          {"metric", &t.metric},             {"margin_zero", &t.margin_zero},
          {"margin_linearity", &t.margin_linearity}};
      for (const auto& [tk, tv] : v.items()) {
        const auto it = fields.find(tk);
        if (it == fields.end()) throw InputError(path, ptr + "/" + tk, "unknown tolerance");
        *it->second = number(tv, ptr + "/" + tk);
      }
    } else if (key == "fd_step") {
      c.fd_step = number(v, ptr);
    } else if (key == "fd_order") {
      c.fd_order = static_cast<int>(integer(v, ptr));
      if (c.fd_order != 2 && c.fd_order != 4) throw InputError(path, ptr, "order must be 2 or 4");
    } else if (key == "volume_tol") {
      c.volume_tol = number(v, ptr);
    } else if (key == "smooth_fd_step") {
      c.smooth_fd_step = number(v, ptr);
    } else if (key == "length_fd_step") {
      c.length_fd_step = number(v, ptr);
    } else if (key == "t_grid") {
      c.t_grid = numbers(v, ptr);
    } else if (key == "families") {
      if (!v.is_array()) throw InputError(path, ptr, "expected an array of names");
      c.families.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) throw InputError(path, ptr + "/" + std::to_string(i), "expected a string");
        c.families.push_back(v[i].get<std::string>());
      }
    } else if (key == "radius_grid") {
      c.radius_grid = numbers(v, ptr);
    } else if (key == "eps_grid") {
      c.eps_grid = numbers(v, ptr);
    } else if (key == "angle_grid") {
      c.angle_grid = numbers(v, ptr);
    } else if (key == "core_eps_grid") {
      c.core_eps_grid = numbers(v, ptr);
    } else if (key == "limit_eps") {
      c.limit_eps = numbers(v, ptr);
    } else if (key == "margin_t") {
      c.margin_t = numbers(v, ptr);
    } else if (key == "margin_eps") {
      c.margin_eps = number(v, ptr);
    } else if (key == "fuzz_pairs") {
      c.fuzz_pairs = static_cast<int>(integer(v, ptr));
    } else if (key == "seed") {
      const auto s = integer(v, ptr);
      if (s < 0) throw InputError(path, ptr, "seed must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "threads") {
      c.threads = std::max<int>(1, static_cast<int>(integer(v, ptr)));
    } else if (key == "wall_time") {
      if (!v.is_boolean()) throw InputError(path, ptr, "expected a boolean");
      c.wall_time = v.get<bool>();
    } else {
      throw InputError(path, ptr, "unknown config key");
    }
  }
  for (const auto& name : c.families) {
    try {
      builtin_family(name);
    } catch (const Error& e) {
      throw InputError(path, "/families", e.what());
    }
  }
  return c;
}

json config_to_json(const Config& c) {
  // Threads are deliberately absent: they never change the numbers.
  const Tolerances& t = c.tol;
  json tol = {{"schlafli", t.schlafli},
              {"dual_schlafli", t.dual_schlafli},
              {"dual_identity", t.dual_identity},
              {"isometry", t.isometry},
              {"smooth", t.smooth},
              {"monotonicity", t.monotonicity},
              {"continuity_ratio", t.continuity_ratio},
              {"tube", t.tube},
              {"core", t.core},
              {"epsilon_limit", t.epsilon_limit},
              {"length", t.length},
              {"metric", t.metric},
              {"margin_zero", t.margin_zero},
              {"margin_linearity", t.margin_linearity}};
  return json{{"tolerances", tol},
              {"fd_step", c.fd_step},
              {"fd_order", c.fd_order},
              {"volume_tol", c.volume_tol},
              {"smooth_fd_step", c.smooth_fd_step},
              {"length_fd_step", c.length_fd_step},
              {"t_grid", c.t_grid},
              {"families", c.families},
              {"radius_grid", c.radius_grid},
              {"eps_grid", c.eps_grid},
              {"angle_grid", c.angle_grid},
              {"core_eps_grid", c.core_eps_grid},
              {"limit_eps", c.limit_eps},
              {"margin_t", c.margin_t},
              {"margin_eps", c.margin_eps},
              {"fuzz_pairs", c.fuzz_pairs},
              {"seed", c.seed},
              {"wall_time", c.wall_time}};
}

// ---------------------------------------------------------------- suites

bool SuiteReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
}

std::vector<std::string> SuiteReport::failing() const {
  std::vector<std::string> out;
  for (const auto& r : rows)
    if (!r.pass) out.push_back(r.check);
  return out;
}

std::vector<std::string> suite_names() {
  return {"schlafli", "dual-schlafli", "tubes", "core-expansion", "lengths", "margins", "all"};
}

SuiteReport run_suite(std::string_view name, const Config& config, const SuiteInputs& inputs) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw std::invalid_argument(fmt::format("unknown suite '{}'", name));
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<Task> tasks;
  const bool all = name == "all";
  if (all || name == "schlafli") schlafli_tasks(tasks, config, inputs);
  if (all || name == "dual-schlafli") {
    dual_schlafli_tasks(tasks, config, inputs);
    smooth_tasks(tasks, config);
    monotonicity_tasks(tasks, config);
    continuity_tasks(tasks, config);
  }
  if (all || name == "tubes") tube_tasks(tasks, config);
  if (all || name == "core-expansion") core_tasks(tasks, config);
  if (all || name == "lengths") length_tasks(tasks, config);
  if (all || name == "margins") margin_tasks(tasks, config);
  SuiteReport report;
  report.suite = std::string(name);
  report.rows = run_tasks(tasks, config.threads);
  report.config = config;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---------------------------------------------------------------- emit / parse

Format format_from_string(std::string_view s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw std::invalid_argument(fmt::format("unknown format '{}'", s));
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  return fmt::format("{:.17g}", x);
}

std::string emit(const SuiteReport& report, Format format) {
  std::ostringstream out;
  if (format == Format::Csv) {
    out << kCsvHeader << "\n";
    for (const auto& r : report.rows) {
      out << csv_field(report.suite) << ',' << csv_field(r.check) << ',' << csv_field(r.anchor) << ','
          << format_number(r.lhs) << ',' << format_number(r.rhs) << ',' << format_number(r.residual) << ','
          << format_number(r.tolerance) << ',' << (r.pass ? "true" : "false") << "\n";
    }
    return out.str();
  }
  ordered_json j;
  j["suite"] = report.suite;
  j["pass"] = report.pass();
  if (report.config) j["config"] = ordered_json(config_to_json(*report.config));
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json o;
    o["check"] = r.check;
    o["anchor"] = r.anchor;
    auto put = [&](const char* key, double x) {
      if (std::isfinite(x)) {
        o[key] = x;
      } else {
        o[key] = nullptr;
      }
    };
    put("lhs", r.lhs);
    put("rhs", r.rhs);
    put("residual", r.residual);
    put("tolerance", r.tolerance);
    o["pass"] = r.pass;
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  if (report.config && report.config->wall_time) j["wall_time_s"] = report.wall_time;
  write_json(out, j, 0);
  out << "\n";
  return out.str();
}

SuiteReport parse_json_report(std::string_view text) {
  const json j = json::parse(text);
  SuiteReport report;
  report.suite = j.at("suite").get<std::string>();
  for (const auto& o : j.at("rows")) {
    report.rows.push_back(Row{o.at("check").get<std::string>(), o.at("anchor").get<std::string>(),
                              json_number(o.at("lhs")), json_number(o.at("rhs")), json_number(o.at("residual")),
                              json_number(o.at("tolerance")), o.at("pass").get<bool>()});
  }
  if (j.contains("config")) report.config = config_from_json(j.at("config"), "<report>");
  if (j.contains("wall_time_s")) report.wall_time = j.at("wall_time_s").get<double>();
  return report;
}

SuiteReport parse_csv_report(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("missing CSV header");
  SuiteReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv_split(line);
    if (f.size() != 8) throw std::invalid_argument("CSV row needs 8 fields: " + line);
    report.suite = f[0];
    report.rows.push_back(Row{f[1], f[2], parse_number(f[3]), parse_number(f[4]), parse_number(f[5]),
                              parse_number(f[6]), f[7] == "true"});
  }
  return report;
}

}  // namespace schlafli::harness
