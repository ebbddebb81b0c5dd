#include <CLI11.hpp>
#include <cmath>
#include <fmt/format.h>
#include <iostream>
#include <optional>

#include "schlafli/errors.hpp"
#include "schlafli/harness.hpp"
#include "schlafli/io.hpp"
#include "schlafli/tubes.hpp"
#include "schlafli/variation.hpp"

namespace {

using namespace schlafli;
using harness::Row;
using harness::SuiteReport;

struct Common {
  std::string config_path;
  std::vector<std::string> inputs;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  bool wall_time = false;
};

harness::Config load_config(const Common& o) {
  harness::Config c = o.config_path.empty() ? harness::default_config()
                                            : harness::config_from_json(io::load_file(o.config_path), o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.wall_time) c.wall_time = true;
  return c;
}

// Prints the report and returns the exit code: 0 iff every row passes.
int finish(const SuiteReport& report, const Common& o) {
  std::cout << harness::emit(report, harness::format_from_string(o.format));
  const auto failing = report.failing();
  if (failing.empty()) return 0;
  std::cerr << fmt::format("{} failing check(s):\n", failing.size());
  for (const auto& id : failing) std::cerr << "  " << id << "\n";
  return 1;
}

int run_named_suite(const std::string& name, const Common& o) {
  const harness::Config c = load_config(o);
  harness::SuiteInputs inputs;
  for (const auto& path : o.inputs) inputs.families.emplace_back(path, io::family_from_json(io::load_file(path), path, ""));
  return finish(harness::run_suite(name, c, inputs), o);
}

std::string single_input(const Common& o, const std::string& what) {
  if (o.inputs.size() != 1) throw std::invalid_argument(fmt::format("{} needs exactly one --in file", what));
  return o.inputs.front();
}

int run_check(const std::string& kind, const Common& o, std::vector<double> ts, double h, int order, double delta) {
  const harness::Config c = load_config(o);
  SuiteReport report;
  report.suite = "check-" + kind;
  report.config = c;
  const std::string path = single_input(o, "check " + kind);
  const io::json j = io::load_file(path);
  if (kind == "schlafli" || kind == "dual-schlafli") {
    const PolyhedronFamily family = io::family_from_json(j, path, "");
    if (ts.empty()) ts = c.t_grid;
    for (double t : ts) {
      const Stencil s{h, order};
      const auto r = kind == "schlafli" ? schlafli_check(family, t, s, c.volume_tol)
                                        : dual_schlafli_check(family, t, s, c.volume_tol);
      const double tol = kind == "schlafli" ? c.tol.schlafli : c.tol.dual_schlafli;
      report.rows.push_back({fmt::format("{}/t={:g}", kind, t), kind, r.lhs, r.rhs, r.residual, tol,
                             r.residual <= tol});
    }
  } else if (kind == "smooth") {
    const SmoothFamilySpec spec = io::smooth_spec_from_json(j, path, "");
    if (ts.empty()) ts = {0.0};
    for (double t : ts) {
      const auto r = smooth_dual_variation_check(spec, t, {h, order});
      report.rows.push_back({fmt::format("smooth/{}/t={:g}", to_string(spec.kind), t), "smooth-dual-variation", r.lhs,
                             r.rhs, r.residual, c.tol.smooth, r.residual <= c.tol.smooth});
    }
  } else if (kind == "monotonic") {
    for (const char* key : {"inner", "outer"})
      if (!j.is_object() || !j.contains(key)) throw InputError(path, std::string("/") + key, "missing field");
    const auto inner = io::polyhedron_from_json(j.at("inner"), path, "/inner");
    const auto outer = io::polyhedron_from_json(j.at("outer"), path, "/outer");
    const auto r = monotonicity_check(ConvexPolyhedron::hull(inner.vertices), ConvexPolyhedron::hull(outer.vertices),
                                      std::min(inner.tol, outer.tol));
    // Non-nested input is reported, not an error.
    const double residual = r.contained ? std::max(0.0, -r.margin) : 0.0;
    report.rows.push_back({r.contained ? "monotonic/nested" : "monotonic/not-nested", "dual-volume-monotonicity",
                           r.margin, 0.0, residual, c.tol.monotonicity, residual <= c.tol.monotonicity});
  } else if (kind == "continuity") {
    const auto in = io::polyhedron_from_json(j, path, "");
    const ConvexPolyhedron p = ConvexPolyhedron::hull(in.vertices);
    const double m1 = continuity_probe(p, delta, PerturbationMode::RandomKlein, 16, c.seed);
    const double m2 = continuity_probe(p, delta / 2, PerturbationMode::RandomKlein, 16, c.seed);
    const double ratio = m1 > 0.0 ? m2 / m1 : 0.0;
    report.rows.push_back({fmt::format("continuity/delta={:g}", delta), "dual-volume-continuity", m2, m1, ratio,
                           c.tol.continuity_ratio, ratio <= c.tol.continuity_ratio});
  } else {
    throw std::invalid_argument(fmt::format("unknown check '{}'", kind));
  }
  return finish(report, o);
}

void print_object(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::cout << "{\n";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    std::cout << fmt::format("  \"{}\": {}{}\n", fields[i].first, fields[i].second, i + 1 < fields.size() ? "," : "");
  }
  std::cout << "}\n";
}

std::string json_string(const std::string& s) { return io::json(s).dump(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for volumes and dual volumes of convex sets in hyperbolic space"};
  app.require_subcommand(1);
  Common o;
  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Config JSON file");
    sub->add_option("--in", o.inputs, "Input JSON file (repeatable)");
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", o.seed, "Seed for randomized checks");
    sub->add_flag("--wall-time", o.wall_time, "Include wall time in JSON reports");
  };

  std::string suite_to_run;
  for (const auto& name : harness::suite_names()) {
    if (name == "core-expansion") continue;  // shares its name with a command below
    auto* sub = app.add_subcommand(name, fmt::format("Run the {} suite", name));
    add_common(sub);
    sub->callback([&suite_to_run, name] { suite_to_run = name; });
  }

  auto* core = app.add_subcommand("core-expansion",
                                  "Run the core-expansion suite, or evaluate the expansion when its inputs are given");
  add_common(core);
  std::optional<double> vstar, lmu, eps_core;
  std::optional<int> chi;
  core->add_option("--vstar", vstar, "Dual volume of the core");
  core->add_option("--lmu", lmu, "Bending length");
  core->add_option("--chi", chi, "Euler characteristic of the boundary");
  core->add_option("--eps", eps_core, "Neighborhood radius")->check(CLI::NonNegativeNumber);

  auto* check = app.add_subcommand("check", "Run one check on an input file");
  check->set_help_flag("--help", "Print this help message and exit");  // frees -h for the step
  add_common(check);
  std::string check_kind;
  std::vector<double> check_t;
  double check_h = kDefaultFdStep, delta = 1e-3;
  int order = 2;
  check->add_option("kind", check_kind, "Check kind")
      ->required()
      ->check(CLI::IsMember({"schlafli", "dual-schlafli", "smooth", "monotonic", "continuity"}));
  check->add_option("--t", check_t, "Parameter values (repeatable)");
  auto* h_opt = check->add_option("--h", check_h, "Finite-difference step")->check(CLI::PositiveNumber);
  auto* order_opt = check->add_option("--order", order, "Stencil order")->check(CLI::IsMember({2, 4}));
  check->add_option("--delta", delta, "Perturbation size for continuity")->check(CLI::PositiveNumber);

  auto* tube = app.add_subcommand("tube", "Closed-form tube volume and mean curvature integral");
  std::string tube_kind;
  double eps = 0.0, theta = 0.0, length = 0.0, area = 0.0, omega = 0.0;
  tube->add_option("--kind", tube_kind, "Tube base")
      ->required()
      ->check(CLI::IsMember({"flat", "wedge", "vertex", "torus"}));
  tube->add_option("--eps", eps, "Radius")->required();
  tube->add_option("--theta", theta, "Wedge angle");
  tube->add_option("--length", length, "Edge or core length");
  tube->add_option("--area", area, "Face area");
  tube->add_option("--omega", omega, "Normal-cone solid angle");

  auto* margin = app.add_subcommand("margin", "Convexity margin of a deformed eps-surface");
  std::string family = "builtin:klein-dilation-v1";
  double margin_eps = 0.3, margin_t = 0.0, offset = 0.1;
  std::vector<double> normal{0.2, 0.1, 0.9};
  margin->add_option("--family", family, "Diffeomorphism family");
  margin->add_option("--eps", margin_eps, "Radius")->check(CLI::PositiveNumber);
  margin->add_option("--t", margin_t, "Family parameter");
  margin->add_option("--normal", normal, "Klein normal of the plane")->expected(3);
  margin->add_option("--offset", offset, "Klein offset of the plane");

  if (argc > 1 && argv[1][0] != '-' && app.get_subcommand_no_throw(argv[1]) == nullptr) {
    fmt::print(stderr, "error: unknown suite or command '{}'\n", argv[1]);
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; usage errors share the input-error status.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (!suite_to_run.empty()) return run_named_suite(suite_to_run, o);
    if (core->parsed()) {
      const bool formula = vstar || lmu || chi || eps_core;
      if (!formula) return run_named_suite("core-expansion", o);
      if (!(vstar && lmu && chi && eps_core)) throw std::invalid_argument("--vstar, --lmu, --chi and --eps go together");
      print_object({{"vstar0", harness::format_number(*vstar)},
                    {"lmu", harness::format_number(*lmu)},
                    {"chi", std::to_string(*chi)},
                    {"eps", harness::format_number(*eps_core)},
                    {"dual_volume", harness::format_number(core_dual_volume_expansion(*vstar, *lmu, *chi, *eps_core))},
                    {"mean_curvature_integral",
                     harness::format_number(core_mean_curvature_integral(*chi, *lmu, *eps_core))}});
      return 0;
    }
    if (check->parsed()) {
      if (check_kind == "smooth") {
        if (!h_opt->count()) check_h = 1e-3;
        if (!order_opt->count()) order = 4;
      }
      return run_check(check_kind, o, check_t, check_h, order, delta);
    }
    if (tube->parsed()) {
      TubeSpec spec{FlatPatch{area}, eps};
      if (tube_kind == "wedge") spec.base = Wedge{length, theta};
      if (tube_kind == "vertex") spec.base = VertexCone{omega};
      if (tube_kind == "torus") spec.base = SolidTorusCore{length};
      print_object({{"kind", json_string(tube_kind)},
                    {"eps", harness::format_number(eps)},
                    {"volume", harness::format_number(tube_volume(spec))},
                    {"mean_curvature_integral", harness::format_number(mean_curvature_integral(spec))}});
      return 0;
    }
    if (margin->parsed()) {
      const DiffeoFamily f = builtin_diffeo(family);
      const HPlane plane = HPlane::from_klein(Vec3(normal[0], normal[1], normal[2]).normalized(), offset);
      print_object({{"family", json_string(f.name)},
                    {"eps", harness::format_number(margin_eps)},
                    {"t", harness::format_number(margin_t)},
                    {"margin", harness::format_number(convexity_margin(f, plane, margin_eps, margin_t))}});
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
