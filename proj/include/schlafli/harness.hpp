#pragma once

// Batch verification suites and their machine-readable reports.

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schlafli/polyhedra.hpp"

namespace schlafli::harness {

struct Tolerances {
  double schlafli = 1e-6;
  double dual_schlafli = 1e-6;
  double dual_identity = 1e-9;  // fourth-order stencil; Vol and Vol* share quadrature noise
  double isometry = 1e-9;
  double smooth = 1e-7;
  double monotonicity = 1e-9;
  double continuity_ratio = 0.75;  // modulus(delta / 2) / modulus(delta)
  double tube = 1e-7;
  double core = 1e-9;
  double epsilon_limit = 1e-7;
  double length = 1e-6;
  double metric = 1e-9;
  double margin_zero = 1e-9;
  double margin_linearity = 0.05;
};

struct Config {
  Tolerances tol;
  double fd_step = kDefaultFdStep;
  int fd_order = 2;
  double volume_tol = 1e-12;
  double smooth_fd_step = 1e-3;
  double length_fd_step = 1e-4;
  std::vector<double> t_grid{-0.5, -0.25, 0.0, 0.25, 0.5};
  std::vector<std::string> families{"stretch-tetra-v1", "rigid-tetra-v1", "scale-tetra-v1",
                                    "wobble-tetra-v1",  "hinge-tetra-v1", "wobble-octa-v1"};
  std::vector<double> radius_grid{0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5};
  std::vector<double> eps_grid{0.1, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> angle_grid{0.3, 0.9, 1.5, 2.4, 3.0};
  std::vector<double> core_eps_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> limit_eps{0.02, 0.01, 0.005};
  std::vector<double> margin_t{-0.02, -0.01, -0.005, 0.005, 0.01, 0.02};
  double margin_eps = 0.3;
  int fuzz_pairs = 100;
  std::uint64_t seed = 0;
  int threads = 1;
  bool wall_time = false;  // include wall time in JSON reports
};

/// Defaults, with threads taken from SCHLAFLI_LAB_THREADS when set.
Config default_config();
/// Overrides defaults with the keys present; unknown keys are InputErrors.
Config config_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json config_to_json(const Config& c);

/// User inputs added to the built-in fixtures.
struct SuiteInputs {
  std::vector<std::pair<std::string, PolyhedronFamily>> families;  // label, family
};

struct Row {
  std::string check;
  std::string anchor;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<Row> rows;
  double wall_time = 0.0;
  std::optional<Config> config;

  bool pass() const;
  std::vector<std::string> failing() const;
};

std::vector<std::string> suite_names();
/// Throws std::invalid_argument for an unknown suite.
SuiteReport run_suite(std::string_view name, const Config& config, const SuiteInputs& inputs = {});

enum class Format { Json, Csv };
Format format_from_string(std::string_view s);
std::string emit(const SuiteReport& report, Format format);

/// Inverse of emit for the rows and suite name; config is echoed back as far
/// as JSON carries it.
SuiteReport parse_json_report(std::string_view text);
SuiteReport parse_csv_report(std::string_view text);

/// 17 significant digits; non-finite values as null.
std::string format_number(double x);

}  // namespace schlafli::harness
