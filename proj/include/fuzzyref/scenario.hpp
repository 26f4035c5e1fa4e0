#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzyref/bell.hpp"
#include "fuzzyref/coarsening.hpp"
#include "fuzzyref/decoherence.hpp"
#include "fuzzyref/quadrature.hpp"

namespace fuzzyref {

inline constexpr const char* kVersion = "0.1.0";

enum class ScenarioKind { Bell, Distribution };

enum class SweepVariable { DeltaW, DeltaT, Gamma, Theta, Lambda, Steps };

const char* to_string(ScenarioKind kind) noexcept;
const char* to_string(SweepVariable variable) noexcept;
ScenarioKind parse_scenario_kind(const std::string& label);
SweepVariable parse_sweep_variable(const std::string& label);

/// Either an even grid (min, max, points) or an explicit ascending list.
struct Grid {
  double min = 0.0;
  double max = 1.0;
  int points = 2;
  std::vector<double> values;

  static Grid linear(double min, double max, int points);
  static Grid list(std::vector<double> values);

  void validate() const;
  std::vector<double> resolve() const;
  bool operator==(const Grid&) const = default;
};

/// A complete, self-describing scan: the scenario parameters, the swept
/// variable and its grid, and the integrator.
///
/// Sweep variables:
///   delta_w  sets delta_w on every frequency-fuzzy side
///   delta_t  sets delta_t on every timing-fuzzy side
///   gamma    sets the telegraph-noise strength (needs a noise section)
///   lambda   sets both primed angles, theta_a' = theta_b' = x
///   steps    sets the rotation step count on both sides
///   theta    the angle axis of a distribution scan
struct SweepSpec {
  std::string scenario_id = "custom";
  std::string description;
  ScenarioKind kind = ScenarioKind::Bell;
  BellConfig bell;
  /// Present: correlations go through the decoherence evaluator.
  std::optional<NoiseSpec> noise;
  JointParams distribution;
  SweepVariable variable = SweepVariable::DeltaW;
  Grid grid;
  QuadratureSpec quad;
  std::uint64_t seed = 42;
  /// Free-form notes on conventions used to resolve the parameters.
  std::vector<std::pair<std::string, std::string>> notes;
  /// When non-empty, run_scenario writes the CSV and its JSON sidecar here.
  std::string output_path;

  void validate() const;
  /// Equality of every field that reaches the config format.
  bool same_parameters(const SweepSpec& other) const;
};

struct ScanResult {
  std::string scenario_id;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Resolved parameters in config syntax.
  std::string config_text;
  SweepSpec spec;
};

struct ScenarioInfo {
  std::string id;
  std::string description;
  std::string anchor;
};

std::vector<ScenarioInfo> list_scenarios();
/// Throws Usage for an unknown id.
SweepSpec preset(const std::string& id);

/// Key = value sections; see README for the keys and their units. Unknown
/// sections or keys are Usage errors.
SweepSpec parse_sweep_spec(const std::string& text);
SweepSpec load_sweep_spec(const std::string& path);
std::string serialize_sweep_spec(const SweepSpec& spec);

/// "section.key=value"; an empty value removes the key. The assignments
/// are applied together before the result is validated.
SweepSpec apply_overrides(const SweepSpec& spec, const std::vector<std::string>& assignments);
SweepSpec apply_override(const SweepSpec& spec, const std::string& assignment);

/// The parameters a grid point x resolves to.
struct PointConfig {
  BellConfig bell;
  std::optional<NoiseSpec> noise;
};
PointConfig resolve_point(const SweepSpec& spec, double x);

/// Evaluates every grid point (on `workers` threads, 0 = all cores) and
/// writes CSV + sidecar when spec.output_path is set. A failing grid point
/// is reported as a NumericError naming its x.
ScanResult run_scenario(const SweepSpec& spec, unsigned workers = 0);

/// Header row, then one row per grid point; 17 significant digits, LF.
std::string scan_csv(const ScanResult& result);
/// Sidecar metadata: resolved parameters, seed, quadrature, version, timestamp.
std::string scan_json(const ScanResult& result);
/// Writes `csv_path` and the sidecar (same stem, .json). Throws Io.
void write_scan(const ScanResult& result, const std::string& csv_path);
std::string sidecar_path(const std::string& csv_path);

/// Box kernel width of the Monte Carlo density estimate.
inline constexpr double kDensityKernelWidth = 0.01;

struct OraclePoint {
  double x = 0.0;
  double value = 0.0;     // closed form or quadrature
  double estimate = 0.0;  // Monte Carlo
  double standard_error = 0.0;
  double z = 0.0;         // |value - estimate| / standard_error
};

struct OracleReport {
  std::string scenario_id;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<OraclePoint> points;
  double max_z = 0.0;
  double worst_x = 0.0;
  double fraction_within_3 = 0.0;
  bool passed = false;
};

/// Re-evaluates every grid point by Monte Carlo. Passes iff at least 99% of
/// points agree within 3 standard errors and all within 5.
OracleReport run_oracle_check(const SweepSpec& spec, std::uint64_t samples, std::uint64_t seed,
                              unsigned workers = 0);

}  // namespace fuzzyref
