#include "fuzzyref/scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "fuzzyref/parallel.hpp"

namespace fuzzyref {

const char* to_string(ScenarioKind kind) noexcept {
  switch (kind) {
    case ScenarioKind::Bell:
      return "bell";
    case ScenarioKind::Distribution:
      return "distribution";
  }
  return "unknown";
}

const char* to_string(SweepVariable variable) noexcept {
  switch (variable) {
    case SweepVariable::DeltaW:
      return "delta_w";
    case SweepVariable::DeltaT:
      return "delta_t";
    case SweepVariable::Gamma:
      return "gamma";
    case SweepVariable::Theta:
      return "theta";
    case SweepVariable::Lambda:
      return "lambda";
    case SweepVariable::Steps:
      return "steps";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& label) {
  if (label == "bell") return ScenarioKind::Bell;
  if (label == "distribution") return ScenarioKind::Distribution;
  fail(ErrorKind::Usage, fmt::format("unknown scenario kind '{}' (bell, distribution)", label));
}

SweepVariable parse_sweep_variable(const std::string& label) {
  for (SweepVariable v : {SweepVariable::DeltaW, SweepVariable::DeltaT, SweepVariable::Gamma, SweepVariable::Theta,
                          SweepVariable::Lambda, SweepVariable::Steps})
    if (label == to_string(v)) return v;
  fail(ErrorKind::Usage,
       fmt::format("unknown sweep variable '{}' (delta_w, delta_t, gamma, theta, lambda, steps)", label));
}

Grid Grid::linear(double min, double max, int points) {
  Grid g;
  g.min = min;
  g.max = max;
  g.points = points;
  return g;
}

Grid Grid::list(std::vector<double> values) {
  Grid g;
  g.values = std::move(values);
  g.min = g.values.empty() ? 0.0 : g.values.front();
  g.max = g.values.empty() ? 0.0 : g.values.back();
  g.points = static_cast<int>(g.values.size());
  return g;
}

void Grid::validate() const {
  if (!values.empty()) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) fail(ErrorKind::Usage, "grid values must be finite");
      if (i > 0 && !(values[i] > values[i - 1]))
        fail(ErrorKind::Usage, "grid values must be strictly ascending");
    }
    return;
  }
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max))
    fail(ErrorKind::Usage, fmt::format("grid needs finite min < max (got {}, {})", min, max));
  if (points < 2) fail(ErrorKind::Usage, fmt::format("grid needs at least 2 points (got {})", points));
}

std::vector<double> Grid::resolve() const {
  if (!values.empty()) return values;
  std::vector<double> xs(static_cast<std::size_t>(points));
  const double step = (max - min) / (points - 1);
  for (int i = 0; i < points; ++i) xs[i] = min + step * i;
  xs.back() = max;
  return xs;
}

namespace {

bool has_kind(const BellConfig& b, FuzzinessKind kind) {
  return b.model_a.kind() == kind || b.model_b.kind() == kind;
}

void validate_point(const SweepSpec& spec, double x) {
  const PointConfig p = resolve_point(spec, x);
  p.bell.validate();
  if (p.bell.variant == BellVariant::PerSetting) {
    (void)p.bell.setting_a();
    (void)p.bell.setting_a_prime();
    (void)p.bell.setting_b();
    (void)p.bell.setting_b_prime();
  }
  if (p.noise) {
    p.noise->validate();
    if ((p.noise->side_a && p.bell.steps_a > 1) || (p.noise->side_b && p.bell.steps_b > 1))
      fail(ErrorKind::Unsupported, "a noisy side must rotate in a single step");
  }
}

}  // namespace

void SweepSpec::validate() const {
  if (scenario_id.empty()) fail(ErrorKind::Usage, "scenario id must not be empty");
  grid.validate();
  quad.validate();

  if (kind == ScenarioKind::Distribution) {
    if (variable != SweepVariable::Theta) fail(ErrorKind::Usage, "distribution scans sweep theta");
    if (noise) fail(ErrorKind::Usage, "distribution scans take no noise");
    if (quad.method != QuadratureMethod::AdaptiveSimpson)
      fail(ErrorKind::Usage, "distribution scans use adaptive_simpson quadrature");
    const JointParams& d = distribution;
    if (!std::isfinite(d.w0) || !std::isfinite(d.t0))
      fail(ErrorKind::Usage, "distribution w0 and t0 must be finite");
    (void)AngleDistribution::joint_numeric(d);
    return;
  }

  if (variable == SweepVariable::Theta) fail(ErrorKind::Usage, "theta is the sweep variable of distribution scans");
  if (quad.method != QuadratureMethod::GaussHermite)
    fail(ErrorKind::Usage, "bell scans use gauss_hermite quadrature");
  if (has_kind(bell, FuzzinessKind::Joint))
    fail(ErrorKind::Unsupported, "Bell values are not defined for the joint frequency+timing model");
  const bool per_term = bell.variant == BellVariant::PerTerm;
  if (per_term && noise) fail(ErrorKind::Unsupported, "noise needs the per_setting variant");
  switch (variable) {
    case SweepVariable::DeltaW:
      if (per_term || !has_kind(bell, FuzzinessKind::FrequencyOnly))
        fail(ErrorKind::Usage, "sweeping delta_w needs a frequency-fuzzy side");
      break;
    case SweepVariable::DeltaT:
      if (per_term || !has_kind(bell, FuzzinessKind::TimingOnly))
        fail(ErrorKind::Usage, "sweeping delta_t needs a timing-fuzzy side");
      break;
    case SweepVariable::Gamma:
      if (!noise) fail(ErrorKind::Usage, "sweeping gamma needs a [noise] section");
      break;
    case SweepVariable::Steps:
      if (per_term) fail(ErrorKind::Usage, "per-term sigmas do not depend on steps");
      for (double x : grid.resolve())
        if (x < 1.0 || x != std::floor(x) || x > 1e6)
          fail(ErrorKind::Usage, fmt::format("steps grid values must be integers >= 1 (got {})", x));
      break;
    default:
      break;
  }
  for (double x : grid.resolve()) validate_point(*this, x);
}

bool SweepSpec::same_parameters(const SweepSpec& o) const {
  if (scenario_id != o.scenario_id || description != o.description || kind != o.kind || variable != o.variable ||
      seed != o.seed || notes != o.notes)
    return false;
  if (grid.values.empty() != o.grid.values.empty()) return false;
  if (grid.values.empty() ? !(grid.min == o.grid.min && grid.max == o.grid.max && grid.points == o.grid.points)
                          : grid.values != o.grid.values)
    return false;
  if (quad.method != o.quad.method) return false;
  if (quad.method == QuadratureMethod::GaussHermite && quad.nodes != o.quad.nodes) return false;
  if (quad.method == QuadratureMethod::AdaptiveSimpson &&
      !(quad.rel_tol == o.quad.rel_tol && quad.max_depth == o.quad.max_depth &&
        quad.singular_window == o.quad.singular_window))
    return false;
  if (kind == ScenarioKind::Distribution) return distribution == o.distribution;
  return bell == o.bell && noise == o.noise;
}

PointConfig resolve_point(const SweepSpec& spec, double x) {
  PointConfig p{spec.bell, spec.noise};
  auto set_dw = [&](FuzzinessModel& m) {
    if (m.kind() == FuzzinessKind::FrequencyOnly) m = FuzzinessModel::frequency(x);
  };
  auto set_dt = [&](FuzzinessModel& m) {
    if (m.kind() == FuzzinessKind::TimingOnly) m = FuzzinessModel::timing(x);
  };
  switch (spec.variable) {
    case SweepVariable::DeltaW:
      set_dw(p.bell.model_a);
      set_dw(p.bell.model_b);
      break;
    case SweepVariable::DeltaT:
      set_dt(p.bell.model_a);
      set_dt(p.bell.model_b);
      break;
    case SweepVariable::Gamma:
      if (p.noise) p.noise->gamma = x;
      break;
    case SweepVariable::Lambda:
      p.bell.theta_a_prime = p.bell.theta_b_prime = x;
      break;
    case SweepVariable::Steps:
      p.bell.steps_a = p.bell.steps_b = static_cast<int>(x);
      break;
    case SweepVariable::Theta:
      break;
  }
  return p;
}

namespace {

std::vector<double> bell_row(const SweepSpec& spec, double x) {
  const PointConfig p = resolve_point(spec, x);
  BellBreakdown bd;
  if (p.noise)
    bd = decohered_bell(p.bell, *p.noise, spec.quad);
  else if (p.bell.variant == BellVariant::PerTerm)
    bd = bell_value_per_term(p.bell);
  else
    bd = bell_value(p.bell);
  return {x, bd.e1, bd.e2, bd.e3, bd.e4, bd.b, bd.abs_b};
}

std::vector<double> distribution_row(const SweepSpec& spec, double x) {
  return {x, joint_angle_density(x, spec.distribution, spec.quad).value};
}

}  // namespace

ScanResult run_scenario(const SweepSpec& spec, unsigned workers) {
  spec.validate();
  const std::vector<double> xs = spec.grid.resolve();
  const char* var = to_string(spec.variable);

  ScanResult result;
  result.scenario_id = spec.scenario_id;
  result.spec = spec;
  result.config_text = serialize_sweep_spec(spec);
  if (spec.kind == ScenarioKind::Bell)
    result.columns = {var, "e1", "e2", "e3", "e4", "b", "abs_b"};
  else
    result.columns = {"theta", "density"};
  result.rows.resize(xs.size());

  parallel_for(xs.size(), workers, [&](std::size_t i) {
    const double x = xs[i];
    try {
      std::vector<double> row =
          spec.kind == ScenarioKind::Bell ? bell_row(spec, x) : distribution_row(spec, x);
      for (double v : row)
        if (!std::isfinite(v)) throw NumericError("non-finite value", v, 0.0);
      result.rows[i] = std::move(row);
    } catch (const NumericError& e) {
      throw NumericError(fmt::format("{}: {} = {:.17g}: {}", spec.scenario_id, var, x, e.what()),
                         e.partial_value(), e.error_estimate());
    } catch (const Error& e) {
      throw Error(e.kind(), fmt::format("{}: {} = {:.17g}: {}", spec.scenario_id, var, x, e.what()));
    }
  });

  if (!spec.output_path.empty()) write_scan(result, spec.output_path);
  return result;
}

std::string scan_csv(const ScanResult& result) {
  std::string out;
  for (std::size_t j = 0; j < result.columns.size(); ++j) {
    if (j) out += ',';
    out += result.columns[j];
  }
  out += '\n';
  for (const auto& row : result.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += fmt::format("{:.17g}", row[j]);
    }
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::ordered_json quadrature_json(const QuadratureSpec& q) {
  nlohmann::ordered_json j;
  j["method"] = to_string(q.method);
  switch (q.method) {
    case QuadratureMethod::GaussHermite:
      j["nodes"] = q.nodes;
      break;
    case QuadratureMethod::AdaptiveSimpson:
      j["rel_tol"] = q.rel_tol;
      j["max_depth"] = q.max_depth;
      j["singular_window"] = q.singular_window;
      break;
    case QuadratureMethod::MonteCarlo:
      j["samples"] = q.samples;
      j["seed"] = q.seed;
      break;
  }
  return j;
}

nlohmann::ordered_json side_json(const FuzzinessModel& m, double w0, int steps) {
  nlohmann::ordered_json j;
  j["model"] = to_string(m.kind());
  j["delta_w"] = m.delta_w();
  j["delta_t"] = m.delta_t();
  j["w0_magnitude"] = w0;
  j["steps"] = steps;
  return j;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string scan_json(const ScanResult& result) {
  const SweepSpec& s = result.spec;
  nlohmann::ordered_json j;
  j["tool"] = "fuzzyref";
  j["version"] = kVersion;
  j["timestamp"] = utc_timestamp();
  j["scenario_id"] = result.scenario_id;
  j["description"] = s.description;
  j["kind"] = to_string(s.kind);
  j["columns"] = result.columns;
  j["rows"] = result.rows.size();
  j["seed"] = s.seed;
  j["quadrature"] = quadrature_json(s.quad);

  nlohmann::ordered_json sweep;
  sweep["variable"] = to_string(s.variable);
  if (s.grid.values.empty()) {
    sweep["min"] = s.grid.min;
    sweep["max"] = s.grid.max;
    sweep["points"] = s.grid.points;
  } else {
    sweep["values"] = s.grid.values;
  }
  j["sweep"] = sweep;

  nlohmann::ordered_json params;
  if (s.kind == ScenarioKind::Bell) {
    const BellConfig& b = s.bell;
    params["theta_a"] = b.theta_a;
    params["theta_a_prime"] = b.theta_a_prime;
    params["theta_b"] = b.theta_b;
    params["theta_b_prime"] = b.theta_b_prime;
    params["side_a"] = side_json(b.model_a, b.w0_a, b.steps_a);
    params["side_b"] = side_json(b.model_b, b.w0_b, b.steps_b);
    params["variant"] = to_string(b.variant);
    if (b.per_term_overrides) params["per_term_sigmas"] = *b.per_term_overrides;
    if (s.noise) {
      params["noise"] = {{"gamma", s.noise->gamma}, {"side_a", s.noise->side_a}, {"side_b", s.noise->side_b}};
    }
  } else {
    const JointParams& d = s.distribution;
    params = {{"w0", d.w0}, {"t0", d.t0}, {"delta_w", d.delta_w}, {"delta_t", d.delta_t}};
  }
  j["parameters"] = params;

  nlohmann::ordered_json notes = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s.notes) notes[k] = v;
  j["notes"] = notes;
  j["config"] = result.config_text;
  return j.dump(2) + "\n";
}

std::string sidecar_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".json");
  if (p.string() == csv_path) return csv_path + ".meta.json";
  return p.string();
}

namespace {

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, fmt::format("cannot open '{}' for writing", path));
  out << body;
  out.close();
  if (!out) fail(ErrorKind::Io, fmt::format("failed writing '{}'", path));
}

}  // namespace

void write_scan(const ScanResult& result, const std::string& csv_path) {
  write_file(csv_path, scan_csv(result));
  write_file(sidecar_path(csv_path), scan_json(result));
}

}  // namespace fuzzyref
