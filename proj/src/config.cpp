// Plain-text scenario files: INI-style sections of key = value pairs.

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "fuzzyref/scenario.hpp"

namespace fuzzyref {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"id", "description", "kind"}},
      {"sweep", {"variable", "min", "max", "points", "values"}},
      {"angles", {"theta_a", "theta_a_prime", "theta_b", "theta_b_prime"}},
      {"side_a", {"model", "delta_w", "delta_t", "w0", "steps"}},
      {"side_b", {"model", "delta_w", "delta_t", "w0", "steps"}},
      {"bell", {"variant", "per_term_sigmas"}},
      {"noise", {"gamma", "sides"}},
      {"distribution", {"w0", "t0", "delta_w", "delta_t"}},
      {"quadrature", {"method", "nodes", "rel_tol", "max_depth", "singular_window"}},
      {"oracle", {"seed"}},
      {"notes", {}},  // free-form keys
  };
  return keys;
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& where, const std::string& raw) {
  const std::string text = trim(raw);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(value))
    fail(ErrorKind::Usage, fmt::format("{}: '{}' is not a finite number", where, raw));
  return value;
}

template <class Int>
Int parse_int(const std::string& where, const std::string& raw) {
  const std::string text = trim(raw);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    fail(ErrorKind::Usage, fmt::format("{}: '{}' is not an integer", where, raw));
  return value;
}

std::vector<double> parse_list(const std::string& where, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(where, item));
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(values[i]);
  }
  return out;
}

/// Read access to one section that remembers which keys were consumed.
class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  bool present() const { return tree_ != nullptr; }

  std::optional<std::string> get(const std::string& key) {
    if (!tree_) return std::nullopt;
    auto child = tree_->get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!child) return std::nullopt;
    used_.insert(key);
    return trim(child->data());
  }

  std::string require(const std::string& key) {
    auto v = get(key);
    if (!v) fail(ErrorKind::Usage, fmt::format("[{}] needs key '{}'", name_, key));
    return *v;
  }

  double number(const std::string& key, double fallback) {
    auto v = get(key);
    return v ? parse_double(where(key), *v) : fallback;
  }

  template <class Int>
  Int integer(const std::string& key, Int fallback) {
    auto v = get(key);
    return v ? parse_int<Int>(where(key), *v) : fallback;
  }

  std::string where(const std::string& key) const { return fmt::format("[{}] {}", name_, key); }

  /// Fails on keys that are known to the schema but were not read, i.e.
  /// keys that do not apply to the chosen model or variant.
  void reject_unused() const {
    if (!tree_) return;
    for (const auto& [key, _] : *tree_)
      if (!used_.count(key))
        fail(ErrorKind::Usage, fmt::format("[{}] {} does not apply to this configuration", name_, key));
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
  std::set<std::string> used_;
};

Section section(const pt::ptree& root, const std::string& name) {
  auto child = root.get_child_optional(pt::ptree::path_type(name, '\0'));
  return Section(child ? &*child : nullptr, name);
}

void check_schema(const pt::ptree& root) {
  for (const auto& [name, body] : root) {
    auto it = schema().find(name);
    if (it == schema().end()) {
      if (body.empty()) fail(ErrorKind::Usage, fmt::format("key '{}' must sit inside a [section]", name));
      fail(ErrorKind::Usage, fmt::format("unknown section [{}]", name));
    }
    if (name == "notes") continue;
    for (const auto& [key, _] : body)
      if (!it->second.count(key)) fail(ErrorKind::Usage, fmt::format("unknown key '{}' in [{}]", key, name));
  }
}

FuzzinessModel read_model(Section& s) {
  const FuzzinessKind kind = parse_fuzziness_kind(s.get("model").value_or("frequency"));
  switch (kind) {
    case FuzzinessKind::FrequencyOnly:
      return FuzzinessModel::frequency(s.number("delta_w", 0.0));
    case FuzzinessKind::TimingOnly:
      return FuzzinessModel::timing(s.number("delta_t", 0.0));
    case FuzzinessKind::Joint:
      break;
  }
  return FuzzinessModel::joint(s.number("delta_w", 0.0), s.number("delta_t", 0.0));
}

pt::ptree to_tree(const SweepSpec& spec) {
  pt::ptree root;
  auto put = [&](const std::string& sec, const std::string& key, const std::string& value) {
    root.put(pt::ptree::path_type(sec + '\0' + key, '\0'), value);
  };

  put("scenario", "id", spec.scenario_id);
  if (!spec.description.empty()) put("scenario", "description", spec.description);
  put("scenario", "kind", to_string(spec.kind));

  put("sweep", "variable", to_string(spec.variable));
  if (!spec.grid.values.empty()) {
    put("sweep", "values", join(spec.grid.values));
  } else {
    put("sweep", "min", fmt_double(spec.grid.min));
    put("sweep", "max", fmt_double(spec.grid.max));
    put("sweep", "points", std::to_string(spec.grid.points));
  }

  if (spec.kind == ScenarioKind::Bell) {
    const BellConfig& b = spec.bell;
    put("angles", "theta_a", fmt_double(b.theta_a));
    put("angles", "theta_a_prime", fmt_double(b.theta_a_prime));
    put("angles", "theta_b", fmt_double(b.theta_b));
    put("angles", "theta_b_prime", fmt_double(b.theta_b_prime));
    auto side = [&](const std::string& name, const FuzzinessModel& m, double w0, int steps) {
      put(name, "model", to_string(m.kind()));
      if (m.kind() != FuzzinessKind::TimingOnly) put(name, "delta_w", fmt_double(m.delta_w()));
      if (m.kind() != FuzzinessKind::FrequencyOnly) put(name, "delta_t", fmt_double(m.delta_t()));
      put(name, "w0", fmt_double(w0));
      put(name, "steps", std::to_string(steps));
    };
    side("side_a", b.model_a, b.w0_a, b.steps_a);
    side("side_b", b.model_b, b.w0_b, b.steps_b);
    put("bell", "variant", to_string(b.variant));
    if (b.per_term_overrides)
      put("bell", "per_term_sigmas", join(std::vector<double>(b.per_term_overrides->begin(), b.per_term_overrides->end())));
    if (spec.noise) {
      put("noise", "gamma", fmt_double(spec.noise->gamma));
      std::string sides;
      if (spec.noise->side_a) sides = "a";
      if (spec.noise->side_b) sides += sides.empty() ? "b" : ", b";
      put("noise", "sides", sides);
    }
  } else {
    put("distribution", "w0", fmt_double(spec.distribution.w0));
    put("distribution", "t0", fmt_double(spec.distribution.t0));
    put("distribution", "delta_w", fmt_double(spec.distribution.delta_w));
    put("distribution", "delta_t", fmt_double(spec.distribution.delta_t));
  }

  const QuadratureSpec& q = spec.quad;
  put("quadrature", "method", to_string(q.method));
  switch (q.method) {
    case QuadratureMethod::GaussHermite:
      put("quadrature", "nodes", std::to_string(q.nodes));
      break;
    case QuadratureMethod::AdaptiveSimpson:
      put("quadrature", "rel_tol", fmt_double(q.rel_tol));
      put("quadrature", "max_depth", std::to_string(q.max_depth));
      put("quadrature", "singular_window", fmt_double(q.singular_window));
      break;
    case QuadratureMethod::MonteCarlo:
      break;
  }
  put("oracle", "seed", std::to_string(spec.seed));
  for (const auto& [key, value] : spec.notes) put("notes", key, value);
  return root;
}

SweepSpec from_tree(const pt::ptree& root) {
  check_schema(root);
  SweepSpec spec;

  Section scenario = section(root, "scenario");
  if (!scenario.present()) fail(ErrorKind::Usage, "missing [scenario] section");
  spec.scenario_id = scenario.get("id").value_or("custom");
  spec.description = scenario.get("description").value_or("");
  spec.kind = parse_scenario_kind(scenario.require("kind"));

  Section sweep = section(root, "sweep");
  if (!sweep.present()) fail(ErrorKind::Usage, "missing [sweep] section");
  spec.variable = parse_sweep_variable(sweep.require("variable"));
  if (auto values = sweep.get("values")) {
    spec.grid = Grid::list(parse_list(sweep.where("values"), *values));
  } else {
    spec.grid = Grid::linear(sweep.number("min", 0.0), sweep.number("max", 1.0), sweep.integer<int>("points", 2));
  }

  Section angles = section(root, "angles");
  Section side_a = section(root, "side_a");
  Section side_b = section(root, "side_b");
  Section bell = section(root, "bell");
  Section noise = section(root, "noise");
  Section dist = section(root, "distribution");

  if (spec.kind == ScenarioKind::Bell) {
    if (dist.present()) fail(ErrorKind::Usage, "[distribution] is not used by bell scenarios");
    BellConfig& b = spec.bell;
    b.theta_a = angles.number("theta_a", 0.0);
    b.theta_a_prime = angles.number("theta_a_prime", 0.0);
    b.theta_b = angles.number("theta_b", 0.0);
    b.theta_b_prime = angles.number("theta_b_prime", 0.0);
    b.model_a = read_model(side_a);
    b.w0_a = side_a.number("w0", 1.0);
    b.steps_a = side_a.integer<int>("steps", 1);
    b.model_b = read_model(side_b);
    b.w0_b = side_b.number("w0", 1.0);
    b.steps_b = side_b.integer<int>("steps", 1);
    b.variant = parse_bell_variant(bell.get("variant").value_or("per_setting"));
    if (auto sigmas = bell.get("per_term_sigmas")) {
      const auto list = parse_list(bell.where("per_term_sigmas"), *sigmas);
      if (list.size() != 8) fail(ErrorKind::Usage, "[bell] per_term_sigmas needs exactly 8 values");
      PerTermSigmas s{};
      std::copy(list.begin(), list.end(), s.begin());
      b.per_term_overrides = s;
    }
    if (noise.present()) {
      NoiseSpec n;
      n.gamma = noise.number("gamma", 0.0);
      n.side_a = n.side_b = false;
      std::stringstream ss(noise.get("sides").value_or("a"));
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item == "a") n.side_a = true;
        else if (item == "b") n.side_b = true;
        else fail(ErrorKind::Usage, fmt::format("[noise] sides: unknown side '{}' (a, b)", item));
      }
      spec.noise = n;
    }
  } else {
    for (const Section* s : {&angles, &side_a, &side_b, &bell, &noise})
      if (s->present()) fail(ErrorKind::Usage, "distribution scenarios take only [distribution] parameters");
    spec.distribution.w0 = dist.number("w0", 1.0);
    spec.distribution.t0 = dist.number("t0", 0.0);
    spec.distribution.delta_w = dist.number("delta_w", 1.0);
    spec.distribution.delta_t = dist.number("delta_t", 1.0);
  }

  Section quad = section(root, "quadrature");
  const QuadratureMethod default_method =
      spec.kind == ScenarioKind::Bell ? QuadratureMethod::GaussHermite : QuadratureMethod::AdaptiveSimpson;
  const auto method_label = quad.get("method");
  spec.quad.method = method_label ? parse_quadrature_method(*method_label) : default_method;
  switch (spec.quad.method) {
    case QuadratureMethod::GaussHermite:
      spec.quad.nodes = quad.integer<int>("nodes", 64);
      break;
    case QuadratureMethod::AdaptiveSimpson:
      spec.quad.rel_tol = quad.number("rel_tol", 1e-9);
      spec.quad.max_depth = quad.integer<int>("max_depth", 40);
      spec.quad.singular_window = quad.number("singular_window", 1e-8);
      break;
    case QuadratureMethod::MonteCarlo:
      break;
  }

  Section oracle = section(root, "oracle");
  spec.seed = oracle.integer<std::uint64_t>("seed", 42);

  if (auto notes = root.get_child_optional("notes"))
    for (const auto& [key, value] : *notes) spec.notes.emplace_back(key, trim(value.data()));

  for (const Section* s : {&scenario, &sweep, &angles, &side_a, &side_b, &bell, &noise, &dist, &quad, &oracle})
    s->reject_unused();

  spec.validate();
  return spec;
}

pt::ptree read_tree(const std::string& text) {
  std::istringstream in(text);
  pt::ptree root;
  try {
    pt::ini_parser::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::Usage, fmt::format("config line {}: {}", e.line(), e.message()));
  }
  return root;
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& text) { return from_tree(read_tree(text)); }

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, fmt::format("cannot read config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_spec(ss.str());
}

std::string serialize_sweep_spec(const SweepSpec& spec) {
  std::ostringstream out;
  pt::ini_parser::write_ini(out, to_tree(spec));
  return out.str();
}

SweepSpec apply_overrides(const SweepSpec& spec, const std::vector<std::string>& assignments) {
  pt::ptree root = to_tree(spec);
  for (const std::string& assignment : assignments) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      fail(ErrorKind::Usage, fmt::format("override '{}' must look like section.key=value", assignment));
    const std::string sec = trim(assignment.substr(0, dot));
    const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
    const std::string value = trim(assignment.substr(eq + 1));

    auto it = schema().find(sec);
    if (it == schema().end()) fail(ErrorKind::Usage, fmt::format("override: unknown section [{}]", sec));
    if (sec != "notes" && !it->second.count(key))
      fail(ErrorKind::Usage, fmt::format("override: unknown key '{}' in [{}]", key, sec));

    if (value.empty()) {
      if (auto child = root.get_child_optional(pt::ptree::path_type(sec, '\0'))) child->erase(key);
      continue;
    }
    root.put(pt::ptree::path_type(sec + '\0' + key, '\0'), value);

    // An even grid and an explicit list are exclusive; setting one form
    // drops the other.
    if (sec == "sweep") {
      auto& sw = root.get_child("sweep");
      if (key == "values") {
        sw.erase("min");
        sw.erase("max");
        sw.erase("points");
      } else if (key == "min" || key == "max" || key == "points") {
        sw.erase("values");
      }
    }
  }
  SweepSpec out = from_tree(root);
  out.output_path = spec.output_path;
  return out;
}

SweepSpec apply_override(const SweepSpec& spec, const std::string& assignment) {
  return apply_overrides(spec, {assignment});
}

}  // namespace fuzzyref
