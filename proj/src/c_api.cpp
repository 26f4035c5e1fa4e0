#include "fuzzyref/fuzzyref.h"

#include <new>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fuzzyref/scenario.hpp"

struct fzr_scenario {
  fuzzyref::SweepSpec spec;
  unsigned workers = 0;
  std::string config;
};

struct fzr_result {
  fuzzyref::ScanResult scan;
  std::string csv;
};

namespace {

thread_local std::string last_error;

fzr_status status_of(fuzzyref::ErrorKind kind) {
  using fuzzyref::ErrorKind;
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::Domain:
      return FZR_USAGE;
    case ErrorKind::Contract:
      return FZR_CONTRACT;
    case ErrorKind::Numeric:
      return FZR_NUMERIC;
    case ErrorKind::Unsupported:
      return FZR_UNSUPPORTED;
    case ErrorKind::Io:
      return FZR_IO;
  }
  return FZR_INTERNAL;
}

fzr_status set_error(fzr_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <class Fn>
fzr_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const fuzzyref::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(FZR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(FZR_INTERNAL, e.what());
  } catch (...) {
    return set_error(FZR_INTERNAL, "unknown error");
  }
}

fzr_status null_argument(const char* name) { return set_error(FZR_USAGE, fmt::format("{} must not be NULL", name)); }

fzr_status make_scenario(fuzzyref::SweepSpec spec, fzr_scenario** out) {
  *out = new fzr_scenario{std::move(spec), 0, {}};
  return FZR_OK;
}

const std::vector<fuzzyref::ScenarioInfo>& infos() {
  static const std::vector<fuzzyref::ScenarioInfo> list = fuzzyref::list_scenarios();
  return list;
}

}  // namespace

extern "C" {

const char* fzr_version(void) { return fuzzyref::kVersion; }

const char* fzr_last_error(void) { return last_error.c_str(); }

size_t fzr_scenario_count(void) {
  try {
    return infos().size();
  } catch (...) {
    return 0;
  }
}

fzr_status fzr_scenario_info(size_t index, const char** id, const char** description, const char** anchor) {
  return guarded([&] {
    if (index >= infos().size())
      return set_error(FZR_USAGE, fmt::format("scenario index {} out of range", index));
    const auto& info = infos()[index];
    if (id) *id = info.id.c_str();
    if (description) *description = info.description.c_str();
    if (anchor) *anchor = info.anchor.c_str();
    return FZR_OK;
  });
}

fzr_status fzr_scenario_preset(const char* id, fzr_scenario** out) {
  if (!id) return null_argument("id");
  if (!out) return null_argument("out");
  return guarded([&] { return make_scenario(fuzzyref::preset(id), out); });
}

fzr_status fzr_scenario_load(const char* path, fzr_scenario** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { return make_scenario(fuzzyref::load_sweep_spec(path), out); });
}

fzr_status fzr_scenario_parse(const char* text, fzr_scenario** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  return guarded([&] { return make_scenario(fuzzyref::parse_sweep_spec(text), out); });
}

fzr_status fzr_scenario_distribution(double w0, double t0, double delta_w, double delta_t, double theta_min,
                                     double theta_max, int points, fzr_scenario** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    fuzzyref::SweepSpec spec;
    spec.scenario_id = "dist";
    spec.description = "Joint frequency+timing angle law";
    spec.kind = fuzzyref::ScenarioKind::Distribution;
    spec.distribution = {w0, t0, delta_w, delta_t};
    spec.variable = fuzzyref::SweepVariable::Theta;
    spec.grid = fuzzyref::Grid::linear(theta_min, theta_max, points);
    spec.quad = fuzzyref::QuadratureSpec::adaptive_simpson();
    spec.validate();
    return make_scenario(std::move(spec), out);
  });
}

fzr_status fzr_scenario_override(fzr_scenario* scenario, const char* const* assignments, size_t count) {
  if (!scenario) return null_argument("scenario");
  if (count > 0 && !assignments) return null_argument("assignments");
  return guarded([&] {
    std::vector<std::string> list;
    for (size_t i = 0; i < count; ++i) {
      if (!assignments[i]) return null_argument("assignment");
      list.emplace_back(assignments[i]);
    }
    scenario->spec = fuzzyref::apply_overrides(scenario->spec, list);
    return FZR_OK;
  });
}

fzr_status fzr_scenario_set_workers(fzr_scenario* scenario, unsigned workers) {
  if (!scenario) return null_argument("scenario");
  scenario->workers = workers;
  return FZR_OK;
}

const char* fzr_scenario_id(const fzr_scenario* scenario) {
  return scenario ? scenario->spec.scenario_id.c_str() : nullptr;
}

const char* fzr_scenario_config(fzr_scenario* scenario) {
  if (!scenario) return nullptr;
  try {
    scenario->config = fuzzyref::serialize_sweep_spec(scenario->spec);
    return scenario->config.c_str();
  } catch (const std::exception& e) {
    set_error(FZR_INTERNAL, e.what());
    return nullptr;
  }
}

void fzr_scenario_free(fzr_scenario* scenario) { delete scenario; }

fzr_status fzr_run(const fzr_scenario* scenario, fzr_result** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new fzr_result{fuzzyref::run_scenario(scenario->spec, scenario->workers), {}};
    return FZR_OK;
  });
}

size_t fzr_result_rows(const fzr_result* result) { return result ? result->scan.rows.size() : 0; }

size_t fzr_result_cols(const fzr_result* result) { return result ? result->scan.columns.size() : 0; }

const char* fzr_result_column_name(const fzr_result* result, size_t col) {
  if (!result || col >= result->scan.columns.size()) return nullptr;
  return result->scan.columns[col].c_str();
}

fzr_status fzr_result_value(const fzr_result* result, size_t row, size_t col, double* out) {
  if (!result) return null_argument("result");
  if (!out) return null_argument("out");
  if (row >= result->scan.rows.size() || col >= result->scan.columns.size())
    return set_error(FZR_USAGE, fmt::format("cell ({}, {}) out of range", row, col));
  *out = result->scan.rows[row][col];
  return FZR_OK;
}

fzr_status fzr_result_write(const fzr_result* result, const char* csv_path) {
  if (!result) return null_argument("result");
  if (!csv_path) return null_argument("csv_path");
  return guarded([&] {
    fuzzyref::write_scan(result->scan, csv_path);
    return FZR_OK;
  });
}

const char* fzr_result_csv(fzr_result* result) {
  if (!result) return nullptr;
  try {
    if (result->csv.empty()) result->csv = fuzzyref::scan_csv(result->scan);
    return result->csv.c_str();
  } catch (const std::exception& e) {
    set_error(FZR_INTERNAL, e.what());
    return nullptr;
  }
}

void fzr_result_free(fzr_result* result) { delete result; }

fzr_status fzr_check(const fzr_scenario* scenario, uint64_t samples, uint64_t seed, fzr_oracle_summary* summary) {
  if (!scenario) return null_argument("scenario");
  return guarded([&] {
    const fuzzyref::OracleReport r = fuzzyref::run_oracle_check(scenario->spec, samples, seed, scenario->workers);
    if (summary) *summary = {r.samples, r.seed, r.points.size(), r.max_z, r.worst_x, r.fraction_within_3, r.passed ? 1 : 0};
    if (r.passed) return FZR_OK;
    return set_error(FZR_ORACLE, fmt::format("{}: oracle check failed: max z {:.3g} at x = {:.17g}, {:.1f}% within 3 SE",
                                             r.scenario_id, r.max_z, r.worst_x, 100.0 * r.fraction_within_3));
  });
}

}  // extern "C"
