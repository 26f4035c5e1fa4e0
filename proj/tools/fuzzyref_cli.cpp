// Command-line front end. Talks to the engine only through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fuzzyref/fuzzyref.h"

namespace {

// 0 success, 1 usage/config/io, 2 numeric failure, 3 oracle failure.
int exit_code(fzr_status status) {
  switch (status) {
    case FZR_OK:
      return 0;
    case FZR_NUMERIC:
      return 2;
    case FZR_ORACLE:
      return 3;
    default:
      return 1;
  }
}

int report(fzr_status status) {
  if (status != FZR_OK) std::fprintf(stderr, "fuzzyref: %s\n", fzr_last_error());
  return exit_code(status);
}

struct ScenarioHandle {
  fzr_scenario* ptr = nullptr;
  ~ScenarioHandle() { fzr_scenario_free(ptr); }
};

struct ResultHandle {
  fzr_result* ptr = nullptr;
  ~ResultHandle() { fzr_result_free(ptr); }
};

fzr_status apply(fzr_scenario* s, const std::vector<std::string>& overrides, unsigned workers) {
  std::vector<const char*> raw;
  for (const auto& o : overrides) raw.push_back(o.c_str());
  if (!raw.empty()) {
    if (fzr_status st = fzr_scenario_override(s, raw.data(), raw.size()); st != FZR_OK) return st;
  }
  return fzr_scenario_set_workers(s, workers);
}

int run_and_write(fzr_scenario* s, const std::string& out) {
  ResultHandle r;
  if (fzr_status st = fzr_run(s, &r.ptr); st != FZR_OK) return report(st);
  if (fzr_status st = fzr_result_write(r.ptr, out.c_str()); st != FZR_OK) return report(st);
  std::printf("%s: %zu rows -> %s\n", fzr_scenario_id(s), fzr_result_rows(r.ptr), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell correlations under coarsened measurement references"};
  app.set_version_flag("--version", std::string(fzr_version()));
  app.require_subcommand(1);

  unsigned workers = 0;
  std::string scenario_id, config_path, out_path;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "Run a named preset and write CSV + JSON sidecar");
  run->add_option("--scenario", scenario_id, "Preset id (see `list`)")->required();
  run->add_option("--override", overrides, "section.key=value, repeatable");
  run->add_option("--out", out_path, "Output CSV path")->required();
  run->add_option("--workers", workers, "Worker threads (0 = all cores)");

  auto* sweep = app.add_subcommand("sweep", "Run a scan described by a config file");
  sweep->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--override", overrides, "section.key=value, repeatable");
  sweep->add_option("--out", out_path, "Output CSV path")->required();
  sweep->add_option("--workers", workers, "Worker threads (0 = all cores)");

  double w0 = 1.0, t0 = 0.0, dw = 1.0, dt = 1.0, tmin = -5.0, tmax = 5.0;
  int points = 400;
  auto* dist = app.add_subcommand("dist", "Tabulate the joint frequency+timing angle law");
  dist->add_option("--w0", w0, "Nominal frequency (rad/time)")->required();
  dist->add_option("--t0", t0, "Nominal duration (time)")->required();
  dist->add_option("--dw", dw, "Frequency spread (rad/time)")->required();
  dist->add_option("--dt", dt, "Duration spread (time)")->required();
  dist->add_option("--min", tmin, "Smallest angle (rad)")->required();
  dist->add_option("--max", tmax, "Largest angle (rad)")->required();
  dist->add_option("--points", points, "Grid points")->required();
  dist->add_option("--out", out_path, "Output CSV path")->required();
  dist->add_option("--workers", workers, "Worker threads (0 = all cores)");

  std::uint64_t samples = 1'000'000, seed = 42;
  auto* check = app.add_subcommand("check", "Cross-check a preset against Monte Carlo");
  check->add_option("--scenario", scenario_id, "Preset id")->required();
  check->add_option("--override", overrides, "section.key=value, repeatable");
  check->add_option("--samples", samples, "Monte Carlo samples per grid point (>= 10000)")->capture_default_str();
  check->add_option("--seed", seed, "Base seed")->capture_default_str();
  check->add_option("--workers", workers, "Worker threads (0 = all cores)");

  auto* list = app.add_subcommand("list", "List presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  ScenarioHandle s;
  if (*list) {
    for (size_t i = 0; i < fzr_scenario_count(); ++i) {
      const char *id = nullptr, *description = nullptr, *anchor = nullptr;
      if (fzr_status st = fzr_scenario_info(i, &id, &description, &anchor); st != FZR_OK) return report(st);
      std::printf("%-14s %s\n%14s [%s]\n", id, description, "", anchor);
    }
    return 0;
  }
  if (*run) {
    if (fzr_status st = fzr_scenario_preset(scenario_id.c_str(), &s.ptr); st != FZR_OK) return report(st);
    if (fzr_status st = apply(s.ptr, overrides, workers); st != FZR_OK) return report(st);
    return run_and_write(s.ptr, out_path);
  }
  if (*sweep) {
    if (fzr_status st = fzr_scenario_load(config_path.c_str(), &s.ptr); st != FZR_OK) return report(st);
    if (fzr_status st = apply(s.ptr, overrides, workers); st != FZR_OK) return report(st);
    return run_and_write(s.ptr, out_path);
  }
  if (*dist) {
    if (fzr_status st = fzr_scenario_distribution(w0, t0, dw, dt, tmin, tmax, points, &s.ptr); st != FZR_OK)
      return report(st);
    if (fzr_status st = apply(s.ptr, {}, workers); st != FZR_OK) return report(st);
    return run_and_write(s.ptr, out_path);
  }
  if (*check) {
    if (fzr_status st = fzr_scenario_preset(scenario_id.c_str(), &s.ptr); st != FZR_OK) return report(st);
    if (fzr_status st = apply(s.ptr, overrides, workers); st != FZR_OK) return report(st);
    fzr_oracle_summary sum{};
    const fzr_status st = fzr_check(s.ptr, samples, seed, &sum);
    if (st != FZR_OK && st != FZR_ORACLE) return report(st);
    std::printf("%s: %s  points=%zu  max_z=%.3f at x=%.17g  within_3se=%.2f%%  samples=%llu seed=%llu\n",
                fzr_scenario_id(s.ptr), sum.passed ? "PASS" : "FAIL", sum.points, sum.max_z, sum.worst_x,
                100.0 * sum.fraction_within_3, static_cast<unsigned long long>(sum.samples),
                static_cast<unsigned long long>(sum.seed));
    return report(st);
  }
  return 1;
}
