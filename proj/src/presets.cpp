#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fuzzyref/scenario.hpp"

namespace fuzzyref {

namespace {

constexpr double kPi = std::numbers::pi;

const char* kSignNote =
    "w0 values are magnitudes |w0|; each measurement rotates with sign(w0) = sign(theta) so that "
    "its duration theta/w0 is non-negative";

SweepSpec bell_base(std::string id, std::string description) {
  SweepSpec s;
  s.scenario_id = std::move(id);
  s.description = std::move(description);
  s.kind = ScenarioKind::Bell;
  s.quad = QuadratureSpec::gauss_hermite(64);
  s.notes.emplace_back("w0_sign", kSignNote);
  return s;
}

SweepSpec distribution_preset(std::string id, std::string description, JointParams params) {
  SweepSpec s;
  s.scenario_id = std::move(id);
  s.description = std::move(description);
  s.kind = ScenarioKind::Distribution;
  s.distribution = params;
  s.variable = SweepVariable::Theta;
  // An even point count keeps theta = 0, where the law jumps, off the grid.
  s.grid = Grid::linear(-5.0, 5.0, 400);
  s.quad = QuadratureSpec::adaptive_simpson(1e-9, 40, 1e-8);
  return s;
}

SweepSpec fig1() {
  SweepSpec s = bell_base("fig1", "Bell value vs frequency fuzziness; |B| below 2 can grow with delta_w");
  s.bell.theta_a = 0.0;
  s.bell.theta_a_prime = kPi / 8.0;
  s.bell.theta_b = 0.0;
  s.bell.theta_b_prime = -kPi / 8.0;
  s.bell.model_a = s.bell.model_b = FuzzinessModel::frequency(0.0);
  s.bell.w0_a = s.bell.w0_b = std::sqrt(2.0) * kPi / 8.0;
  s.variable = SweepVariable::DeltaW;
  s.grid = Grid::linear(0.0, 2.0, 201);
  s.notes.emplace_back("grid_range",
                       "delta_w in [0, 2] is a chosen range bracketing the maximum near 0.589, not source data");
  return s;
}

SweepSpec fig5_like(std::string id, std::string description, double delta_w, double w0) {
  SweepSpec s = bell_base(std::move(id), std::move(description));
  s.bell.theta_a = -kPi / 8.0;
  s.bell.theta_a_prime = kPi / 8.0;
  s.bell.theta_b = 0.0;
  s.bell.theta_b_prime = kPi / 2.0;
  s.bell.model_a = s.bell.model_b = FuzzinessModel::frequency(delta_w);
  s.bell.w0_a = s.bell.w0_b = w0;
  s.noise = NoiseSpec{0.0, true, false};
  s.variable = SweepVariable::Gamma;
  s.grid = Grid::linear(0.0, 3.0, 61);
  s.notes.emplace_back("noise", "quasi-static telegraph noise (one +/-gamma draw per run) on side a only");
  return s;
}

SweepSpec fig7() {
  SweepSpec s = bell_base("fig7", "Decohered Bell value vs timing fuzziness at gamma = 1");
  s.bell.theta_a = 0.0;
  s.bell.theta_a_prime = kPi / 4.0;
  s.bell.theta_b = 7.0 * kPi / 8.0;
  s.bell.theta_b_prime = kPi / 8.0;
  s.bell.model_a = s.bell.model_b = FuzzinessModel::timing(0.0);
  s.bell.w0_a = s.bell.w0_b = 1.0;
  s.noise = NoiseSpec{1.0, true, false};
  s.variable = SweepVariable::DeltaT;
  s.grid = Grid::linear(0.0, 2.0, 81);
  s.notes.emplace_back("noise", "timing fuzziness on both sides; quasi-static telegraph noise on side a only");
  return s;
}

SweepSpec smallangle() {
  SweepSpec s = bell_base("smallangle", "Small primed angles lambda: |B| stays above 2 for any delta_w");
  s.bell.theta_a = s.bell.theta_b = 0.0;
  s.bell.theta_a_prime = s.bell.theta_b_prime = 0.01;
  s.bell.model_a = s.bell.model_b = FuzzinessModel::frequency(1.0);
  s.bell.w0_a = s.bell.w0_b = 1.0;
  s.variable = SweepVariable::Lambda;
  s.grid = Grid::list({0.01, 0.02, 0.05, 0.1});
  return s;
}

SweepSpec eq9_pathology() {
  SweepSpec s = bell_base("eq9-pathology",
                          "Independent per-term fuzziness: undamped first three terms, fourth term damped away");
  s.bell.theta_a = s.bell.theta_b = 0.0;
  s.bell.theta_a_prime = s.bell.theta_b_prime = 2.0 * kPi;
  s.bell.variant = BellVariant::PerTerm;
  // exp(-2 * 4^2) ~ 1.3e-14 removes the fourth term.
  s.bell.per_term_overrides = PerTermSigmas{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0, 0.0};
  s.variable = SweepVariable::Lambda;
  s.grid = Grid::linear(0.0, 2.0 * kPi, 65);
  s.notes.emplace_back("fourth_term", "fourth-term sigma 4 stands in for a vanishing rotation frequency");
  return s;
}

SweepSpec stepscaling() {
  SweepSpec s = bell_base("stepscaling", "Bell value vs number of rotation steps under frequency fuzziness");
  s.bell.theta_a = 0.0;
  s.bell.theta_a_prime = kPi / 4.0;
  s.bell.theta_b = -kPi / 8.0;
  s.bell.theta_b_prime = kPi / 8.0;
  s.bell.model_a = s.bell.model_b = FuzzinessModel::frequency(0.5);
  s.bell.w0_a = s.bell.w0_b = 1.0;
  s.variable = SweepVariable::Steps;
  s.grid = Grid::linear(1.0, 10.0, 10);
  return s;
}

struct PresetEntry {
  const char* id;
  const char* anchor;
  SweepSpec (*make)();
};

const std::vector<PresetEntry>& registry() {
  static const std::vector<PresetEntry> entries = {
      {"fig1", "Figure 1: theta_a=theta_b=0, theta_a'=pi/8, theta_b'=-pi/8, |w0|=sqrt(2)pi/8", fig1},
      {"fig2", "Figure 2: w0=1, t0=pi/4, delta_w=0.6, delta_t=0.6",
       [] {
         return distribution_preset("fig2", "Joint frequency+timing angle law; jump at theta = 0",
                                    {1.0, kPi / 4.0, 0.6, 0.6});
       }},
      {"fig3", "Figure 3: w0=1, t0=pi/4, delta_w=1, delta_t=1",
       [] {
         return distribution_preset("fig3", "Joint angle law with larger spreads; peak pulled towards 0",
                                    {1.0, kPi / 4.0, 1.0, 1.0});
       }},
      {"fig4", "Figure 4: w0=1, t0=0, delta_w=1, delta_t=1",
       [] {
         return distribution_preset("fig4", "Joint angle law at t0 = 0; continuous at theta = 0",
                                    {1.0, 0.0, 1.0, 1.0});
       }},
      {"fig5", "Figure 5: theta_a=-pi/8, theta_b=0, theta_a'=pi/8, theta_b'=pi/2, delta_w=1, |w0|=1",
       [] { return fig5_like("fig5", "Decohered Bell value vs noise strength gamma", 1.0, 1.0); }},
      {"fig6", "Figure 6: as figure 5 with delta_w=0.5, |w0|=0.5",
       [] { return fig5_like("fig6", "Decohered Bell value vs gamma; noise can raise |B|", 0.5, 0.5); }},
      {"fig7", "Figure 7: theta_a=0, theta_b=7pi/8, theta_a'=pi/4, theta_b'=pi/8, gamma=1, |w0|=1", fig7},
      {"smallangle", "Small-angle law |B| = 2 + 4 lambda^2 + ...", smallangle},
      {"eq9-pathology", "Per-term fuzziness with theta'=2pi reaches |B| ~ 3", eq9_pathology},
      {"stepscaling", "Frequency fuzziness shrinks as 1/sqrt(N) with N rotation steps", stepscaling},
  };
  return entries;
}

}  // namespace

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  for (const auto& e : registry()) {
    const SweepSpec s = e.make();
    out.push_back({e.id, s.description, e.anchor});
  }
  return out;
}

SweepSpec preset(const std::string& id) {
  for (const auto& e : registry()) {
    if (id == e.id) {
      SweepSpec s = e.make();
      s.validate();
      return s;
    }
  }
  std::string known;
  for (const auto& e : registry()) known += fmt::format("{}{}", known.empty() ? "" : ", ", e.id);
  fail(ErrorKind::Usage, fmt::format("unknown scenario '{}' (known: {})", id, known));
}

}  // namespace fuzzyref
