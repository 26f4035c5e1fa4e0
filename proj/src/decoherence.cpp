#include "fuzzyref/decoherence.hpp"

#include <cmath>

#include <fmt/format.h>

namespace fuzzyref {

void NoiseSpec::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    fail(ErrorKind::Usage, fmt::format("noise gamma must be finite and >= 0, got {}", gamma));
}

SquareMatrix rtn_averaged_observable(double w, double t, double gamma) {
  SquareMatrix avg = evolve_observable(w, gamma, t) + evolve_observable(w, -gamma, t);
  avg *= 0.5;
  return avg;
}

SquareMatrix coarsened_arm_observable(const MeasurementSetting& setting, bool noisy, double gamma,
                                      const QuadratureSpec& quad) {
  if (quad.method != QuadratureMethod::GaussHermite)
    fail(ErrorKind::Usage, "decohered correlations are integrated with gauss_hermite quadrature");
  quad.validate();

  const FuzzinessModel& model = setting.model();
  if (model.kind() == FuzzinessKind::Joint)
    fail(ErrorKind::Unsupported, "decohered correlations support frequency or timing fuzziness, not both");
  if (noisy && setting.steps() > 1)
    fail(ErrorKind::Unsupported, "a noisy arm must rotate in a single step");

  auto observable = [&](double w, double t) {
    return noisy ? rtn_averaged_observable(w, t, gamma) : evolve_observable(w, 0.0, t);
  };
  const double root_n = std::sqrt(static_cast<double>(setting.steps()));
  const double t0 = setting.duration();
  const double w0 = setting.w0();

  if (model.kind() == FuzzinessKind::FrequencyOnly) {
    // N sub-rotations of duration t0/N at independent frequencies: the
    // total angle is t0 times their mean.
    return gauss_hermite_average([&](double w) { return observable(w, t0); }, w0, model.delta_w() / root_n,
                                 quad.nodes)
        .hermitian_part();
  }
  return gauss_hermite_average([&](double t) { return observable(w0, t); }, t0, model.delta_t() * root_n,
                               quad.nodes)
      .hermitian_part();
}

double decohered_coarsened_correlation(const MeasurementSetting& setting_a, const MeasurementSetting& setting_b,
                                       const NoiseSpec& noise, const QuadratureSpec& quad) {
  noise.validate();
  const SquareMatrix a = coarsened_arm_observable(setting_a, noise.side_a, noise.gamma, quad);
  const SquareMatrix b = coarsened_arm_observable(setting_b, noise.side_b, noise.gamma, quad);
  return pair_expectation(TwoQubitState::bell_state(), a, b);
}

BellBreakdown decohered_bell(const BellConfig& config, const NoiseSpec& noise, const QuadratureSpec& quad) {
  config.validate();
  noise.validate();
  if (config.variant != BellVariant::PerSetting)
    fail(ErrorKind::Unsupported, "decohered Bell values use the per-setting variant");

  const SquareMatrix a = coarsened_arm_observable(config.setting_a(), noise.side_a, noise.gamma, quad);
  const SquareMatrix ap = coarsened_arm_observable(config.setting_a_prime(), noise.side_a, noise.gamma, quad);
  const SquareMatrix b = coarsened_arm_observable(config.setting_b(), noise.side_b, noise.gamma, quad);
  const SquareMatrix bp = coarsened_arm_observable(config.setting_b_prime(), noise.side_b, noise.gamma, quad);
  const TwoQubitState psi = TwoQubitState::bell_state();
  return BellBreakdown::from_terms(pair_expectation(psi, a, b), pair_expectation(psi, ap, b),
                                   pair_expectation(psi, a, bp), pair_expectation(psi, ap, bp));
}

}  // namespace fuzzyref
