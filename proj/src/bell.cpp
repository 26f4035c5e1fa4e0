#include "fuzzyref/bell.hpp"

#include <cmath>

#include <fmt/format.h>

namespace fuzzyref {

const char* to_string(BellVariant variant) noexcept {
  switch (variant) {
    case BellVariant::PerSetting:
      return "per_setting";
    case BellVariant::PerTerm:
      return "per_term";
  }
  return "unknown";
}

BellVariant parse_bell_variant(const std::string& label) {
  if (label == "per_setting") return BellVariant::PerSetting;
  if (label == "per_term") return BellVariant::PerTerm;
  fail(ErrorKind::Usage, fmt::format("unknown Bell variant '{}' (per_setting, per_term)", label));
}

void BellConfig::validate() const {
  for (double theta : {theta_a, theta_a_prime, theta_b, theta_b_prime})
    if (!std::isfinite(theta)) fail(ErrorKind::Usage, "Bell angles must be finite");
  if (!(w0_a > 0.0) || !(w0_b > 0.0) || !std::isfinite(w0_a) || !std::isfinite(w0_b))
    fail(ErrorKind::Usage, fmt::format("|w0| must be finite and positive on both sides (got {}, {})", w0_a, w0_b));
  if (steps_a < 1 || steps_b < 1) fail(ErrorKind::Usage, "steps must be >= 1 on both sides");
  if (variant == BellVariant::PerTerm) {
    if (!per_term_overrides) fail(ErrorKind::Usage, "the per-term Bell variant needs eight explicit sigmas");
    for (double s : *per_term_overrides)
      if (!(s >= 0.0) || !std::isfinite(s)) fail(ErrorKind::Usage, "per-term sigmas must be finite and >= 0");
  } else if (per_term_overrides) {
    fail(ErrorKind::Usage, "per-term sigmas are only allowed with the per_term variant");
  }
}

MeasurementSetting BellConfig::setting_a() const {
  return MeasurementSetting::aligned(theta_a, w0_a, steps_a, model_a);
}
MeasurementSetting BellConfig::setting_a_prime() const {
  return MeasurementSetting::aligned(theta_a_prime, w0_a, steps_a, model_a);
}
MeasurementSetting BellConfig::setting_b() const {
  return MeasurementSetting::aligned(theta_b, w0_b, steps_b, model_b);
}
MeasurementSetting BellConfig::setting_b_prime() const {
  return MeasurementSetting::aligned(theta_b_prime, w0_b, steps_b, model_b);
}

BellBreakdown BellBreakdown::from_terms(double e1, double e2, double e3, double e4) {
  const double b = e1 + e2 + e3 - e4;
  return {e1, e2, e3, e4, b, std::abs(b)};
}

double coarsened_correlation(double theta_a, double theta_b, double sigma_a, double sigma_b) {
  if (!(sigma_a >= 0.0) || !(sigma_b >= 0.0)) fail(ErrorKind::Domain, "correlation sigmas must be >= 0");
  return -std::exp(-2.0 * (sigma_a * sigma_a + sigma_b * sigma_b)) * std::cos(2.0 * (theta_a + theta_b));
}

BellBreakdown bell_value(const BellConfig& config) {
  config.validate();
  if (config.variant != BellVariant::PerSetting)
    fail(ErrorKind::Usage, "bell_value evaluates the per-setting variant; use bell_value_per_term");
  if (config.model_a.kind() == FuzzinessKind::Joint || config.model_b.kind() == FuzzinessKind::Joint)
    fail(ErrorKind::Unsupported, "Bell values are not defined for the joint frequency+timing model");

  const double sa = effective_sigma(config.setting_a());
  const double sap = effective_sigma(config.setting_a_prime());
  const double sb = effective_sigma(config.setting_b());
  const double sbp = effective_sigma(config.setting_b_prime());
  return BellBreakdown::from_terms(coarsened_correlation(config.theta_a, config.theta_b, sa, sb),
                                   coarsened_correlation(config.theta_a_prime, config.theta_b, sap, sb),
                                   coarsened_correlation(config.theta_a, config.theta_b_prime, sa, sbp),
                                   coarsened_correlation(config.theta_a_prime, config.theta_b_prime, sap, sbp));
}

BellBreakdown bell_value_per_term(const BellConfig& config) {
  if (config.variant != BellVariant::PerTerm || !config.per_term_overrides)
    fail(ErrorKind::Usage, "bell_value_per_term needs the per_term variant with eight sigmas");
  config.validate();
  const PerTermSigmas& s = *config.per_term_overrides;
  return BellBreakdown::from_terms(coarsened_correlation(config.theta_a, config.theta_b, s[0], s[1]),
                                   coarsened_correlation(config.theta_a_prime, config.theta_b, s[2], s[3]),
                                   coarsened_correlation(config.theta_a, config.theta_b_prime, s[4], s[5]),
                                   coarsened_correlation(config.theta_a_prime, config.theta_b_prime, s[6], s[7]));
}

double bell_derivative_dw(const BellConfig& config) {
  config.validate();
  if (config.variant != BellVariant::PerSetting)
    fail(ErrorKind::Unsupported, "the fuzziness derivative is defined for the per-setting variant");
  if (config.model_a.kind() != FuzzinessKind::FrequencyOnly || config.model_b.kind() != FuzzinessKind::FrequencyOnly)
    fail(ErrorKind::Unsupported, "the delta_w derivative needs frequency fuzziness on both sides");
  const double dw = config.model_a.delta_w();
  if (config.model_b.delta_w() != dw)
    fail(ErrorKind::Usage, "the delta_w derivative needs the same delta_w on both sides");

  const BellBreakdown bd = bell_value(config);
  const double ka = 1.0 / (config.w0_a * config.w0_a * config.steps_a);
  const double kb = 1.0 / (config.w0_b * config.w0_b * config.steps_b);
  auto weight = [&](double ta, double tb) { return ta * ta * ka + tb * tb * kb; };
  const double bracket = bd.e1 * weight(config.theta_a, config.theta_b) +
                         bd.e2 * weight(config.theta_a_prime, config.theta_b) +
                         bd.e3 * weight(config.theta_a, config.theta_b_prime) -
                         bd.e4 * weight(config.theta_a_prime, config.theta_b_prime);
  return -4.0 * dw * bracket;
}

}  // namespace fuzzyref
