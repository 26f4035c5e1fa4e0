#pragma once

#include <array>
#include <optional>
#include <string>

#include "fuzzyref/coarsening.hpp"

namespace fuzzyref {

enum class BellVariant {
  PerSetting,  // each angle carries the sigma its side's model gives it
  PerTerm,     // the eight sigmas are chosen freely, term by term
};

const char* to_string(BellVariant variant) noexcept;
BellVariant parse_bell_variant(const std::string& label);

/// Explicit sigmas for the per-term variant, ordered
/// {a1, b1, a2, b2, a3, b3, a4, b4}: term i pairs sigma a_i with b_i.
using PerTermSigmas = std::array<double, 8>;

/// Four measurement angles plus, per side, the fuzziness model, |w0| and
/// the number of rotation steps. The sign of each measurement's w0 follows
/// the sign of its angle.
struct BellConfig {
  double theta_a = 0.0;
  double theta_a_prime = 0.0;
  double theta_b = 0.0;
  double theta_b_prime = 0.0;
  FuzzinessModel model_a = FuzzinessModel::frequency(0.0);
  FuzzinessModel model_b = FuzzinessModel::frequency(0.0);
  double w0_a = 1.0;
  double w0_b = 1.0;
  int steps_a = 1;
  int steps_b = 1;
  BellVariant variant = BellVariant::PerSetting;
  std::optional<PerTermSigmas> per_term_overrides;

  void validate() const;

  MeasurementSetting setting_a() const;
  MeasurementSetting setting_a_prime() const;
  MeasurementSetting setting_b() const;
  MeasurementSetting setting_b_prime() const;

  bool operator==(const BellConfig&) const = default;
};

struct BellBreakdown {
  double e1 = 0.0;  // (theta_a,  theta_b)
  double e2 = 0.0;  // (theta_a', theta_b)
  double e3 = 0.0;  // (theta_a,  theta_b')
  double e4 = 0.0;  // (theta_a', theta_b')
  double b = 0.0;
  double abs_b = 0.0;

  static BellBreakdown from_terms(double e1, double e2, double e3, double e4);
};

/// Bell-state correlation of two Gaussian-smeared rotated observables:
///   -exp(-2 (sigma_a^2 + sigma_b^2)) cos(2 (theta_a + theta_b)).
double coarsened_correlation(double theta_a, double theta_b, double sigma_a, double sigma_b);

/// B = E1 + E2 + E3 - E4 with each sigma from its side's model evaluated at
/// that term's own angle. Requires the PerSetting variant and no joint model.
BellBreakdown bell_value(const BellConfig& config);

/// Same combination with the eight explicit sigmas of per_term_overrides.
BellBreakdown bell_value_per_term(const BellConfig& config);

/// dB/d(delta_w) of the closed form when both sides are frequency-fuzzy
/// with a common delta_w:
///   sum_i s_i E_i * (-4 delta_w) (theta_ai^2/(w0_a^2 N_a) + theta_bi^2/(w0_b^2 N_b))
/// with s = (+, +, +, -).
double bell_derivative_dw(const BellConfig& config);

}  // namespace fuzzyref
