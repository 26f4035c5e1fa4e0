#pragma once

#include "fuzzyref/bell.hpp"
#include "fuzzyref/spin_core.hpp"

namespace fuzzyref {

/// Quasi-static random telegraph noise: each run sees a constant
/// beta = +gamma or -gamma (equal odds) coupling through sigma_z, while the
/// measurement axis is being rotated. Only the listed sides are exposed.
struct NoiseSpec {
  double gamma = 0.0;
  bool side_a = true;
  bool side_b = false;

  void validate() const;
  bool operator==(const NoiseSpec&) const = default;
};

/// (evolve_observable(w, +gamma, t) + evolve_observable(w, -gamma, t)) / 2
SquareMatrix rtn_averaged_observable(double w, double t, double gamma);

/// The measured observable of one arm averaged over its fuzziness:
/// frequency models integrate w ~ Normal(w0, delta_w/sqrt(N)) at the fixed
/// duration theta/w0; timing models integrate the duration
/// t ~ Normal(theta/w0, delta_t sqrt(N)) at fixed w0. Noisy arms use
/// rtn_averaged_observable and must rotate in a single step.
/// quad must be GaussHermite.
SquareMatrix coarsened_arm_observable(const MeasurementSetting& setting, bool noisy, double gamma,
                                      const QuadratureSpec& quad);

double decohered_coarsened_correlation(const MeasurementSetting& setting_a, const MeasurementSetting& setting_b,
                                       const NoiseSpec& noise, const QuadratureSpec& quad);

/// The four decohered correlations of the per-setting Bell combination.
BellBreakdown decohered_bell(const BellConfig& config, const NoiseSpec& noise, const QuadratureSpec& quad);

}  // namespace fuzzyref
