#pragma once

#include <string>

#include "fuzzyref/quadrature.hpp"

namespace fuzzyref {

enum class FuzzinessKind { FrequencyOnly, TimingOnly, Joint };

const char* to_string(FuzzinessKind kind) noexcept;
/// "frequency", "timing" or "joint".
FuzzinessKind parse_fuzziness_kind(const std::string& label);

/// Gaussian uncertainty in the rotation frequency (delta_w, rad/time), the
/// rotation duration (delta_t, time), or both. Unused deltas are zero.
class FuzzinessModel {
 public:
  static FuzzinessModel frequency(double delta_w);
  static FuzzinessModel timing(double delta_t);
  static FuzzinessModel joint(double delta_w, double delta_t);

  FuzzinessKind kind() const noexcept { return kind_; }
  double delta_w() const noexcept { return delta_w_; }
  double delta_t() const noexcept { return delta_t_; }

  bool operator==(const FuzzinessModel&) const = default;

 private:
  FuzzinessModel(FuzzinessKind kind, double dw, double dt);

  FuzzinessKind kind_ = FuzzinessKind::FrequencyOnly;
  double delta_w_ = 0.0;
  double delta_t_ = 0.0;
};

/// One measurement arm: rotate by theta at nominal frequency w0 in `steps`
/// equal sub-rotations. The duration theta/w0 must be non-negative.
class MeasurementSetting {
 public:
  MeasurementSetting(double theta, double w0, int steps, FuzzinessModel model);

  /// Picks the sign of w0 to match theta, so that the duration is
  /// non-negative; w0_magnitude is |w0| and must be positive.
  static MeasurementSetting aligned(double theta, double w0_magnitude, int steps, FuzzinessModel model);

  double theta() const noexcept { return theta_; }
  double w0() const noexcept { return w0_; }
  int steps() const noexcept { return steps_; }
  const FuzzinessModel& model() const noexcept { return model_; }
  /// theta / w0
  double duration() const noexcept { return theta_ / w0_; }

 private:
  double theta_;
  double w0_;
  int steps_;
  FuzzinessModel model_;
};

/// Parameters of the non-Gaussian angle law obtained when frequency and
/// timing are both fuzzy.
struct JointParams {
  double w0 = 1.0;
  double t0 = 0.0;
  double delta_w = 1.0;
  double delta_t = 1.0;

  bool operator==(const JointParams&) const = default;
};

/// Distribution of the realised rotation angle.
class AngleDistribution {
 public:
  enum class Kind { Gaussian, JointNumeric };

  static AngleDistribution gaussian(double mean, double sigma);
  /// Requires delta_w > 0 and delta_t > 0; otherwise the law is Gaussian and
  /// must be built with gaussian().
  static AngleDistribution joint_numeric(const JointParams& params);

  Kind kind() const noexcept { return kind_; }
  double mean() const noexcept { return mean_; }
  /// Gaussian only.
  double sigma() const noexcept { return sigma_; }
  /// JointNumeric only.
  const JointParams& joint() const noexcept { return joint_; }

 private:
  Kind kind_ = Kind::Gaussian;
  double mean_ = 0.0;
  double sigma_ = 0.0;
  JointParams joint_{};
};

/// Spread of the realised angle:
///   frequency: delta_w |theta| / (|w0| sqrt(N))
///   timing:    delta_t |w0| sqrt(N)
/// Joint models have no single sigma (Unsupported).
double effective_sigma(const MeasurementSetting& setting);

/// Normal(theta0, sigma) density at theta; sigma must be > 0.
double gaussian_kernel(double theta, double theta0, double sigma);

/// Gaussian AngleDistribution centred on the target angle with
/// effective_sigma(setting).
AngleDistribution compose_steps(const MeasurementSetting& setting);

/// Inner w-integral of the joint angle law before the absolute value:
///
///   X(theta) = int dw  exp(-(w-w0)^2/(2 dw^2) - (theta/w - t0)^2/(2 dt^2))
///                      / (2 pi dt dw w)
///
/// over w in [w0 - 8dw, w0 + 8dw] minus |w| < quad.singular_window.
/// Each side of the pole is integrated in s = ln|w|, which removes the 1/w
/// factor. quad must be AdaptiveSimpson.
///
/// When t0 != 0 the law jumps at theta = 0; the jump is carried by
/// w ~ theta/t0, so for |theta| below about window * (|t0| + 3 dt) it falls
/// inside the excluded window and the one-sided limits are lost.
IntegralResult joint_angle_signed(double theta, const JointParams& params, const QuadratureSpec& quad);

/// |X(theta)|: the angle density as evaluated for the joint model. Its total
/// mass is not 1 when the frequency law reaches w < 0.
IntegralResult joint_angle_density(double theta, const JointParams& params, const QuadratureSpec& quad);

}  // namespace fuzzyref
