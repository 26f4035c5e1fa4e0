#include "fuzzyref/coarsening.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace fuzzyref {

namespace {

void require_delta(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value))
    fail(ErrorKind::Usage, fmt::format("{} must be finite and >= 0, got {}", name, value));
}

void validate_joint(const JointParams& p) {
  if (!std::isfinite(p.w0) || !std::isfinite(p.t0)) fail(ErrorKind::Usage, "joint law needs finite w0 and t0");
  if (!(p.delta_w > 0.0) || !(p.delta_t > 0.0) || !std::isfinite(p.delta_w) || !std::isfinite(p.delta_t))
    fail(ErrorKind::Usage,
         fmt::format("joint law needs delta_w > 0 and delta_t > 0 (got {}, {}); use a Gaussian otherwise",
                     p.delta_w, p.delta_t));
}

}  // namespace

const char* to_string(FuzzinessKind kind) noexcept {
  switch (kind) {
    case FuzzinessKind::FrequencyOnly:
      return "frequency";
    case FuzzinessKind::TimingOnly:
      return "timing";
    case FuzzinessKind::Joint:
      return "joint";
  }
  return "unknown";
}

FuzzinessKind parse_fuzziness_kind(const std::string& label) {
  if (label == "frequency") return FuzzinessKind::FrequencyOnly;
  if (label == "timing") return FuzzinessKind::TimingOnly;
  if (label == "joint") return FuzzinessKind::Joint;
  fail(ErrorKind::Usage, fmt::format("unknown fuzziness model '{}' (frequency, timing, joint)", label));
}

FuzzinessModel::FuzzinessModel(FuzzinessKind kind, double dw, double dt) : kind_(kind), delta_w_(dw), delta_t_(dt) {
  require_delta(dw, "delta_w");
  require_delta(dt, "delta_t");
}

FuzzinessModel FuzzinessModel::frequency(double delta_w) { return {FuzzinessKind::FrequencyOnly, delta_w, 0.0}; }
FuzzinessModel FuzzinessModel::timing(double delta_t) { return {FuzzinessKind::TimingOnly, 0.0, delta_t}; }
FuzzinessModel FuzzinessModel::joint(double delta_w, double delta_t) {
  return {FuzzinessKind::Joint, delta_w, delta_t};
}

MeasurementSetting::MeasurementSetting(double theta, double w0, int steps, FuzzinessModel model)
    : theta_(theta), w0_(w0), steps_(steps), model_(model) {
  if (!std::isfinite(theta)) fail(ErrorKind::Usage, "theta must be finite");
  if (w0 == 0.0 || !std::isfinite(w0)) fail(ErrorKind::Usage, "w0 must be finite and non-zero");
  if (steps < 1) fail(ErrorKind::Usage, fmt::format("steps must be >= 1, got {}", steps));
  if (theta / w0 < 0.0)
    fail(ErrorKind::Usage,
         fmt::format("rotation duration theta/w0 = {:.6g} is negative; choose w0 with the sign of theta", theta / w0));
}

MeasurementSetting MeasurementSetting::aligned(double theta, double w0_magnitude, int steps, FuzzinessModel model) {
  if (!(w0_magnitude > 0.0)) fail(ErrorKind::Usage, fmt::format("|w0| must be positive, got {}", w0_magnitude));
  return {theta, std::signbit(theta) ? -w0_magnitude : w0_magnitude, steps, model};
}

AngleDistribution AngleDistribution::gaussian(double mean, double sigma) {
  require_delta(sigma, "sigma");
  AngleDistribution d;
  d.kind_ = Kind::Gaussian;
  d.mean_ = mean;
  d.sigma_ = sigma;
  return d;
}

AngleDistribution AngleDistribution::joint_numeric(const JointParams& params) {
  validate_joint(params);
  AngleDistribution d;
  d.kind_ = Kind::JointNumeric;
  d.mean_ = params.w0 * params.t0;
  d.joint_ = params;
  return d;
}

double effective_sigma(const MeasurementSetting& setting) {
  const FuzzinessModel& m = setting.model();
  const double root_n = std::sqrt(static_cast<double>(setting.steps()));
  switch (m.kind()) {
    case FuzzinessKind::FrequencyOnly:
      return m.delta_w() * std::abs(setting.theta()) / (std::abs(setting.w0()) * root_n);
    case FuzzinessKind::TimingOnly:
      return m.delta_t() * std::abs(setting.w0()) * root_n;
    case FuzzinessKind::Joint:
      break;
  }
  fail(ErrorKind::Unsupported,
       "the joint frequency+timing model has no single angle sigma; use joint_angle_density");
}

double gaussian_kernel(double theta, double theta0, double sigma) {
  if (!(sigma > 0.0)) fail(ErrorKind::Domain, fmt::format("kernel sigma must be > 0, got {}", sigma));
  const double z = (theta - theta0) / sigma;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

AngleDistribution compose_steps(const MeasurementSetting& setting) {
  return AngleDistribution::gaussian(setting.theta(), effective_sigma(setting));
}

IntegralResult joint_angle_signed(double theta, const JointParams& p, const QuadratureSpec& quad) {
  validate_joint(p);
  if (quad.method != QuadratureMethod::AdaptiveSimpson)
    fail(ErrorKind::Usage, "the joint angle law is evaluated with adaptive_simpson quadrature");
  quad.validate();
  if (!std::isfinite(theta)) fail(ErrorKind::Usage, "theta must be finite");

  const double norm = 1.0 / (2.0 * std::numbers::pi * p.delta_t * p.delta_w);
  // w * integrand, i.e. the integrand in s = ln|w|.
  auto weight = [&](double w) {
    const double zw = (w - p.w0) / p.delta_w;
    const double zt = (theta / w - p.t0) / p.delta_t;
    return norm * std::exp(-0.5 * (zw * zw + zt * zt));
  };

  const double lo = p.w0 - 8.0 * p.delta_w;
  const double hi = p.w0 + 8.0 * p.delta_w;
  const double eps = quad.singular_window;

  IntegralResult total;
  if (hi > eps) {
    const double a = std::log(std::max(lo, eps));
    const double b = std::log(hi);
    if (a < b) {
      const IntegralResult r =
          adaptive_simpson([&](double s) { return weight(std::exp(s)); }, a, b, quad.rel_tol, quad.max_depth);
      total.value += r.value;
      total.error_estimate += r.error_estimate;
      total.evaluations += r.evaluations;
    }
  }
  if (lo < -eps) {
    const double a = std::log(std::max(-hi, eps));
    const double b = std::log(-lo);
    if (a < b) {
      // dw / w = ds on both sides of the pole; w < 0 enters with a minus sign.
      const IntegralResult r =
          adaptive_simpson([&](double s) { return weight(-std::exp(s)); }, a, b, quad.rel_tol, quad.max_depth);
      total.value -= r.value;
      total.error_estimate += r.error_estimate;
      total.evaluations += r.evaluations;
    }
  }
  return total;
}

IntegralResult joint_angle_density(double theta, const JointParams& params, const QuadratureSpec& quad) {
  IntegralResult r = joint_angle_signed(theta, params, quad);
  r.value = std::abs(r.value);
  return r;
}

}  // namespace fuzzyref
