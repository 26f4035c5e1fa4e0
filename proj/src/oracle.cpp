// Monte Carlo re-evaluation of scans. Nothing here goes through the
// operator algebra or the quadrature code: each run draws the physical
// parameters, rotates Bloch vectors directly and averages.

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include <fmt/format.h>

#include "fuzzyref/parallel.hpp"
#include "fuzzyref/scenario.hpp"

namespace fuzzyref {

namespace {

using Vec3 = std::array<double, 3>;

// Bloch vector of exp(iHt) sigma_z exp(-iHt), H = w sigma_x + beta sigma_z:
// z rotated by -2 Omega t about (w, 0, beta) / Omega.
Vec3 evolved_axis(double w, double beta, double t) {
  const double omega = std::hypot(w, beta);
  if (omega == 0.0) return {0.0, 0.0, 1.0};
  const double nx = w / omega;
  const double nz = beta / omega;
  const double phi = -2.0 * omega * t;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {nx * nz * (1.0 - c), -nx * s, c + nz * nz * (1.0 - c)};
}

// Correlation tensor of the Bell state is diag(1, 1, -1).
double pair_correlation(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] - a[2] * b[2]; }

Vec3 axis_from_angle(double alpha) { return {0.0, std::sin(2.0 * alpha), std::cos(2.0 * alpha)}; }

// One experimental run of one arm: N sub-rotations with independently
// fuzzy frequency or duration, and for a noisy arm one telegraph sign.
Vec3 draw_arm(const MeasurementSetting& m, bool noisy, double gamma, RandomStream& rng) {
  const FuzzinessModel& model = m.model();
  const int n = m.steps();
  const double t0 = m.duration();
  const double w0 = m.w0();
  if (noisy) {
    const double beta = gamma * rng.sign();
    if (model.kind() == FuzzinessKind::FrequencyOnly) return evolved_axis(rng.normal(w0, model.delta_w()), beta, t0);
    return evolved_axis(w0, beta, rng.normal(t0, model.delta_t()));
  }
  double angle = 0.0;
  if (model.kind() == FuzzinessKind::FrequencyOnly) {
    for (int j = 0; j < n; ++j) angle += rng.normal(w0, model.delta_w()) * (t0 / n);
  } else {
    for (int j = 0; j < n; ++j) angle += w0 * rng.normal(t0 / n, model.delta_t());
  }
  return axis_from_angle(angle);
}

double draw_bell(const PointConfig& p, RandomStream& rng) {
  const BellConfig& b = p.bell;
  const std::array<double, 4> sign{1.0, 1.0, 1.0, -1.0};
  double total = 0.0;
  if (b.variant == BellVariant::PerTerm) {
    const PerTermSigmas& s = *b.per_term_overrides;
    const std::array<std::array<double, 2>, 4> angles{{{b.theta_a, b.theta_b},
                                                       {b.theta_a_prime, b.theta_b},
                                                       {b.theta_a, b.theta_b_prime},
                                                       {b.theta_a_prime, b.theta_b_prime}}};
    for (int i = 0; i < 4; ++i) {
      const Vec3 ra = axis_from_angle(rng.normal(angles[i][0], s[2 * i]));
      const Vec3 rb = axis_from_angle(rng.normal(angles[i][1], s[2 * i + 1]));
      total += sign[i] * pair_correlation(ra, rb);
    }
    return total;
  }
  const NoiseSpec noise = p.noise.value_or(NoiseSpec{0.0, false, false});
  const std::array<MeasurementSetting, 4> as{b.setting_a(), b.setting_a_prime(), b.setting_a(), b.setting_a_prime()};
  const std::array<MeasurementSetting, 4> bs{b.setting_b(), b.setting_b(), b.setting_b_prime(), b.setting_b_prime()};
  for (int i = 0; i < 4; ++i) {
    const Vec3 ra = draw_arm(as[i], noise.side_a, noise.gamma, rng);
    const Vec3 rb = draw_arm(bs[i], noise.side_b, noise.gamma, rng);
    total += sign[i] * pair_correlation(ra, rb);
  }
  return total;
}

// Sign-weighted box-kernel estimate of the joint angle law at every grid
// point from one shared set of (w, t) draws. Integer tallies make the
// result independent of scheduling.
void distribution_estimates(const SweepSpec& spec, const std::vector<double>& xs, std::uint64_t samples,
                            std::uint64_t seed, unsigned workers, std::vector<OraclePoint>& points) {
  const JointParams& d = spec.distribution;
  const double half = 0.5 * kDensityKernelWidth;
  std::vector<std::int64_t> signed_sum(xs.size(), 0);
  std::vector<std::int64_t> hits(xs.size(), 0);
  std::mutex merge;

  const std::uint64_t blocks = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  parallel_for(blocks, workers, [&](std::size_t blk) {
    RandomStream rng(seed, blk);
    const std::uint64_t n = std::min<std::uint64_t>(kMonteCarloBlock, samples - blk * kMonteCarloBlock);
    std::vector<std::int64_t> local_sum(xs.size(), 0);
    std::vector<std::int64_t> local_hits(xs.size(), 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      const double w = rng.normal(d.w0, d.delta_w);
      const double t = rng.normal(d.t0, d.delta_t);
      const double theta = w * t;
      const std::int64_t weight = w > 0.0 ? 1 : (w < 0.0 ? -1 : 0);
      // Grid points x with x - half <= theta < x + half.
      auto it = std::upper_bound(xs.begin(), xs.end(), theta - half);
      for (; it != xs.end() && *it - half <= theta; ++it) {
        const std::size_t k = static_cast<std::size_t>(it - xs.begin());
        local_sum[k] += weight;
        local_hits[k] += weight != 0;
      }
    }
    std::lock_guard lock(merge);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      signed_sum[k] += local_sum[k];
      hits[k] += local_hits[k];
    }
  });

  const double nd = static_cast<double>(samples);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double mean = static_cast<double>(signed_sum[k]) / nd;
    const double second = static_cast<double>(hits[k]) / nd;
    points[k].estimate = mean / kDensityKernelWidth;
    // At least one event's worth of spread, so empty bins in the far
    // tails are not read as exact zeros.
    const double var = std::max(second - mean * mean, 1.0 / nd);
    points[k].standard_error = std::sqrt(var / nd) / kDensityKernelWidth;
  }
}

}  // namespace

OracleReport run_oracle_check(const SweepSpec& spec, std::uint64_t samples, std::uint64_t seed, unsigned workers) {
  if (samples < 10'000) fail(ErrorKind::Usage, fmt::format("oracle check needs at least 10000 samples, got {}", samples));
  const ScanResult scan = run_scenario([&] {
    SweepSpec s = spec;
    s.output_path.clear();
    return s;
  }(), workers);

  const std::vector<double> xs = spec.grid.resolve();
  OracleReport report;
  report.scenario_id = spec.scenario_id;
  report.samples = samples;
  report.seed = seed;
  report.points.resize(xs.size());
  const std::size_t value_column = spec.kind == ScenarioKind::Bell ? 5 : 1;  // b or density
  for (std::size_t k = 0; k < xs.size(); ++k) {
    report.points[k].x = xs[k];
    report.points[k].value = scan.rows[k][value_column];
  }

  if (spec.kind == ScenarioKind::Distribution) {
    distribution_estimates(spec, xs, samples, seed, workers, report.points);
  } else {
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const PointConfig p = resolve_point(spec, xs[k]);
      const IntegralResult r =
          mc_sample_mean([&](RandomStream& rng) { return draw_bell(p, rng); }, samples, derive_seed(seed, k), workers);
      report.points[k].estimate = r.value;
      report.points[k].standard_error = r.error_estimate;
    }
  }

  std::size_t within = 0;
  report.max_z = -1.0;
  for (OraclePoint& pt : report.points) {
    // Deterministic points (zero spread) must agree to rounding.
    const double floor = 1e-12 * std::max(1.0, std::abs(pt.value));
    pt.z = std::abs(pt.value - pt.estimate) / std::max(pt.standard_error, floor);
    if (pt.z <= 3.0) ++within;
    if (pt.z > report.max_z) {
      report.max_z = pt.z;
      report.worst_x = pt.x;
    }
  }
  report.fraction_within_3 = static_cast<double>(within) / static_cast<double>(report.points.size());
  report.passed = report.fraction_within_3 >= 0.99 && report.max_z <= 5.0;
  return report;
}

}  // namespace fuzzyref
