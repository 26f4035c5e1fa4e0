#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fuzzyref/coarsening.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fuzzyref;
using std::numbers::pi;

namespace {

const JointParams kFig2{1.0, pi / 4, 0.6, 0.6};
const JointParams kFig3{1.0, pi / 4, 1.0, 1.0};
const JointParams kFig4{1.0, 0.0, 1.0, 1.0};
const QuadratureSpec kSimpson = QuadratureSpec::adaptive_simpson(1e-10, 40, 1e-8);

double signed_x(double theta, const JointParams& p) { return joint_angle_signed(theta, p, kSimpson).value; }

// The w-integral on a uniform grid, straight from its definition.
double joint_oracle(double theta, const JointParams& p) {
  auto f = [&](double w) {
    if (std::abs(w) < 1e-8) return 0.0;
    const double zw = (w - p.w0) / p.delta_w;
    const double zt = (theta / w - p.t0) / p.delta_t;
    return std::exp(-0.5 * (zw * zw + zt * zt)) / (2.0 * pi * p.delta_w * p.delta_t * w);
  };
  const double lo = p.w0 - 8.0 * p.delta_w, hi = p.w0 + 8.0 * p.delta_w;
  if (lo < 0.0 && hi > 0.0) return oracle::simpson(f, lo, 0.0, 400000) + oracle::simpson(f, 0.0, hi, 400000);
  return oracle::simpson(f, lo, hi, 400000);
}

}  // namespace

TEST_CASE("effective sigma examples") {
  const auto freq = FuzzinessModel::frequency(0.5);
  CHECK(effective_sigma(MeasurementSetting::aligned(pi / 4, 1.0, 1, freq)) == doctest::Approx(0.5 * pi / 4));
  CHECK(effective_sigma(MeasurementSetting::aligned(-pi / 4, 1.0, 4, freq)) == doctest::Approx(0.25 * pi / 4));
  CHECK(effective_sigma(MeasurementSetting::aligned(0.0, 1.0, 1, freq)) == 0.0);
  const auto timing = FuzzinessModel::timing(0.2);
  CHECK(effective_sigma(MeasurementSetting::aligned(1.3, 2.0, 9, timing)) == doctest::Approx(1.2));
  CHECK(effective_sigma(MeasurementSetting::aligned(0.0, 2.0, 1, timing)) == doctest::Approx(0.4));
  CHECK(kind_of([] {
          effective_sigma(MeasurementSetting::aligned(1.0, 1.0, 1, FuzzinessModel::joint(0.1, 0.1)));
        }) == ErrorKind::Unsupported);
}

TEST_CASE("effective sigma scales homogeneously") {
  for (double theta : {-2.0, -0.3, 0.7, 3.0}) {
    for (double k : {0.5, 2.0, 3.0}) {
      const auto f = FuzzinessModel::frequency(0.4);
      const auto t = FuzzinessModel::timing(0.4);
      const double base_f = effective_sigma(MeasurementSetting::aligned(theta, 1.5, 2, f));
      const double base_t = effective_sigma(MeasurementSetting::aligned(theta, 1.5, 2, t));
      CHECK(effective_sigma(MeasurementSetting::aligned(k * theta, 1.5, 2, f)) == doctest::Approx(k * base_f));
      CHECK(effective_sigma(MeasurementSetting::aligned(theta, 1.5 * k, 2, f)) == doctest::Approx(base_f / k));
      CHECK(effective_sigma(MeasurementSetting::aligned(k * theta, 1.5, 2, t)) == doctest::Approx(base_t));
      CHECK(effective_sigma(MeasurementSetting::aligned(theta, 1.5 * k, 2, t)) == doctest::Approx(base_t * k));
      CHECK(effective_sigma(MeasurementSetting::aligned(theta, 1.5, 2, FuzzinessModel::frequency(0.4 * k))) ==
            doctest::Approx(base_f * k));
    }
  }
}

TEST_CASE("simulated multi-step rotations have the composed spread") {
  // Each sub-rotation draws its own frequency (or duration).
  const double theta = 1.1, w0 = 0.8, delta = 0.3;
  const std::uint64_t n = 200'000;
  for (int steps : {1, 2, 5, 10}) {
    CAPTURE(steps);
    for (bool frequency : {true, false}) {
      const auto model = frequency ? FuzzinessModel::frequency(delta) : FuzzinessModel::timing(delta);
      const MeasurementSetting m = MeasurementSetting::aligned(theta, w0, steps, model);
      RandomStream rng(99, steps * 2 + frequency);
      double sum = 0.0, sum2 = 0.0;
      for (std::uint64_t i = 0; i < n; ++i) {
        double angle = 0.0;
        for (int j = 0; j < steps; ++j)
          angle += frequency ? rng.normal(m.w0(), delta) * m.duration() / steps
                             : m.w0() * rng.normal(m.duration() / steps, delta);
        sum += angle;
        sum2 += angle * angle;
      }
      const double mean = sum / n;
      const double sd = std::sqrt((sum2 / n - mean * mean) * n / (n - 1));
      const double expected = effective_sigma(m);
      CHECK(std::abs(mean - theta) < 4.0 * expected / std::sqrt(n));
      CHECK(std::abs(sd - expected) < 3.0 * expected / std::sqrt(2.0 * n));
      const AngleDistribution d = compose_steps(m);
      CHECK(d.kind() == AngleDistribution::Kind::Gaussian);
      CHECK(d.mean() == theta);
      CHECK(d.sigma() == expected);
    }
  }
}

TEST_CASE("measurement settings keep the duration non-negative") {
  const auto f = FuzzinessModel::frequency(0.1);
  CHECK(MeasurementSetting::aligned(-0.5, 2.0, 1, f).w0() == -2.0);
  CHECK(MeasurementSetting::aligned(0.5, 2.0, 1, f).w0() == 2.0);
  CHECK(MeasurementSetting::aligned(-0.5, 2.0, 1, f).duration() == 0.25);
  CHECK(kind_of([&] { MeasurementSetting(0.5, -1.0, 1, f); }) == ErrorKind::Usage);
  CHECK(kind_of([&] { MeasurementSetting(0.5, 0.0, 1, f); }) == ErrorKind::Usage);
  CHECK(kind_of([&] { MeasurementSetting(0.5, 1.0, 0, f); }) == ErrorKind::Usage);
  CHECK(kind_of([&] { MeasurementSetting::aligned(0.5, -1.0, 1, f); }) == ErrorKind::Usage);
  CHECK(kind_of([] { FuzzinessModel::frequency(-0.1); }) == ErrorKind::Usage);
  CHECK(kind_of([] { FuzzinessModel::timing(std::nan("")); }) == ErrorKind::Usage);
  CHECK(kind_of([] { parse_fuzziness_kind("both"); }) == ErrorKind::Usage);
}

TEST_CASE("gaussian kernel is a normalised density") {
  for (double sigma : {0.05, 0.5, 3.0}) {
    const double mass = oracle::simpson([&](double t) { return gaussian_kernel(t, 0.3, sigma); }, 0.3 - 14 * sigma,
                                        0.3 + 14 * sigma, 20000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(gaussian_kernel(0.0, 0.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0 * pi)));
  CHECK(kind_of([] { gaussian_kernel(0.0, 0.0, 0.0); }) == ErrorKind::Domain);
}

TEST_CASE("joint angle law against high-precision reference values") {
  struct Ref {
    const JointParams* p;
    double theta;
    double value;
  };
  // Computed with 30-digit adaptive quadrature of the w-integral.
  const Ref refs[] = {
      {&kFig2, -1e-4, 0.12907719507881846}, {&kFig2, 1e-4, 0.55200877939243575},
      {&kFig2, 0.5, 0.55141701146807967},   {&kFig2, 2.0, 0.12715978735245272},
      {&kFig2, -1.0, 0.0085083888439571065}, {&kFig3, -1e-4, 0.057010119207634211},
      {&kFig3, 1e-4, 0.36777909649636356},  {&kFig3, 0.5, 0.28355720520255915},
      {&kFig3, 2.0, 0.11779715684350365},   {&kFig3, -1.0, 0.021136076772153385},
      {&kFig4, -1e-4, 0.28912057514699623}, {&kFig4, 1e-4, 0.28912057514699623},
      {&kFig4, 0.5, 0.19004004918134813},   {&kFig4, 2.0, 0.053226989974381474},
      {&kFig4, -1.0, 0.12460525103416096},
  };
  for (const Ref& r : refs) {
    CAPTURE(r.theta);
    const double got = signed_x(r.theta, *r.p);
    CHECK(got == doctest::Approx(r.value).epsilon(1e-8));
    CHECK(joint_angle_density(r.theta, *r.p, kSimpson).value == std::abs(got));
  }
}

TEST_CASE("joint angle law against a uniform-grid w integral") {
  for (const JointParams* p : {&kFig2, &kFig3, &kFig4}) {
    for (double theta : {-3.0, -0.4, 0.05, 0.9, 4.0}) {
      CAPTURE(theta);
      CHECK(signed_x(theta, *p) == doctest::Approx(joint_oracle(theta, *p)).epsilon(1e-7));
    }
  }
}

TEST_CASE("joint angle law: jump at zero when t0 != 0, continuity when t0 == 0") {
  const double tol = 1e-10;
  const double jump2 = signed_x(1e-6, kFig2) - signed_x(-1e-6, kFig2);
  CHECK(jump2 > 10.0 * tol);
  CHECK(jump2 == doctest::Approx(0.4229).epsilon(1e-3));
  const double jump4 = std::abs(signed_x(1e-6, kFig4) - signed_x(-1e-6, kFig4));
  CHECK(jump4 < 1e-9);
}

TEST_CASE("the excluded window hides the jump once theta/t0 falls inside it") {
  // The jump comes from w ~ theta/t0; below the window it is cut away.
  const double inside = signed_x(1e-10, kFig2) - signed_x(-1e-10, kFig2);
  CHECK(std::abs(inside) < 0.1);
}

TEST_CASE("larger spreads pull the peak towards zero") {
  double best = -1.0, arg = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double theta = -5.0 + 10.0 * i / 399.0;
    const double v = joint_angle_density(theta, kFig3, kSimpson).value;
    if (v > best) {
      best = v;
      arg = theta;
    }
  }
  CHECK(std::abs(arg) < std::abs(arg - pi / 4));
  // With the smaller spreads of kFig2 the peak stays away from 0.
  CHECK(signed_x(0.213, kFig2) > signed_x(0.0125, kFig2));
}

TEST_CASE("joint angle law integrates to P(w > 0) - P(w < 0)") {
  // The 1/w weight makes the total mass the signed frequency mass.
  for (const JointParams* p : {&kFig2, &kFig3, &kFig4}) {
    const QuadratureSpec inner = QuadratureSpec::adaptive_simpson(1e-11, 40, 1e-8);
    auto x = [&](double t) { return joint_angle_signed(t, *p, inner).value; };
    const double mass = adaptive_simpson(x, -60.0, -1e-12, 1e-9).value + adaptive_simpson(x, 1e-12, 60.0, 1e-9).value;
    CHECK(mass == doctest::Approx(std::erf(p->w0 / (std::sqrt(2.0) * p->delta_w))).epsilon(1e-7));
  }
}

TEST_CASE("mass of the evaluated density on [-5, 5] against Monte Carlo") {
  // |X| over the preset window versus E[sign(w) 1{|w t| <= L}]; X stays
  // positive here, so the two agree. The plain probability of the window
  // is larger, which shows the law is not normalised.
  const double L = 5.0;
  const std::uint64_t n = 2'000'000;
  for (const JointParams* p : {&kFig2, &kFig3, &kFig4}) {
    const QuadratureSpec inner = QuadratureSpec::adaptive_simpson(1e-11, 40, 1e-8);
    auto density = [&](double t) { return joint_angle_density(t, *p, inner).value; };
    const double quad = adaptive_simpson(density, -L, -1e-12, 1e-8).value + adaptive_simpson(density, 1e-12, L, 1e-8).value;
    RandomStream rng(77, 0);
    std::int64_t signed_hits = 0, hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double w = rng.normal(p->w0, p->delta_w);
      const double t = rng.normal(p->t0, p->delta_t);
      if (std::abs(w * t) <= L) {
        ++hits;
        signed_hits += w > 0 ? 1 : -1;
      }
    }
    const double mean = static_cast<double>(signed_hits) / n;
    const double se = std::sqrt((static_cast<double>(hits) / n - mean * mean) / n);
    CHECK(std::abs(quad - mean) < 3.0 * se);
    CHECK(static_cast<double>(hits) / n > quad);
  }
}

TEST_CASE("sign-weighted Monte Carlo density at theta = 0.5") {
  const std::uint64_t n = 10'000'000;
  const double h = 0.01;
  RandomStream rng(2024, 0);
  std::int64_t signed_hits = 0, hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double w = rng.normal(kFig2.w0, kFig2.delta_w);
    const double t = rng.normal(kFig2.t0, kFig2.delta_t);
    if (std::abs(w * t - 0.5) < 0.5 * h) {
      ++hits;
      signed_hits += w > 0 ? 1 : -1;
    }
  }
  const double mean = static_cast<double>(signed_hits) / n;
  const double estimate = mean / h;
  const double se = std::sqrt((static_cast<double>(hits) / n - mean * mean) / n) / h;
  CHECK(std::abs(estimate - signed_x(0.5, kFig2)) < 3.0 * se);
}

TEST_CASE("the excluded window around w = 0 does not matter away from theta = 0") {
  for (double theta : {-1.0, 0.5, 2.0}) {
    const double narrow = joint_angle_signed(theta, kFig3, QuadratureSpec::adaptive_simpson(1e-10, 40, 1e-10)).value;
    const double wide = joint_angle_signed(theta, kFig3, QuadratureSpec::adaptive_simpson(1e-10, 40, 1e-5)).value;
    CHECK(std::abs(narrow - wide) < 1e-9);
  }
}

TEST_CASE("joint law preconditions") {
  CHECK(kind_of([] { joint_angle_signed(0.5, kFig2, QuadratureSpec::gauss_hermite()); }) == ErrorKind::Usage);
  CHECK(kind_of([] { AngleDistribution::joint_numeric({1.0, 0.0, 0.0, 1.0}); }) == ErrorKind::Usage);
  CHECK(kind_of([] { joint_angle_signed(std::nan(""), kFig2, kSimpson); }) == ErrorKind::Usage);
  const AngleDistribution d = AngleDistribution::joint_numeric(kFig2);
  CHECK(d.kind() == AngleDistribution::Kind::JointNumeric);
  CHECK(d.joint() == kFig2);
}
