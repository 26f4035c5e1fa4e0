#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fuzzyref/decoherence.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fuzzyref;
using std::numbers::pi;

namespace {

oracle::M2 to_m2(const SquareMatrix& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

BellConfig fig6_config() {
  BellConfig c;
  c.theta_a = -pi / 8;
  c.theta_a_prime = pi / 8;
  c.theta_b = 0.0;
  c.theta_b_prime = pi / 2;
  c.model_a = c.model_b = FuzzinessModel::frequency(0.5);
  c.w0_a = c.w0_b = 0.5;
  return c;
}

BellConfig fig7_config(double dt) {
  BellConfig c;
  c.theta_a = 0.0;
  c.theta_a_prime = pi / 4;
  c.theta_b = 7 * pi / 8;
  c.theta_b_prime = pi / 8;
  c.model_a = c.model_b = FuzzinessModel::timing(dt);
  c.w0_a = c.w0_b = 1.0;
  return c;
}

const QuadratureSpec kGh = QuadratureSpec::gauss_hermite(64);

// One run of an arm: draw the frequency or duration, and the telegraph sign
// when noisy, then evolve with the matrix exponential.
oracle::M2 trajectory(const MeasurementSetting& m, bool noisy, double gamma, RandomStream& rng) {
  const double beta = noisy ? gamma * rng.sign() : 0.0;
  double w = m.w0(), t = m.duration();
  if (m.model().kind() == FuzzinessKind::FrequencyOnly)
    w = rng.normal(m.w0(), m.model().delta_w());
  else
    t = rng.normal(t, m.model().delta_t());
  return oracle::heisenberg_z(w, beta, t);
}

}  // namespace

TEST_CASE("telegraph average is even in gamma and matches the exponential") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double w = u(rng), t = u(rng), g = u(rng);
    const SquareMatrix avg = rtn_averaged_observable(w, t, g);
    CHECK(avg.max_abs_diff(rtn_averaged_observable(w, t, -g)) < 1e-14);
    const oracle::M2 ref = oracle::scale(oracle::add(oracle::heisenberg_z(w, g, t), oracle::heisenberg_z(w, -g, t)), 0.5);
    CHECK(oracle::max_diff(to_m2(avg), ref) < 1e-12);
    CHECK(avg.operator_norm() <= 1.0 + 1e-12);
  }
}

TEST_CASE("zero noise reproduces the closed form") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> angle(-pi, pi), w0(0.5, 2.0), dw(0.0, 1.0), dt(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    BellConfig c;
    c.theta_a = angle(rng);
    c.theta_a_prime = angle(rng);
    c.theta_b = angle(rng);
    c.theta_b_prime = angle(rng);
    c.w0_a = w0(rng);
    c.w0_b = w0(rng);
    if (i % 2 == 0)
      c.model_a = c.model_b = FuzzinessModel::frequency(dw(rng));
    else
      c.model_a = c.model_b = FuzzinessModel::timing(dt(rng));
    const double exact = bell_value(c).b;
    CHECK(decohered_bell(c, NoiseSpec{0.0, true, true}, kGh).b == doctest::Approx(exact).scale(1.0).epsilon(1e-10));

    c.steps_a = 3;
    c.steps_b = 2;
    CHECK(decohered_bell(c, NoiseSpec{0.0, false, false}, kGh).b ==
          doctest::Approx(bell_value(c).b).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("strong noise freezes the measured axis") {
  const BellConfig c = fig6_config();
  const double gamma = 1e4;
  const SquareMatrix z = pauli(Axis::Z);
  const SquareMatrix b = coarsened_arm_observable(c.setting_b(), false, 0.0, kGh);
  const SquareMatrix bp = coarsened_arm_observable(c.setting_b_prime(), false, 0.0, kGh);
  const TwoQubitState psi = TwoQubitState::bell_state();
  const double frozen = pair_expectation(psi, z, b) + pair_expectation(psi, z, b) + pair_expectation(psi, z, bp) -
                        pair_expectation(psi, z, bp);
  CHECK(std::abs(decohered_bell(c, NoiseSpec{gamma, true, false}, kGh).b - frozen) < 1e-6);
  CHECK(coarsened_arm_observable(c.setting_a(), true, gamma, kGh).max_abs_diff(z) < 1e-6);
}

TEST_CASE("reference values from an independent high-precision evaluation") {
  CHECK(decohered_bell(fig6_config(), NoiseSpec{1.0, true, false}, kGh).b ==
        doctest::Approx(-1.2294181881346028).epsilon(1e-12));
  CHECK(decohered_bell(fig7_config(0.5), NoiseSpec{1.0, true, false}, kGh).b ==
        doctest::Approx(-0.76420194330331734).epsilon(1e-12));
  CHECK(decohered_bell(fig7_config(0.0), NoiseSpec{1.0, true, false}, kGh).b ==
        doctest::Approx(-2.2099067639405759).epsilon(1e-12));
}

TEST_CASE("averaged observables are contractions") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> angle(-pi, pi), w0(0.2, 3.0), spread(0.0, 2.0), g(0.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const FuzzinessModel model =
        i % 2 ? FuzzinessModel::frequency(spread(rng)) : FuzzinessModel::timing(spread(rng));
    const auto m = MeasurementSetting::aligned(angle(rng), w0(rng), 1, model);
    const SquareMatrix a = coarsened_arm_observable(m, true, g(rng), kGh);
    CHECK(a.is_hermitian());
    CHECK(a.operator_norm() <= 1.0 + 1e-12);
  }
}

TEST_CASE("decohered Bell values agree with simulated trajectories") {
  struct Case {
    BellConfig config;
    NoiseSpec noise;
  };
  BellConfig both = fig6_config();
  both.model_a = both.model_b = FuzzinessModel::frequency(1.0);
  both.w0_a = both.w0_b = 1.0;
  const std::array<Case, 4> cases{Case{fig6_config(), {1.0, true, false}}, Case{fig6_config(), {2.5, true, false}},
                                  Case{fig7_config(0.5), {1.0, true, false}}, Case{both, {0.7, true, true}}};
  const auto psi = oracle::bell_state();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    CAPTURE(i);
    const BellConfig& c = cases[i].config;
    const NoiseSpec& n = cases[i].noise;
    const std::array<MeasurementSetting, 4> as{c.setting_a(), c.setting_a_prime(), c.setting_a(), c.setting_a_prime()};
    const std::array<MeasurementSetting, 4> bs{c.setting_b(), c.setting_b(), c.setting_b_prime(), c.setting_b_prime()};
    const IntegralResult r = mc_sample_mean(
        [&](RandomStream& rng) {
          double b = 0.0;
          for (int k = 0; k < 4; ++k) {
            const oracle::M2 a = trajectory(as[k], n.side_a, n.gamma, rng);
            const oracle::M2 o = trajectory(bs[k], n.side_b, n.gamma, rng);
            b += (k == 3 ? -1.0 : 1.0) * oracle::pair_expectation(psi, a, o).real();
          }
          return b;
        },
        40'000, 2000 + i, 1);
    CHECK(std::abs(r.value - decohered_bell(c, n, kGh).b) < 4.0 * r.error_estimate);
  }
}

TEST_CASE("decoherence argument checks") {
  BellConfig c = fig6_config();
  CHECK(kind_of([&] { decohered_bell(c, NoiseSpec{-1.0, true, false}, kGh); }) == ErrorKind::Usage);
  CHECK(kind_of([&] { decohered_bell(c, NoiseSpec{1.0, true, false}, QuadratureSpec::adaptive_simpson()); }) ==
        ErrorKind::Usage);
  c.steps_a = 2;
  CHECK(kind_of([&] { decohered_bell(c, NoiseSpec{1.0, true, false}, kGh); }) == ErrorKind::Unsupported);
  CHECK_NOTHROW(decohered_bell(c, NoiseSpec{1.0, false, true}, kGh));
  c = fig6_config();
  c.model_b = FuzzinessModel::joint(0.1, 0.1);
  CHECK(kind_of([&] { decohered_bell(c, NoiseSpec{1.0, true, false}, kGh); }) == ErrorKind::Unsupported);
  c = fig6_config();
  c.variant = BellVariant::PerTerm;
  c.per_term_overrides = PerTermSigmas{};
  CHECK(kind_of([&] { decohered_bell(c, NoiseSpec{1.0, true, false}, kGh); }) == ErrorKind::Unsupported);
}
