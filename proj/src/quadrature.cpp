#include "fuzzyref/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "fuzzyref/parallel.hpp"

namespace fuzzyref {

const char* to_string(QuadratureMethod method) noexcept {
  switch (method) {
    case QuadratureMethod::GaussHermite:
      return "gauss_hermite";
    case QuadratureMethod::AdaptiveSimpson:
      return "adaptive_simpson";
    case QuadratureMethod::MonteCarlo:
      return "monte_carlo";
  }
  return "unknown";
}

QuadratureMethod parse_quadrature_method(const std::string& label) {
  if (label == "gauss_hermite") return QuadratureMethod::GaussHermite;
  if (label == "adaptive_simpson") return QuadratureMethod::AdaptiveSimpson;
  if (label == "monte_carlo") return QuadratureMethod::MonteCarlo;
  fail(ErrorKind::Usage,
       fmt::format("unknown quadrature method '{}' (gauss_hermite, adaptive_simpson, monte_carlo)", label));
}

QuadratureSpec QuadratureSpec::gauss_hermite(int nodes) {
  QuadratureSpec spec;
  spec.method = QuadratureMethod::GaussHermite;
  spec.nodes = nodes;
  spec.validate();
  return spec;
}

QuadratureSpec QuadratureSpec::adaptive_simpson(double rel_tol, int max_depth, double singular_window) {
  QuadratureSpec spec;
  spec.method = QuadratureMethod::AdaptiveSimpson;
  spec.rel_tol = rel_tol;
  spec.max_depth = max_depth;
  spec.singular_window = singular_window;
  spec.validate();
  return spec;
}

QuadratureSpec QuadratureSpec::monte_carlo(std::uint64_t samples, std::uint64_t seed) {
  QuadratureSpec spec;
  spec.method = QuadratureMethod::MonteCarlo;
  spec.samples = samples;
  spec.seed = seed;
  spec.validate();
  return spec;
}

void QuadratureSpec::validate() const {
  switch (method) {
    case QuadratureMethod::GaussHermite:
      if (nodes < 2 || nodes > 200) fail(ErrorKind::Usage, fmt::format("Gauss-Hermite nodes must lie in [2, 200], got {}", nodes));
      break;
    case QuadratureMethod::AdaptiveSimpson:
      if (!(rel_tol >= 1e-13) || !std::isfinite(rel_tol))
        fail(ErrorKind::Usage, fmt::format("adaptive Simpson rel_tol must be >= 1e-13, got {}", rel_tol));
      if (max_depth < 1 || max_depth > 60)
        fail(ErrorKind::Usage, fmt::format("adaptive Simpson max_depth must lie in [1, 60], got {}", max_depth));
      if (!(singular_window > 0.0) || !std::isfinite(singular_window))
        fail(ErrorKind::Usage, "singular_window must be positive");
      break;
    case QuadratureMethod::MonteCarlo:
      if (samples < 100) fail(ErrorKind::Usage, fmt::format("Monte Carlo needs at least 100 samples, got {}", samples));
      break;
  }
}

// ---------------------------------------------------------------------------
// Gauss-Hermite

namespace {

// Orthonormal probabilists' Hermite polynomials p_0..p_{n-1}, p_n at x.
// p_{k+1} = (x p_k - sqrt(k) p_{k-1}) / sqrt(k+1)
struct HermiteEval {
  double pn = 0.0;
  double pn_1 = 0.0;
  double sum_sq = 0.0;  // sum_{k<n} p_k^2
};

HermiteEval eval_hermite(int n, double x) {
  double prev = 0.0;
  double cur = 1.0;
  double sum_sq = 0.0;
  for (int k = 0; k < n; ++k) {
    sum_sq += cur * cur;
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(k + 1.0);
    prev = cur;
    cur = next;
  }
  return {cur, prev, sum_sq};
}

GaussHermiteRule build_rule(int n) {
  GaussHermiteRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {1.0};
    return rule;
  }

  // Golub-Welsch for starting values: zeros of p_n are the eigenvalues of
  // the symmetric tridiagonal Jacobi matrix with off-diagonal sqrt(k).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& eig = solver.eigenvalues();

  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = eig[i];
    for (int iter = 0; iter < 8; ++iter) {
      const HermiteEval h = eval_hermite(n, x);
      const double step = h.pn / (std::sqrt(static_cast<double>(n)) * h.pn_1);
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / eval_hermite(n, x).sum_sq;
  }

  // Enforce the exact mirror symmetry of the rule.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;

  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite_rule(int nodes) {
  if (nodes < 1 || nodes > 200) fail(ErrorKind::Usage, fmt::format("Gauss-Hermite nodes must lie in [1, 200], got {}", nodes));
  static std::mutex mutex;
  static std::array<std::unique_ptr<const GaussHermiteRule>, 201> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[nodes];
  if (!slot) slot = std::make_unique<const GaussHermiteRule>(build_rule(nodes));
  return *slot;
}

IntegralResult gauss_hermite_expectation(const std::function<double(double)>& f, double mean, double sigma,
                                         int nodes) {
  if (nodes < 2 || nodes > 200) fail(ErrorKind::Usage, fmt::format("Gauss-Hermite nodes must lie in [2, 200], got {}", nodes));
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) fail(ErrorKind::Domain, "Gaussian sigma must be finite and >= 0");

  std::uint64_t evaluations = 0;
  auto checked = [&](double x) {
    ++evaluations;
    const double y = f(x);
    if (!std::isfinite(y)) throw NumericError(fmt::format("integrand is not finite at {:.17g}", x), 0.0, 0.0);
    return y;
  };

  if (sigma == 0.0) return {checked(mean), 0.0, evaluations};

  auto apply = [&](int n) {
    const GaussHermiteRule& rule = gauss_hermite_rule(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * checked(mean + sigma * rule.nodes[i]);
    return acc;
  };
  const double fine = apply(nodes);
  const double coarse = apply(nodes / 2);
  return {fine, std::abs(fine - coarse), evaluations};
}

// ---------------------------------------------------------------------------
// Adaptive Simpson

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  std::uint64_t evaluations = 0;
  double value = 0.0;
  double error = 0.0;
  bool exhausted = false;

  double eval(double x) {
    ++evaluations;
    const double y = f(x);
    if (!std::isfinite(y)) throw NumericError(fmt::format("integrand is not finite at {:.17g}", x), value, error);
    return y;
  }

  void refine(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // The second test stops refinement once the panels disagree only by
    // rounding, which a tolerance halved at every level eventually demands.
    if (std::abs(delta) <= 15.0 * eps ||
        std::abs(delta) <= 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right))) {
      value += left + right + delta / 15.0;
      error += std::abs(delta) / 15.0;
      return;
    }
    if (depth <= 0) {
      exhausted = true;
      value += left + right;
      error += std::abs(delta) / 15.0;
      return;
    }
    refine(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1);
    refine(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
  }
};

}  // namespace

IntegralResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                int max_depth) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    fail(ErrorKind::Usage, fmt::format("adaptive_simpson needs finite a < b, got [{}, {}]", a, b));
  if (!(rel_tol >= 1e-13)) fail(ErrorKind::Usage, fmt::format("rel_tol must be >= 1e-13, got {}", rel_tol));
  if (max_depth < 1) fail(ErrorKind::Usage, "max_depth must be >= 1");

  // A few initial panels keep narrow features from hiding between the
  // first three sample points; they count towards max_depth.
  const int initial_levels = std::min(4, max_depth);
  const int panels = 1 << initial_levels;
  const double width = (b - a) / panels;

  SimpsonState state{f};
  std::vector<double> xs(2 * panels + 1);
  std::vector<double> ys(2 * panels + 1);
  for (int i = 0; i <= 2 * panels; ++i) {
    xs[i] = (i == 2 * panels) ? b : a + 0.5 * width * i;
    ys[i] = state.eval(xs[i]);
  }

  double abs_scale = 0.0;
  for (int p = 0; p < panels; ++p)
    abs_scale += width / 6.0 * (std::abs(ys[2 * p]) + 4.0 * std::abs(ys[2 * p + 1]) + std::abs(ys[2 * p + 2]));
  const double eps_panel = rel_tol * abs_scale / panels;

  for (int p = 0; p < panels; ++p) {
    const double fa = ys[2 * p];
    const double fm = ys[2 * p + 1];
    const double fb = ys[2 * p + 2];
    const double whole = (xs[2 * p + 2] - xs[2 * p]) / 6.0 * (fa + 4.0 * fm + fb);
    state.refine(xs[2 * p], xs[2 * p + 2], fa, fm, fb, whole, eps_panel, max_depth - initial_levels);
  }

  if (state.exhausted)
    throw NumericError(fmt::format("adaptive Simpson exceeded max_depth {} on [{:.17g}, {:.17g}] "
                                   "(partial value {:.17g}, error estimate {:.3g})",
                                   max_depth, a, b, state.value, state.error),
                       state.value, state.error);
  return {state.value, state.error, state.evaluations};
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct BlockMoments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index + kGolden));
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(derive_seed(seed, stream)) {}

std::uint64_t RandomStream::next_u64() noexcept { return mix64(key_ + kGolden * ++counter_); }

double RandomStream::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = kTwoPi * uniform();
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

IntegralResult mc_sample_mean(const std::function<double(RandomStream&)>& draw, std::uint64_t samples,
                              std::uint64_t seed, unsigned workers) {
  if (samples < 1) fail(ErrorKind::Usage, "Monte Carlo needs at least one sample");
  const std::uint64_t blocks = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<BlockMoments> moments(blocks);

  parallel_for(blocks, workers, [&](std::size_t b) {
    RandomStream rng(seed, b);
    const std::uint64_t n = std::min<std::uint64_t>(kMonteCarloBlock, samples - b * kMonteCarloBlock);
    BlockMoments acc;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double y = draw(rng);
      if (!std::isfinite(y)) throw NumericError("Monte Carlo integrand is not finite", 0.0, 0.0);
      ++acc.n;
      const double d = y - acc.mean;
      acc.mean += d / static_cast<double>(acc.n);
      acc.m2 += d * (y - acc.mean);
    }
    moments[b] = acc;
  });

  // Chan et al. pairwise update, always in block order.
  BlockMoments total;
  for (const BlockMoments& m : moments) {
    if (m.n == 0) continue;
    const double n_a = static_cast<double>(total.n);
    const double n_b = static_cast<double>(m.n);
    const double n = n_a + n_b;
    const double d = m.mean - total.mean;
    total.mean += d * n_b / n;
    total.m2 += m.m2 + d * d * n_a * n_b / n;
    total.n += m.n;
  }
  const double variance = total.n > 1 ? total.m2 / static_cast<double>(total.n - 1) : 0.0;
  return {total.mean, std::sqrt(variance / static_cast<double>(total.n)), samples};
}

IntegralResult mc_expectation(const std::function<double(std::span<const double>)>& f,
                              const GaussianSampler& sampler, std::uint64_t samples, std::uint64_t seed,
                              unsigned workers) {
  if (samples < 100) fail(ErrorKind::Usage, fmt::format("Monte Carlo needs at least 100 samples, got {}", samples));
  for (const auto& c : sampler.components)
    if (!(c.sd >= 0.0) || !std::isfinite(c.mean)) fail(ErrorKind::Usage, "sampler components need finite mean and sd >= 0");
  const std::size_t k = sampler.components.size();
  return mc_sample_mean(
      [&](RandomStream& rng) {
        std::array<double, 16> small{};
        std::vector<double> large;
        std::span<double> point;
        if (k <= small.size()) {
          point = std::span<double>(small.data(), k);
        } else {
          large.resize(k);
          point = std::span<double>(large);
        }
        for (std::size_t j = 0; j < k; ++j) point[j] = rng.normal(sampler.components[j].mean, sampler.components[j].sd);
        return f(std::span<const double>(point.data(), point.size()));
      },
      samples, seed, workers);
}

}  // namespace fuzzyref
