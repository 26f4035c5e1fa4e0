#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fuzzyref/error.hpp"

namespace fuzzyref {

enum class QuadratureMethod { GaussHermite, AdaptiveSimpson, MonteCarlo };

const char* to_string(QuadratureMethod method) noexcept;
QuadratureMethod parse_quadrature_method(const std::string& label);

/// Which integrator to use and how hard to try. Only the fields of the
/// selected method are read.
struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::GaussHermite;
  int nodes = 64;
  double rel_tol = 1e-9;
  int max_depth = 40;
  /// Half-width of the window excluded around a 1/w pole.
  double singular_window = 1e-8;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;

  static QuadratureSpec gauss_hermite(int nodes = 64);
  static QuadratureSpec adaptive_simpson(double rel_tol = 1e-9, int max_depth = 40,
                                         double singular_window = 1e-8);
  static QuadratureSpec monte_carlo(std::uint64_t samples = 1'000'000, std::uint64_t seed = 42);

  /// Throws Usage when a field of the selected method is out of range.
  void validate() const;

  bool operator==(const QuadratureSpec&) const = default;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::uint64_t evaluations = 0;
};

/// Probabilists' Gauss-Hermite rule: nodes x_i and weights w_i with
/// sum_i w_i f(x_i) ~ E[f(X)], X ~ Normal(0, 1). Weights sum to 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached and immutable; safe to share across threads. nodes in [1, 200].
const GaussHermiteRule& gauss_hermite_rule(int nodes);

/// E[f(mean + sigma Z)] for any f whose values form a vector space
/// (doubles, matrices). sigma == 0 evaluates f(mean) once.
template <class F>
auto gauss_hermite_average(F&& f, double mean, double sigma, int nodes) {
  if (sigma == 0.0) return f(mean);
  const GaussHermiteRule& rule = gauss_hermite_rule(nodes);
  auto acc = f(mean + sigma * rule.nodes[0]) * rule.weights[0];
  for (std::size_t i = 1; i < rule.nodes.size(); ++i) acc += f(mean + sigma * rule.nodes[i]) * rule.weights[i];
  return acc;
}

/// Integral of f against Normal(mean, sigma). The error estimate is the
/// difference to the rule with half as many nodes.
IntegralResult gauss_hermite_expectation(const std::function<double(double)>& f, double mean,
                                         double sigma, int nodes = 64);

/// Adaptive Simpson on [a, b]; rel_tol is relative to the integral of |f|.
/// Throws NumericError (with the partial sum) when max_depth is exhausted.
IntegralResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                double rel_tol = 1e-9, int max_depth = 40);

/// Counter-based random stream: the n-th draw depends only on
/// (seed, stream, n), so splitting work by stream id keeps results
/// independent of how the work is scheduled.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }
  /// +1 or -1 with equal probability.
  double sign() noexcept { return (next_u64() >> 63) ? 1.0 : -1.0; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Mixes a base seed with an index into an independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Number of samples one RandomStream serves in the Monte Carlo drivers.
inline constexpr std::uint64_t kMonteCarloBlock = 4096;

/// Sample mean of draw(rng) over `samples` draws. error_estimate is the
/// standard error. Bit-identical for a given (samples, seed) whatever the
/// worker count (0 = hardware concurrency).
IntegralResult mc_sample_mean(const std::function<double(RandomStream&)>& draw, std::uint64_t samples,
                              std::uint64_t seed, unsigned workers = 0);

struct NormalComponent {
  double mean = 0.0;
  double sd = 1.0;
};

/// Product of independent normals; the sampler argument of mc_expectation.
struct GaussianSampler {
  std::vector<NormalComponent> components;
};

IntegralResult mc_expectation(const std::function<double(std::span<const double>)>& f,
                              const GaussianSampler& sampler, std::uint64_t samples,
                              std::uint64_t seed, unsigned workers = 0);

}  // namespace fuzzyref
