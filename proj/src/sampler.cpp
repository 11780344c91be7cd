#include "relkac/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "relkac/errors.hpp"

namespace relkac {

int SpinPath::spin_at(double s) const {
  return (jumps_until(s) % 2 == 0) ? initial_spin : -initial_spin;
}

int SpinPath::spin_before(double s) const {
  const auto n = static_cast<std::size_t>(
      std::lower_bound(jump_times.begin(), jump_times.end(), s) - jump_times.begin());
  return (n % 2 == 0) ? initial_spin : -initial_spin;
}

std::size_t SpinPath::jumps_until(double s) const {
  return static_cast<std::size_t>(
      std::upper_bound(jump_times.begin(), jump_times.end(), s) - jump_times.begin());
}

double sample_stable_increment(double rho, double scale, double dt, RandomSource& rng) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("stable index must lie in (0, 1)");
  if (!(scale > 0.0)) throw DomainError("stable scale must be positive");
  if (!(dt > 0.0)) throw DomainError("stable increment requires dt > 0");

  // Kanter's representation: S = (A(U) / E)^((1 - rho) / rho) has Laplace
  // transform exp(-s^rho), where U ~ Unif(0, pi), E ~ Exp(1) and
  // A(u) = (sin(rho u)^rho sin((1 - rho) u)^(1 - rho) / sin u)^(1 / (1 - rho)).
  const double angle = std::numbers::pi * rng.uniform_open();
  const double e = rng.exponential();
  const double log_a_times_one_minus_rho =
      rho * std::log(std::sin(rho * angle)) +
      (1.0 - rho) * std::log(std::sin((1.0 - rho) * angle)) - std::log(std::sin(angle));
  const double log_standard =
      log_a_times_one_minus_rho / rho - (1.0 - rho) / rho * std::log(e);
  // Scaling: X = (dt * scale)^(1/rho) S has exponent dt * scale * u^rho.
  return std::exp(std::log(dt * scale) / rho + log_standard);
}

std::uint64_t tempered_split_count(const ModelParams& params, double dt,
                                   const TemperedOptions& options) {
  if (!(options.min_acceptance > 0.0 && options.min_acceptance < 1.0)) {
    throw DomainError("min_acceptance must lie in (0, 1)");
  }
  const double mass = dt * params.rest_energy();
  const double per_split = -std::log(options.min_acceptance);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(mass / per_split)));
}

double sample_tempered_increment(const ModelParams& params, double dt, RandomSource& rng,
                                 const TemperedOptions& options, TemperedStats* stats) {
  if (!(dt >= 0.0)) throw DomainError("tempered increment requires dt >= 0");
  if (dt == 0.0) return 0.0;

  const std::uint64_t splits = tempered_split_count(params, dt, options);
  const double delta = dt / static_cast<double>(splits);
  const double rho = params.rho();
  const double sigma = params.sigma();
  const double theta = params.theta();

  double total = 0.0;
  std::uint64_t rounds = 0;
  for (std::uint64_t k = 0; k < splits; ++k) {
    while (true) {
      if (++rounds > options.max_rounds) {
        throw SamplerAbort("tempered sampler exceeded " + std::to_string(options.max_rounds) +
                           " rejection rounds (theta=" + std::to_string(theta) +
                           ", dt=" + std::to_string(dt) + ")");
      }
      const double candidate = sample_stable_increment(rho, sigma, delta, rng);
      if (stats != nullptr) ++stats->proposals;
      // Accept with probability exp(-theta * candidate).
      if (rng.exponential() > theta * candidate) {
        total += candidate;
        if (stats != nullptr) ++stats->accepted;
        break;
      }
    }
  }
  if (stats != nullptr) stats->sub_increments += splits;
  return total;
}

SubordinatorPath sample_subordinator_path(const ModelParams& params, double t, int n_outer,
                                          RandomSource& rng, const TemperedOptions& options) {
  if (!(t > 0.0)) throw DomainError("subordinator path requires t > 0");
  if (n_outer < 1) throw DomainError("subordinator path requires n_outer >= 1");

  SubordinatorPath path;
  const auto n = static_cast<std::size_t>(n_outer);
  path.outer_times.resize(n + 1);
  path.increments.resize(n);
  path.cumulative.resize(n + 1);
  const double dt = t / static_cast<double>(n);
  path.outer_times[0] = 0.0;
  path.cumulative[0] = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    path.outer_times[j + 1] = (j + 1 == n) ? t : static_cast<double>(j + 1) * dt;
    path.increments[j] = sample_tempered_increment(params, dt, rng, options);
    path.cumulative[j + 1] = path.cumulative[j] + path.increments[j];
  }
  return path;
}

BrownianPath sample_brownian(int dimension, std::span<const double> inner_times,
                             const Vec3& start, RandomSource& rng) {
  if (dimension < 0 || dimension > 3) throw DomainError("Brownian dimension must be 0..3");
  if (inner_times.empty() || inner_times.front() != 0.0) {
    throw ContractError("Brownian inner grid must start at 0");
  }
  BrownianPath path;
  path.dimension = dimension;
  path.inner_times.assign(inner_times.begin(), inner_times.end());
  path.positions.resize(inner_times.size());
  path.positions[0] = start;
  for (int i = dimension; i < 3; ++i) path.positions[0][static_cast<std::size_t>(i)] = 0.0;
  for (std::size_t k = 1; k < inner_times.size(); ++k) {
    const double dt = inner_times[k] - inner_times[k - 1];
    if (!(dt > 0.0)) throw ContractError("Brownian inner grid must be strictly increasing");
    const double scale = std::sqrt(dt);
    Vec3 next = path.positions[k - 1];
    for (int i = 0; i < dimension; ++i) {
      next[static_cast<std::size_t>(i)] += scale * rng.normal();
    }
    path.positions[k] = next;
  }
  return path;
}

SpinPath sample_poisson_spin(double horizon, int initial_spin, RandomSource& rng) {
  if (!(horizon >= 0.0)) throw DomainError("spin process requires horizon >= 0");
  if (initial_spin != 1 && initial_spin != -1) throw DomainError("initial spin must be +-1");
  SpinPath path;
  path.initial_spin = initial_spin;
  const std::uint64_t count = rng.poisson(horizon);
  path.jump_times.resize(count);
  for (auto& time : path.jump_times) time = horizon * rng.uniform_open();
  std::sort(path.jump_times.begin(), path.jump_times.end());
  return path;
}

}  // namespace relkac
