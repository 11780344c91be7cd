#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "relkac/model.hpp"
#include "relkac/rng.hpp"

namespace relkac {

using Vec3 = std::array<double, 3>;

/// Outer-time grid with the nonnegative increments of T^c and their prefix sums.
struct SubordinatorPath {
  std::vector<double> outer_times;  // s_0 = 0 < ... < s_n = t
  std::vector<double> increments;   // n entries
  std::vector<double> cumulative;   // n + 1 entries, cumulative[0] = 0

  double horizon() const { return cumulative.back(); }
};

/// Brownian motion in R^d sampled on an inner grid. Coordinates beyond
/// `dimension` are held at zero so fields can always be evaluated on R^3.
struct BrownianPath {
  int dimension = 0;
  std::vector<double> inner_times;
  std::vector<Vec3> positions;

  const Vec3& start() const { return positions.front(); }
};

/// theta_s = initial_spin * (-1)^{N_s} for a unit-rate Poisson process N.
struct SpinPath {
  std::vector<double> jump_times;  // sorted
  int initial_spin = 1;

  /// Right-continuous spin value: jumps at s are already applied.
  int spin_at(double s) const;
  /// Spin just before s.
  int spin_before(double s) const;
  /// Number of jumps in [0, s].
  std::size_t jumps_until(double s) const;
};

struct TemperedOptions {
  /// Lower bound on the per-sub-increment acceptance probability
  /// exp(-delta * sigma * theta^rho); sets the horizon splitting.
  double min_acceptance = 0.1;
  std::uint64_t max_rounds = 10'000'000;
};

struct TemperedStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t sub_increments = 0;
};

/// Positive draw with Laplace transform exp(-dt * scale * u^rho), by the
/// uniform-angle / exponential transformation of the one-sided stable law.
double sample_stable_increment(double rho, double scale, double dt, RandomSource& rng);

/// Draw with Laplace transform exp(-dt * Psi(u)): exponentially tilted
/// stable proposals accepted with probability exp(-theta X), over
/// sub-increments small enough that acceptance stays above
/// options.min_acceptance. dt == 0 returns exactly 0.
double sample_tempered_increment(const ModelParams& params, double dt, RandomSource& rng,
                                 const TemperedOptions& options = {},
                                 TemperedStats* stats = nullptr);

/// Number of sub-increments the tempered sampler uses for a step dt.
std::uint64_t tempered_split_count(const ModelParams& params, double dt,
                                   const TemperedOptions& options = {});

SubordinatorPath sample_subordinator_path(const ModelParams& params, double t, int n_outer,
                                          RandomSource& rng,
                                          const TemperedOptions& options = {});

/// Gaussian increments with covariance dt * I. inner_times must start at
/// 0 and be strictly increasing (ContractError otherwise).
BrownianPath sample_brownian(int dimension, std::span<const double> inner_times,
                             const Vec3& start, RandomSource& rng);

/// Poisson(horizon) jumps, uniformly placed given the count, sorted.
SpinPath sample_poisson_spin(double horizon, int initial_spin, RandomSource& rng);

}  // namespace relkac
