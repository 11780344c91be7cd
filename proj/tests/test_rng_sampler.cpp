#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "relkac/errors.hpp"
#include "relkac/model.hpp"
#include "relkac/rng.hpp"
#include "relkac/sampler.hpp"

using relkac::ModelParams;
using relkac::RandomSource;
using relkac::RngStream;

namespace {

const ModelParams classical{1.0, 2.0, 2.0, 1.0, 1.0};

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

template <class Fn>
Moments sample_moments(std::size_t n, Fn&& draw) {
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = draw(i);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = (sum2 - n * mean * mean) / (n - 1);
  return {mean, std::sqrt(var / n)};
}

}  // namespace

TEST_CASE("Philox2x64-10 known-answer vectors") {
  auto a = relkac::philox2x64({0, 0}, 0);
  CHECK(a[0] == 0xca00a0459843d731ULL);
  CHECK(a[1] == 0x66c24222c9a845b5ULL);
  auto b = relkac::philox2x64({~0ULL, ~0ULL}, ~0ULL);
  CHECK(b[0] == 0x65b021d60cd8310fULL);
  CHECK(b[1] == 0x4d02f3222f86df20ULL);
  auto c = relkac::philox2x64({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL},
                              0xa4093822299f31d0ULL);
  CHECK(c[0] == 0x0a5e742c2997341cULL);
  CHECK(c[1] == 0xb0f883d38000de5dULL);
}

TEST_CASE("streams are reproducible and distinct") {
  RandomSource x({42, 7}), y({42, 7}), z({42, 8}), w({43, 7});
  for (int i = 0; i < 100; ++i) {
    const double vx = x.uniform_open();
    CHECK(vx == y.uniform_open());
    CHECK(vx != z.uniform_open());
    CHECK(vx != w.uniform_open());
    CHECK(vx > 0.0);
    CHECK(vx < 1.0);
  }
  // Normal draws also replay exactly.
  RandomSource n1({5, 5}), n2({5, 5});
  for (int i = 0; i < 10; ++i) CHECK(n1.normal() == n2.normal());
}

TEST_CASE("one-sided 1/2-stable draws follow the Levy law") {
  const std::size_t n = 100'000;
  RandomSource rng({11, 0});
  std::vector<double> draws(n);
  for (auto& d : draws) d = relkac::sample_stable_increment(0.5, 1.0, 1.0, rng);
  std::sort(draws.begin(), draws.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = std::erfc(1.0 / (2.0 * std::sqrt(draws[i])));
    ks = std::max({ks, std::abs(cdf - double(i) / n), std::abs(cdf - double(i + 1) / n)});
  }
  CHECK(ks < 0.01);
}

TEST_CASE("stable Laplace transform at u = 1") {
  for (const double rho : {0.25, 0.5, 0.75}) {
    RandomSource rng({12, 0});
    const double dt = 0.7, scale = 1.3;
    const auto m = sample_moments(100'000, [&](std::size_t) {
      return std::exp(-relkac::sample_stable_increment(rho, scale, dt, rng));
    });
    CHECK(std::abs(m.mean - std::exp(-dt * scale)) <= 4.0 * m.se);
  }
}

TEST_CASE("stable draws vanish as dt -> 0") {
  RandomSource rng({13, 0});
  int exceed = 0;
  for (int i = 0; i < 10'000; ++i) {
    if (relkac::sample_stable_increment(0.5, 1.0, 1e-6, rng) > 0.1) ++exceed;
  }
  // Expected count ~0.02; allow the Poisson tail up to 2.
  CHECK(exceed <= 2);
  CHECK_THROWS_AS(relkac::sample_stable_increment(1.0, 1.0, 1.0, rng), relkac::DomainError);
  CHECK_THROWS_AS(relkac::sample_stable_increment(0.5, 1.0, 0.0, rng), relkac::DomainError);
}

TEST_CASE("tempered increments: Laplace transform, mean and exponential moment") {
  for (const double u : {0.5, 1.0, 2.0}) {
    RandomSource rng({21, static_cast<std::uint64_t>(u * 10)});
    const auto m = sample_moments(100'000, [&](std::size_t) {
      return std::exp(-u * relkac::sample_tempered_increment(classical, 1.0, rng));
    });
    CHECK(std::abs(m.mean - std::exp(-relkac::laplace_exponent(classical, u))) <= 4.0 * m.se);
  }
  {
    RandomSource rng({22, 0});
    const auto m = sample_moments(100'000, [&](std::size_t) {
      return relkac::sample_tempered_increment(classical, 1.0, rng);
    });
    const double expected = classical.sigma() * classical.rho() *
                            std::pow(classical.theta(), classical.rho() - 1.0);
    CHECK(expected == doctest::Approx(relkac::laplace_exponent_derivative(classical, 0.0)));
    CHECK(std::abs(m.mean - expected) <= 4.0 * m.se);
  }
  {
    const double u = classical.theta() / 2.0;
    RandomSource rng({23, 0});
    const auto m = sample_moments(100'000, [&](std::size_t) {
      return std::exp(u * relkac::sample_tempered_increment(classical, 1.0, rng));
    });
    CHECK(std::abs(m.mean - relkac::exponential_moment(classical, u, 1.0)) <= 4.0 * m.se);
  }
}

TEST_CASE("tempered increments: degenerate step, positivity, splitting") {
  RandomSource rng({24, 0});
  CHECK(relkac::sample_tempered_increment(classical, 0.0, rng) == 0.0);
  for (int i = 0; i < 1000; ++i) CHECK(relkac::sample_tempered_increment(classical, 0.3, rng) >= 0.0);

  // Rest energy m c^gamma = 1; splitting keeps exp(-delta) >= 0.1.
  CHECK(relkac::tempered_split_count(classical, 1.0) == 1);
  CHECK(relkac::tempered_split_count(classical, 10.0) ==
        static_cast<std::uint64_t>(std::ceil(10.0 / std::log(10.0))));
  relkac::TemperedOptions strict;
  strict.min_acceptance = 0.9;
  CHECK(relkac::tempered_split_count(classical, 1.0, strict) ==
        static_cast<std::uint64_t>(std::ceil(1.0 / -std::log(0.9))));
}

TEST_CASE("tempered acceptance rate matches exp(-delta sigma theta^rho)") {
  const ModelParams p(1.0, 1.0, 1.0, 1.0, 3.0);
  const double dt = 0.5;
  const auto k = relkac::tempered_split_count(p, dt);
  const double expected = std::exp(-dt / k * p.rest_energy());
  relkac::TemperedStats stats;
  RandomSource rng({25, 0});
  for (int i = 0; i < 50'000; ++i) relkac::sample_tempered_increment(p, dt, rng, {}, &stats);
  CHECK(stats.sub_increments == 50'000 * k);
  const double rate = double(stats.accepted) / stats.proposals;
  const double se = std::sqrt(expected * (1 - expected) / stats.proposals);
  CHECK(std::abs(rate - expected) <= 4.0 * se);
}

TEST_CASE("convolution: k split draws match one draw in law") {
  const ModelParams p(1.2, 1.0, 1.5, 1.0, 2.0);
  const double dt = 0.8, u = 0.7;
  const int k = 4;
  RandomSource single({26, 0}), split({26, 1});
  const auto a = sample_moments(100'000, [&](std::size_t) {
    return std::exp(-u * relkac::sample_tempered_increment(p, dt, single));
  });
  const auto b = sample_moments(100'000, [&](std::size_t) {
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += relkac::sample_tempered_increment(p, dt / k, split);
    return std::exp(-u * sum);
  });
  CHECK(std::abs(a.mean - b.mean) <= 4.0 * std::hypot(a.se, b.se));
}

TEST_CASE("subordinator paths") {
  const ModelParams p(1.0, 1.0, 1.0, 1.0, 2.0);
  const double t = 1.0;
  RandomSource rng({31, 0});
  double sum = 0.0, sum2 = 0.0, lsum = 0.0, lsum2 = 0.0;
  const std::size_t n = 100'000;
  for (std::size_t i = 0; i < n; ++i) {
    const auto path = relkac::sample_subordinator_path(p, t, 8, rng);
    if (i < 100) {
      REQUIRE(path.outer_times.size() == 9);
      REQUIRE(path.increments.size() == 8);
      CHECK(path.outer_times.back() == t);
      CHECK(path.cumulative.front() == 0.0);
      for (std::size_t j = 1; j < path.cumulative.size(); ++j) {
        CHECK(path.cumulative[j] >= path.cumulative[j - 1]);
      }
    }
    const double T = path.horizon();
    sum += T;
    sum2 += T * T;
    const double l = std::exp(-T);
    lsum += l;
    lsum2 += l * l;
  }
  const double lmean = lsum / n;
  const double lse = std::sqrt((lsum2 / n - lmean * lmean) / n);
  CHECK(std::abs(lmean - std::exp(-t * relkac::laplace_exponent(p, 1.0))) <= 4.0 * lse);

  // Sample variance vs variance_rate, with the SE of the variance estimator
  // bounded by a fourth-moment-free bootstrap over 10 batches.
  const double mean = sum / n;
  const double var = (sum2 - n * mean * mean) / (n - 1);
  RandomSource rng2({31, 1});
  std::vector<double> batch_vars;
  for (int b = 0; b < 10; ++b) {
    double s = 0.0, s2 = 0.0;
    const std::size_t m = 10'000;
    for (std::size_t i = 0; i < m; ++i) {
      const double T = relkac::sample_subordinator_path(p, t, 8, rng2).horizon();
      s += T;
      s2 += T * T;
    }
    batch_vars.push_back((s2 - s * s / m) / (m - 1));
  }
  double bm = 0.0, bv = 0.0;
  for (const double v : batch_vars) bm += v / 10.0;
  for (const double v : batch_vars) bv += (v - bm) * (v - bm) / 9.0;
  const double se_var = std::sqrt(bv / 10.0);  // SE of the pooled variance
  CHECK(std::abs(var - relkac::variance_rate(p, t)) <= 4.0 * se_var);
}

TEST_CASE("Brownian paths") {
  std::vector<double> grid;
  const int steps = 1000;
  const double T = 2.0;
  for (int i = 0; i <= steps; ++i) grid.push_back(T * i / steps);

  RandomSource rng({41, 0});
  const auto path = relkac::sample_brownian(2, grid, {1.0, -1.0, 0.0}, rng);
  CHECK(path.positions.size() == grid.size());
  CHECK(path.start() == relkac::Vec3{1.0, -1.0, 0.0});
  for (int axis = 0; axis < 2; ++axis) {
    double qv = 0.0;
    for (std::size_t i = 1; i < path.positions.size(); ++i) {
      const double d = path.positions[i][axis] - path.positions[i - 1][axis];
      qv += d * d;
    }
    CHECK(std::abs(qv - T) / T < 0.05);
  }
  for (const auto& x : path.positions) CHECK(x[2] == 0.0);

  const double coarse[] = {0.0, T};
  double s1 = 0, s1sq = 0, s2 = 0, s2sq = 0;
  const std::size_t n = 100'000;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = relkac::sample_brownian(3, coarse, {}, rng);
    const auto& end = p.positions.back();
    const double r2 = end[0] * end[0] + end[1] * end[1] + end[2] * end[2];
    s1 += end[0];
    s1sq += end[0] * end[0];
    s2 += r2;
    s2sq += r2 * r2;
  }
  const double m1 = s1 / n, m2 = s2 / n;
  CHECK(std::abs(m1) <= 4.0 * std::sqrt((s1sq / n - m1 * m1) / n));
  CHECK(std::abs(m2 - 3.0 * T) <= 4.0 * std::sqrt((s2sq / n - m2 * m2) / n));

  const double bad[] = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(relkac::sample_brownian(1, bad, {}, rng), relkac::ContractError);
  const double late[] = {0.5, 1.0};
  CHECK_THROWS_AS(relkac::sample_brownian(1, late, {}, rng), relkac::ContractError);
}

TEST_CASE("Poisson spin process") {
  RandomSource rng({51, 0});
  const auto empty = relkac::sample_poisson_spin(0.0, -1, rng);
  CHECK(empty.jump_times.empty());
  CHECK(empty.spin_at(0.0) == -1);
  CHECK(empty.spin_at(5.0) == -1);

  const double horizon = 2.0;
  const std::size_t n = 100'000;
  double count = 0, count2 = 0, spin = 0, spin2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto path = relkac::sample_poisson_spin(horizon, 1, rng);
    CHECK(std::is_sorted(path.jump_times.begin(), path.jump_times.end()));
    const double k = path.jump_times.size();
    count += k;
    count2 += k * k;
    const double s = path.spin_at(horizon);
    spin += s;
    spin2 += s * s;
    if (!path.jump_times.empty()) {
      const double tau = path.jump_times.front();
      CHECK(path.spin_before(tau) == 1);
      CHECK(path.spin_at(tau) == -1);
      CHECK(tau <= horizon);
    }
  }
  const double mc = count / n, ms = spin / n;
  CHECK(std::abs(mc - horizon) <= 4.0 * std::sqrt((count2 / n - mc * mc) / n));
  CHECK(std::abs(ms - std::exp(-2.0 * horizon)) <= 4.0 * std::sqrt((spin2 / n - ms * ms) / n));
}
