#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "relkac/errors.hpp"
#include "relkac/model.hpp"

using relkac::ModelParams;

namespace {

const ModelParams classical{1.0, 2.0, 2.0, 1.0, 1.0};

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModelParams(0.0, 1, 1, 1, 1), relkac::DomainError);
  CHECK_THROWS_AS(ModelParams(2.0, 1, 1, 1, 1), relkac::DomainError);
  CHECK_THROWS_AS(ModelParams(1.0, -1, 1, 1, 1), relkac::DomainError);
  CHECK_THROWS_AS(ModelParams(1.0, 1, 1, 0, 1), relkac::DomainError);
  CHECK_THROWS_AS(ModelParams(1.0, 1, 1, 1, 0), relkac::DomainError);
  CHECK_NOTHROW(ModelParams(1.999, 1, 1, 1, 1));
}

TEST_CASE("laplace exponent closed-form values") {
  CHECK(relkac::laplace_exponent(classical, 1.0) ==
        doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-14));
  CHECK(relkac::laplace_exponent(classical, 0.0) == 0.0);
  CHECK(relkac::laplace_exponent(ModelParams(1.5, 0.5, 1.5, 2.0, 3.0), 0.0) == 0.0);
  CHECK_THROWS_AS(relkac::laplace_exponent(classical, -0.1), relkac::DomainError);

  // Direct form (2 c^beta u + (m c^gamma)^(2/alpha))^(alpha/2) - m c^gamma.
  const ModelParams p(1.3, 0.7, 1.1, 1.7, 2.5);
  const double u = 0.8;
  const double direct =
      std::pow(2.0 * std::pow(p.c(), p.beta()) * u +
                   std::pow(p.m() * std::pow(p.c(), p.gamma()), 2.0 / p.alpha()),
               p.alpha() / 2.0) -
      p.m() * std::pow(p.c(), p.gamma());
  CHECK(relkac::laplace_exponent(p, u) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("laplace exponent converges to kappa u at rate c^-2") {
  std::vector<double> errors;
  for (const double c : {10.0, 100.0, 1000.0}) {
    const auto p = classical.with_c(c);
    CHECK(relkac::limit_coefficients(p).kappa == doctest::Approx(1.0));
    errors.push_back(std::abs(relkac::laplace_exponent(p, 1.0) - 1.0));
  }
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double slope = std::log10(errors[i] / errors[i - 1]);
    CHECK(slope == doctest::Approx(-2.0).epsilon(0.02));
  }
  CHECK(errors.back() < 1e-6);
}

TEST_CASE("laplace exponent is monotone and concave") {
  const ModelParams p(1.2, 1.0, 1.5, 1.0, 1.5);
  double prev_value = relkac::laplace_exponent(p, 0.0);
  double prev_slope = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 100; ++i) {
    const double u = 0.1 * i;
    const double value = relkac::laplace_exponent(p, u);
    const double slope = (value - prev_value) / 0.1;
    CHECK(value > prev_value);
    CHECK(slope < prev_slope);
    prev_value = value;
    prev_slope = slope;
  }
}

TEST_CASE("Bernstein sign pattern of the first four derivatives") {
  const ModelParams p(1.0, 1.0, 1.0, 1.0, 1.0);
  const double h = 1e-2;
  auto psi = [&](double u) { return relkac::laplace_exponent(p, u); };
  for (double u = 0.1 + 2 * h; u <= 10.0; u += 0.37) {
    const double d1 = (psi(u + h) - psi(u - h)) / (2 * h);
    const double d2 = (psi(u + h) - 2 * psi(u) + psi(u - h)) / (h * h);
    const double d3 =
        (psi(u + 2 * h) - 2 * psi(u + h) + 2 * psi(u - h) - psi(u - 2 * h)) / (2 * h * h * h);
    const double d4 = (psi(u + 2 * h) - 4 * psi(u + h) + 6 * psi(u) - 4 * psi(u - h) +
                       psi(u - 2 * h)) /
                      (h * h * h * h);
    CHECK(d1 > 0.0);
    CHECK(d2 < 0.0);
    CHECK(d3 > 0.0);
    CHECK(d4 < 0.0);
  }
}

TEST_CASE("sigma theta^rho equals m c^gamma") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> alpha(0.05, 1.95), pos(0.1, 5.0);
  for (int i = 0; i < 50; ++i) {
    const ModelParams p(alpha(gen), pos(gen), pos(gen), pos(gen), pos(gen));
    const double lhs = p.sigma() * std::pow(p.theta(), p.rho());
    CHECK(lhs == doctest::Approx(p.m() * std::pow(p.c(), p.gamma())).epsilon(1e-12));
    CHECK(lhs == doctest::Approx(p.rest_energy()).epsilon(1e-12));
  }
}

TEST_CASE("extended exponent continues Psi below zero") {
  const ModelParams p(1.0, 1.0, 1.0, 1.0, 2.0);
  CHECK(relkac::laplace_exponent_extended(p, 1.3) == relkac::laplace_exponent(p, 1.3));
  CHECK(relkac::laplace_exponent_extended(p, -p.theta()) ==
        doctest::Approx(-p.rest_energy()).epsilon(1e-14));
  CHECK(relkac::laplace_exponent_extended(p, -0.5 * p.theta()) < 0.0);
  CHECK_THROWS_AS(relkac::laplace_exponent_extended(p, -1.01 * p.theta()),
                  relkac::DomainError);
  const double h = 1e-6, u = 0.7;
  const double numeric =
      (relkac::laplace_exponent(p, u + h) - relkac::laplace_exponent(p, u - h)) / (2 * h);
  CHECK(relkac::laplace_exponent_derivative(p, u) == doctest::Approx(numeric).epsilon(1e-8));
}

TEST_CASE("Levy density") {
  CHECK(relkac::levy_density(classical, 1.0) ==
        doctest::Approx(std::sqrt(2.0) / (2.0 * std::sqrt(M_PI)) * std::exp(-0.5))
            .epsilon(1e-13));
  CHECK(relkac::levy_density(classical, 1.0) == doctest::Approx(0.241970).epsilon(1e-6));
  double prev = relkac::levy_density(classical, 1.0);
  for (double y = 2.0; y < 200.0; y *= 1.5) {
    const double value = relkac::levy_density(classical, y);
    CHECK(value < prev);
    prev = value;
  }
  CHECK(relkac::levy_density(classical, 200.0) < 1e-40);
}

TEST_CASE("Levy-Khintchine representation residual") {
  CHECK(relkac::verify_levy_representation(classical, 0.0, 1e-8) == 0.0);
  for (const double u : {0.5, 1.0, 2.0}) {
    CHECK(relkac::verify_levy_representation(classical, u, 1e-8) <= 1e-8);
  }
  // alpha = 1.5 with the derived constraint alpha (beta + gamma) = 2 gamma.
  const ModelParams p(1.5, 1.0, 3.0, 2.0, 3.0);
  REQUIRE(relkac::consistency_report(p).derived_constraint_holds);
  CHECK(relkac::verify_levy_representation(p, 2.0, 1e-8) <= 1e-8);

  for (const double alpha : {0.5, 1.0, 1.8}) {
    for (const double c : {0.5, 1.0, 4.0}) {
      for (const double u : {0.1, 1.0, 10.0}) {
        const ModelParams q(alpha, 1.0, 1.0, 1.0, c);
        CHECK(relkac::verify_levy_representation(q, u, 1e-8) <= 1e-8);
      }
    }
  }
  CHECK_THROWS_AS(relkac::verify_levy_representation(classical, -1.0, 1e-8),
                  relkac::DomainError);
  CHECK_THROWS_AS(relkac::verify_levy_representation(classical, 1.0, 0.0),
                  relkac::DomainError);
}

TEST_CASE("exponential moment") {
  CHECK(relkac::exponential_moment(classical, 0.0, 3.0) == 1.0);
  CHECK(relkac::exponential_moment(classical, 0.25, 1.0) ==
        doctest::Approx(std::exp(1.0 - std::sqrt(0.5))).epsilon(1e-14));
  CHECK(relkac::exponential_moment(classical, 0.25, 1.0) ==
        doctest::Approx(1.3402997).epsilon(1e-7));
  CHECK(std::isinf(relkac::exponential_moment(classical, classical.theta(), 1.0)));
  CHECK(std::isinf(relkac::exponential_moment(classical, 1.0, 1.0)));
  for (const double u : {0.3, 1.0, 4.0}) {
    CHECK(relkac::exponential_moment(classical, -u, 1.7) ==
          doctest::Approx(std::exp(-1.7 * relkac::laplace_exponent(classical, u)))
              .epsilon(1e-14));
  }
  // c -> infinity approaches exp(t kappa u) from above.
  double prev = std::numeric_limits<double>::infinity();
  for (const double c : {1.0, 4.0, 16.0, 64.0, 256.0}) {
    const double value = relkac::exponential_moment(classical.with_c(c), 0.25, 1.0);
    CHECK(value < prev);
    prev = value;
  }
  CHECK(prev == doctest::Approx(std::exp(0.25)).epsilon(1e-5));
}

TEST_CASE("variance rate") {
  CHECK(relkac::variance_rate(classical, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(relkac::variance_rate(classical, 0.0) == 0.0);
  for (const double k : {1.0, 3.0, 10.0}) {
    const double ratio = relkac::variance_rate(classical.with_c(2 * k), 0.7) /
                         relkac::variance_rate(classical.with_c(k), 0.7);
    CHECK(ratio == doctest::Approx(std::pow(2.0, -classical.gamma())).epsilon(1e-12));
  }
  const ModelParams p(1.5, 1.0, 3.0, 2.0, 1.0);
  const double ratio = relkac::variance_rate(p.with_c(8.0), 1.0) /
                       relkac::variance_rate(p.with_c(4.0), 1.0);
  CHECK(ratio == doctest::Approx(std::pow(2.0, -p.gamma())).epsilon(1e-12));
}

TEST_CASE("consistency report") {
  const auto classical_report = relkac::consistency_report(classical);
  CHECK(classical_report.exponent == doctest::Approx(0.0));
  CHECK_FALSE(classical_report.stated_constraint_holds);
  CHECK(classical_report.derived_constraint_holds);

  for (const double alpha : {0.3, 1.0, 1.7}) {
    const auto report = relkac::consistency_report(ModelParams(alpha, 2.0 - alpha, alpha, 1, 1));
    CHECK(report.stated_constraint_holds);
    CHECK(report.derived_constraint_holds);
  }

  const auto unit = relkac::consistency_report(ModelParams(1, 1, 1, 1, 1));
  CHECK(unit.exponent == doctest::Approx(0.0));
  CHECK(unit.stated_constraint_holds);
  CHECK(unit.derived_constraint_holds);

  const auto broken = relkac::consistency_report(ModelParams(1, 1, 2, 1, 1));
  CHECK(broken.exponent != doctest::Approx(0.0));
  CHECK_FALSE(broken.derived_constraint_holds);
}

TEST_CASE("limit coefficient") {
  CHECK(relkac::limit_coefficients(classical).kappa == doctest::Approx(1.0));
  const ModelParams p(1.5, 1.0, 3.0, 2.0, 1.0);
  CHECK(relkac::limit_coefficients(p).kappa ==
        doctest::Approx(1.5 * std::pow(2.0, 1.0 - 2.0 / 1.5)));
  CHECK(relkac::limit_coefficients(p).limit_time(2.0) ==
        doctest::Approx(2.0 * relkac::limit_coefficients(p).kappa));
  // Psi_c(u) -> kappa u for a consistent alpha != 1 tuple as well.
  CHECK(relkac::laplace_exponent(p.with_c(1e4), 0.5) ==
        doctest::Approx(0.5 * relkac::limit_coefficients(p).kappa).epsilon(1e-4));
}
