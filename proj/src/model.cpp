#include "relkac/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "relkac/errors.hpp"

namespace relkac {

namespace {

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

ModelParams::ModelParams(double alpha, double beta, double gamma, double m, double c)
    : alpha_(alpha), beta_(beta), gamma_(gamma), m_(m), c_(c) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw DomainError("alpha must lie in (0, 2), got " + std::to_string(alpha));
  }
  if (!(beta > 0.0 && gamma > 0.0 && m > 0.0 && c > 0.0)) {
    throw DomainError("beta, gamma, m and c must be strictly positive");
  }
  const double log_c = std::log(c);
  const double rho = alpha / 2.0;
  const double log_two_c_beta = std::log(2.0) + beta * log_c;
  const double log_rest = std::log(m) + gamma * log_c;
  sigma_ = std::exp(rho * log_two_c_beta);
  theta_ = std::exp(log_rest / rho - log_two_c_beta);
  rest_energy_ = std::exp(log_rest);
}

double ModelParams::consistency_exponent() const {
  return gamma_ + beta_ - 2.0 * gamma_ / alpha_;
}

LimitCoefficients limit_coefficients(const ModelParams& params) {
  return {params.alpha() * std::pow(params.m(), 1.0 - 2.0 / params.alpha())};
}

double laplace_exponent_extended(const ModelParams& params, double u) {
  const double theta = params.theta();
  if (!(u >= -theta)) {
    throw DomainError("Laplace exponent continuation requires u >= -theta");
  }
  // sigma theta^rho ((1 + u/theta)^rho - 1), written to avoid cancellation
  // when u << theta (large c).
  return params.rest_energy() * std::expm1(params.rho() * std::log1p(u / theta));
}

double laplace_exponent(const ModelParams& params, double u) {
  if (!(u >= 0.0)) throw DomainError("laplace_exponent requires u >= 0");
  return laplace_exponent_extended(params, u);
}

double laplace_exponent_derivative(const ModelParams& params, double u) {
  const double theta = params.theta();
  if (!(u > -theta)) throw DomainError("Psi' requires u > -theta");
  const double rho = params.rho();
  return params.sigma() * rho * std::pow(u + theta, rho - 1.0);
}

double levy_density(const ModelParams& params, double y) {
  if (!(y > 0.0)) throw DomainError("levy_density requires y > 0");
  const double rho = params.rho();
  const double prefactor = params.sigma() * rho / std::tgamma(1.0 - rho);
  return prefactor * std::exp(-params.theta() * y - (1.0 + rho) * std::log(y));
}

double verify_levy_representation(const ModelParams& params, double u, double tol) {
  if (!(u >= 0.0)) throw DomainError("verify_levy_representation requires u >= 0");
  if (!(tol > 0.0)) throw DomainError("verify_levy_representation requires tol > 0");
  if (u == 0.0) return 0.0;

  const double rho = params.rho();
  const double theta = params.theta();
  // v = lambda y puts the decay of the integrand at O(1); w = v^(1 - rho)
  // removes the y^(-rho) singularity at the origin.
  const double lambda = theta + u;
  const double prefactor = params.sigma() * rho / std::tgamma(1.0 - rho) *
                           std::pow(lambda, rho) / (1.0 - rho);
  const double inv_exponent = 1.0 / (1.0 - rho);
  auto integrand = [&](double w) {
    if (w == 0.0) return prefactor * u / lambda;
    const double v = std::pow(w, inv_exponent);
    if (!std::isfinite(v)) return 0.0;
    const double y = v / lambda;
    return prefactor * (-std::expm1(-u * y)) / v * std::exp(-theta * y);
  };

  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
  double error = 0.0;
  const double integral = Quadrature::integrate(
      integrand, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-14, &error);
  if (!(error <= tol)) {
    throw QuadratureError("Levy representation quadrature error estimate " +
                          std::to_string(error) + " exceeds tolerance " +
                          std::to_string(tol));
  }
  return std::abs(integral - laplace_exponent(params, u));
}

double exponential_moment(const ModelParams& params, double u, double t) {
  if (!(t >= 0.0)) throw DomainError("exponential_moment requires t >= 0");
  if (u >= params.theta()) return std::numeric_limits<double>::infinity();
  if (u == 0.0 || t == 0.0) return 1.0;
  return std::exp(-t * laplace_exponent_extended(params, -u));
}

double variance_rate(const ModelParams& params, double t) {
  if (!(t >= 0.0)) throw DomainError("variance_rate requires t >= 0");
  const double rho = params.rho();
  return t * params.sigma() * rho * (1.0 - rho) * std::pow(params.theta(), rho - 2.0);
}

ConsistencyReport consistency_report(const ModelParams& params) {
  const double a = params.alpha();
  const double b = params.beta();
  const double g = params.gamma();
  return {params.consistency_exponent(), close(2.0 * a, b * g + g * g),
          close(a * (b + g), 2.0 * g)};
}

}  // namespace relkac
