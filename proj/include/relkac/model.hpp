#pragma once

// Closed-form analytics of the alpha/2-relativistic Bernstein function
//
//   Psi(u) = (2 c^beta u + (m c^gamma)^(2/alpha))^(alpha/2) - m c^gamma
//          = sigma * ((u + theta)^rho - theta^rho),
//
// with rho = alpha/2, sigma = (2 c^beta)^rho, theta = (m c^gamma)^(2/alpha) / (2 c^beta),
// together with its Levy density, exponential moments and the
// non-relativistic limit coefficient.

namespace relkac {

class ModelParams {
 public:
  /// Throws DomainError unless 0 < alpha < 2 and beta, gamma, m, c > 0.
  ModelParams(double alpha, double beta, double gamma, double m, double c);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double m() const { return m_; }
  double c() const { return c_; }

  /// Stable index alpha/2.
  double rho() const { return alpha_ / 2.0; }
  double sigma() const { return sigma_; }
  /// Exponential tempering rate of the Levy measure.
  double theta() const { return theta_; }
  /// m c^gamma, which equals sigma * theta^rho.
  double rest_energy() const { return rest_energy_; }
  /// gamma + beta - 2 gamma / alpha; the c -> infinity limit of Psi is
  /// linear and finite iff this vanishes.
  double consistency_exponent() const;

  /// Same (alpha, beta, gamma, m) at a different speed of light.
  ModelParams with_c(double c) const { return {alpha_, beta_, gamma_, m_, c}; }

  bool operator==(const ModelParams&) const = default;

 private:
  double alpha_, beta_, gamma_, m_, c_;
  double sigma_, theta_, rest_energy_;
};

struct LimitCoefficients {
  /// alpha * m^(1 - 2/alpha): multiplies h(a) in the limit generator.
  double kappa;

  /// Limiting subordinator time t_alpha = kappa * t.
  double limit_time(double t) const { return kappa * t; }
};

LimitCoefficients limit_coefficients(const ModelParams& params);

/// Psi(u) for u >= 0. Throws DomainError for u < 0.
double laplace_exponent(const ModelParams& params, double u);

/// Analytic continuation of Psi to u >= -theta. This is the spectral
/// function that must be applied to operators with negative spectrum
/// (the Pauli operator) so that E[exp(-lambda T_t)] = exp(-t Psi(lambda)).
double laplace_exponent_extended(const ModelParams& params, double u);

/// Psi'(u) for u > -theta.
double laplace_exponent_derivative(const ModelParams& params, double u);

/// Density of the Levy measure nu_c at y > 0.
double levy_density(const ModelParams& params, double y);

/// |int_0^inf (1 - e^{-uy}) nu_c(dy) - Psi(u)| computed by adaptive
/// quadrature after the substitution w = y^(1 - rho). Throws DomainError
/// for u < 0 or tol <= 0, QuadratureError when the quadrature error
/// estimate exceeds tol.
double verify_levy_representation(const ModelParams& params, double u, double tol);

/// E[exp(u T_t)]. Returns +infinity for u >= theta.
double exponential_moment(const ModelParams& params, double u, double t);

/// Var(T_t) = t sigma rho (1 - rho) theta^(rho - 2).
double variance_rate(const ModelParams& params, double t);

struct ConsistencyReport {
  double exponent;
  /// 2 alpha = beta gamma + gamma^2.
  bool stated_constraint_holds;
  /// alpha (beta + gamma) = 2 gamma, from expanding Psi for large c.
  bool derived_constraint_holds;
};

ConsistencyReport consistency_report(const ModelParams& params);

}  // namespace relkac
