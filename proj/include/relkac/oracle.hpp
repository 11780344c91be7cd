#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "relkac/fields.hpp"
#include "relkac/model.hpp"

namespace relkac {

/// Periodic grid on [-L, L)^d with n points per axis, optionally carrying
/// a two-valued spin index (theta = +1 first).
struct GridSpec {
  int dimension = 1;
  int n_per_axis = 64;
  double half_extent = 8.0;
  bool spin = false;
  std::size_t cap = 8192;
  /// Largest normalized packet mass allowed within 3 spacings of the
  /// periodic boundary (checked when configs are parsed).
  double boundary_tolerance = 1e-10;

  double spacing() const { return 2.0 * half_extent / n_per_axis; }
  std::size_t sites() const;
  std::size_t size() const { return sites() * (spin ? 2 : 1); }
  /// Position of a site; coordinates beyond `dimension` are zero.
  Vec3 site_position(std::size_t site) const;
  /// Quadrature weight dx^d.
  double cell_volume() const;

  bool operator==(const GridSpec&) const = default;
};

struct GridOperator {
  GridSpec grid;
  Eigen::MatrixXcd matrix;
  std::string label;

  /// max |M - M^*| relative to the largest entry.
  double hermiticity_error() const;
};

/// Eigen-decomposition of a Hermitian grid operator, reusable for any
/// spectral function.
class SpectralDecomposition {
 public:
  explicit SpectralDecomposition(const GridOperator& op);

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }
  const GridSpec& grid() const { return grid_; }

  /// U diag(fn(lambda)) U^*.
  Eigen::MatrixXcd apply(const std::function<double(double)>& fn) const;
  /// <f, U diag(fn(lambda)) U^* g> with grid quadrature weights.
  std::complex<double> pairing(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g,
                               const std::function<double(double)>& fn) const;

 private:
  GridSpec grid_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

/// (1/2)(-i grad - a)^2 by nearest-neighbour differences with Peierls link
/// phases exp(-i a(midpoint) . dl).
GridOperator discretize_h(const FieldConfig& fields, const GridSpec& grid);

/// H0_{Z2}(a, b) = h(a) x I - (1/2) [theta b3 on the diagonal blocks,
/// (b1 - i theta b2) on the spin-flip blocks]. Dimension 0 is the
/// spin-only mode with no kinetic term.
GridOperator discretize_pauli0(const FieldConfig& fields, const GridSpec& grid);

/// op + diag(V(x)).
GridOperator add_potential(const GridOperator& op, const ScalarPotential& V);

struct BernsteinOptions {
  /// Eigenvalues in [-clamp_tolerance * max(1, |lambda|_max), 0) are set to 0.
  double clamp_tolerance = 1e-10;
};

/// Psi(op) by spectral calculus. Eigenvalues that are negative beyond the
/// clamping tolerance go through the analytic continuation of Psi, which
/// requires them to be >= -theta (DomainError otherwise).
GridOperator apply_bernstein(const GridOperator& op, const ModelParams& params,
                             const BernsteinOptions& options = {});

/// Spectral value of Psi at one eigenvalue, with the same clamping rule.
double bernstein_eigenvalue(double lambda, double scale, const ModelParams& params,
                            const BernsteinOptions& options = {});

/// exp(-t op).
Eigen::MatrixXcd semigroup(const GridOperator& op, double t);

/// Sample a test function on the grid (spin components interleaved).
Eigen::VectorXcd sample_on_grid(const TestFunction& f, const GridSpec& grid);

/// Fraction of |f|^2 lying within 3 grid spacings of the boundary of
/// [-L, L)^d (union bound over axes and sides).
double boundary_mass(const TestFunction& f, const GridSpec& grid);

/// <f, exp(-t op) g> with quadrature weights dx^d.
std::complex<double> semigroup_pairing(const GridOperator& op, const TestFunction& f,
                                       const TestFunction& g, double t);

/// Spinless grid: kappa h(a) + V. Spin grid: kappa (H0_{Z2}(a, b) + V).
GridOperator limit_generator(const FieldConfig& fields, const GridSpec& grid,
                             const ModelParams& params);

/// Psi(h(a)) + V, or Psi(H0_{Z2}(a, b)) + V on a spin grid.
GridOperator relativistic_generator(const FieldConfig& fields, const GridSpec& grid,
                                    const ModelParams& params);

/// Free-field pairing (a = 0, V = 0) in d = 1 computed on the Fourier side
/// from the closed-form transforms of the packets:
///   int conj(f^(xi)) g^(xi) exp(-t Psi(xi^2 / 2)) dxi.
/// `spectral_fn` maps the kinetic symbol to the generator (Psi or identity).
std::complex<double> fourier_pairing_continuum(const TestFunction& f, const TestFunction& g,
                                               double t,
                                               const std::function<double(double)>& spectral_fn);

/// The same pairing for the periodic lattice: a Riemann sum over lattice
/// momenta k_j = pi j / L with the nearest-neighbour symbol (1 - cos(k dx)) / dx^2.
std::complex<double> fourier_pairing_lattice(const TestFunction& f, const TestFunction& g,
                                             double t, const GridSpec& grid,
                                             const std::function<double(double)>& spectral_fn);

}  // namespace relkac
