#include "relkac/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "relkac/errors.hpp"

namespace relkac {

std::size_t GridSpec::sites() const {
  if (dimension < 0 || dimension > 3) throw OracleError("grid dimension must be 0..3");
  if (dimension == 0) return 1;
  if (n_per_axis < 3) throw OracleError("grid needs at least 3 points per axis");
  std::size_t count = 1;
  for (int i = 0; i < dimension; ++i) count *= static_cast<std::size_t>(n_per_axis);
  return count;
}

Vec3 GridSpec::site_position(std::size_t site) const {
  Vec3 x{};
  const auto n = static_cast<std::size_t>(n_per_axis);
  for (int i = 0; i < dimension; ++i) {
    x[static_cast<std::size_t>(i)] = -half_extent + spacing() * static_cast<double>(site % n);
    site /= n;
  }
  return x;
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dimension); }

double GridOperator::hermiticity_error() const {
  const double scale = std::max(1e-300, matrix.cwiseAbs().maxCoeff());
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() / scale;
}

SpectralDecomposition::SpectralDecomposition(const GridOperator& op) : grid_(op.grid) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix);
  if (solver.info() != Eigen::Success) {
    throw OracleError("eigensolver failed for operator '" + op.label + "'");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Eigen::MatrixXcd SpectralDecomposition::apply(const std::function<double(double)>& fn) const {
  Eigen::VectorXd mapped(eigenvalues_.size());
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) mapped[k] = fn(eigenvalues_[k]);
  return eigenvectors_ * mapped.asDiagonal() * eigenvectors_.adjoint();
}

std::complex<double> SpectralDecomposition::pairing(const Eigen::VectorXcd& f,
                                                    const Eigen::VectorXcd& g,
                                                    const std::function<double(double)>& fn) const {
  const Eigen::VectorXcd fc = eigenvectors_.adjoint() * f;
  const Eigen::VectorXcd gc = eigenvectors_.adjoint() * g;
  std::complex<double> sum{0.0, 0.0};
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    sum += std::conj(fc[k]) * gc[k] * fn(eigenvalues_[k]);
  }
  return sum * grid_.cell_volume();
}

namespace {

void check_cap(const GridSpec& grid) {
  if (grid.size() > grid.cap) {
    throw OracleError("grid of size " + std::to_string(grid.size()) + " exceeds the cap " +
                      std::to_string(grid.cap));
  }
}

Eigen::MatrixXcd kinetic_matrix(const FieldConfig& fields, const GridSpec& grid) {
  const std::size_t sites = grid.sites();
  const auto n_sites = static_cast<Eigen::Index>(sites);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_sites, n_sites);
  if (grid.dimension == 0) return m;

  const double h = grid.spacing();
  const double hop = 0.5 / (h * h);
  const auto n = static_cast<std::size_t>(grid.n_per_axis);
  std::size_t stride = 1;
  for (int axis = 0; axis < grid.dimension; ++axis) {
    const auto ax = static_cast<std::size_t>(axis);
    for (std::size_t site = 0; site < sites; ++site) {
      const std::size_t coord = (site / stride) % n;
      const std::size_t neighbour = (coord + 1 == n) ? site - coord * stride : site + stride;
      // Link from x to x + h e_axis, unwrapped at the periodic seam.
      Vec3 mid = grid.site_position(site);
      mid[ax] += 0.5 * h;
      const double phase = fields.a(mid)[ax] * h;
      const std::complex<double> link = std::polar(1.0, -phase);
      const auto i = static_cast<Eigen::Index>(site);
      const auto j = static_cast<Eigen::Index>(neighbour);
      m(i, j) += -hop * link;
      m(j, i) += -hop * std::conj(link);
      m(i, i) += hop;
      m(j, j) += hop;
    }
    stride *= n;
  }
  return m;
}

}  // namespace

GridOperator discretize_h(const FieldConfig& fields, const GridSpec& grid) {
  if (grid.spin) throw OracleError("discretize_h needs a grid without spin");
  check_cap(grid);
  return {grid, kinetic_matrix(fields, grid), "h(a)"};
}

GridOperator discretize_pauli0(const FieldConfig& fields, const GridSpec& grid) {
  if (!grid.spin) throw OracleError("discretize_pauli0 needs a spin grid");
  check_cap(grid);
  const Eigen::MatrixXcd kinetic = kinetic_matrix(fields, grid);
  const std::size_t sites = grid.sites();
  const auto size = static_cast<Eigen::Index>(2 * sites);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index i = 0; i < kinetic.rows(); ++i) {
    for (Eigen::Index j = 0; j < kinetic.cols(); ++j) {
      if (kinetic(i, j) == 0.0) continue;
      m(2 * i, 2 * j) = kinetic(i, j);
      m(2 * i + 1, 2 * j + 1) = kinetic(i, j);
    }
  }
  for (std::size_t site = 0; site < sites; ++site) {
    const Vec3 b = fields.b(grid.site_position(site));
    const auto up = static_cast<Eigen::Index>(2 * site);
    const auto down = up + 1;
    m(up, up) += -0.5 * b[2];
    m(down, down) += 0.5 * b[2];
    m(up, down) += -0.5 * std::complex<double>(b[0], -b[1]);
    m(down, up) += -0.5 * std::complex<double>(b[0], b[1]);
  }
  return {grid, std::move(m), "H0_Z2(a,b)"};
}

GridOperator add_potential(const GridOperator& op, const ScalarPotential& V) {
  GridOperator out = op;
  const std::size_t per_site = op.grid.spin ? 2 : 1;
  for (std::size_t site = 0; site < op.grid.sites(); ++site) {
    const double v = V(op.grid.site_position(site));
    for (std::size_t s = 0; s < per_site; ++s) {
      const auto k = static_cast<Eigen::Index>(site * per_site + s);
      out.matrix(k, k) += v;
    }
  }
  out.label = op.label + " + V";
  return out;
}

double bernstein_eigenvalue(double lambda, double scale, const ModelParams& params,
                            const BernsteinOptions& options) {
  if (lambda < 0.0 && lambda >= -options.clamp_tolerance * std::max(1.0, scale)) lambda = 0.0;
  return laplace_exponent_extended(params, lambda);
}

GridOperator apply_bernstein(const GridOperator& op, const ModelParams& params,
                             const BernsteinOptions& options) {
  const SpectralDecomposition spectral(op);
  const double scale = spectral.eigenvalues().cwiseAbs().maxCoeff();
  GridOperator out{op.grid, spectral.apply([&](double lambda) {
                     return bernstein_eigenvalue(lambda, scale, params, options);
                   }),
                   "Psi(" + op.label + ")"};
  return out;
}

Eigen::MatrixXcd semigroup(const GridOperator& op, double t) {
  if (!(t >= 0.0)) throw DomainError("semigroup time must be nonnegative");
  const SpectralDecomposition spectral(op);
  return spectral.apply([t](double lambda) { return std::exp(-t * lambda); });
}

double boundary_mass(const TestFunction& f, const GridSpec& grid) {
  // |f|^2 / |f|^2_L2 is a Gaussian with standard deviation `width` per axis.
  const double edge = grid.half_extent - 3.0 * grid.spacing();
  double mass = 0.0;
  for (int i = 0; i < f.dimension; ++i) {
    const double x0 = f.center[static_cast<std::size_t>(i)];
    const double scale = std::sqrt(2.0) * f.width;
    mass += 0.5 * std::erfc((edge - x0) / scale) + 0.5 * std::erfc((edge + x0) / scale);
  }
  return std::min(mass, 1.0);
}

Eigen::VectorXcd sample_on_grid(const TestFunction& f, const GridSpec& grid) {
  if (f.dimension != grid.dimension) throw ContractError("test function and grid dimensions differ");
  if (grid.spin && !f.spin) throw ContractError("spin grid needs a spinor test function");
  const std::size_t sites = grid.sites();
  Eigen::VectorXcd values(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t site = 0; site < sites; ++site) {
    const Vec3 x = grid.site_position(site);
    if (grid.spin) {
      values[static_cast<Eigen::Index>(2 * site)] = f(x, 1);
      values[static_cast<Eigen::Index>(2 * site + 1)] = f(x, -1);
    } else {
      values[static_cast<Eigen::Index>(site)] = f.spatial(x);
    }
  }
  return values;
}

std::complex<double> semigroup_pairing(const GridOperator& op, const TestFunction& f,
                                       const TestFunction& g, double t) {
  if (!(t >= 0.0)) throw DomainError("semigroup time must be nonnegative");
  const SpectralDecomposition spectral(op);
  return spectral.pairing(sample_on_grid(f, op.grid), sample_on_grid(g, op.grid),
                          [t](double lambda) { return std::exp(-t * lambda); });
}

GridOperator limit_generator(const FieldConfig& fields, const GridSpec& grid,
                             const ModelParams& params) {
  const double kappa = limit_coefficients(params).kappa;
  if (grid.spin) {
    GridOperator op = add_potential(discretize_pauli0(fields, grid), fields.V);
    op.matrix *= kappa;
    op.label = "kappa (H0_Z2 + V)";
    return op;
  }
  GridOperator op = discretize_h(fields, grid);
  op.matrix *= kappa;
  op = add_potential(op, fields.V);
  op.label = "kappa h(a) + V";
  return op;
}

GridOperator relativistic_generator(const FieldConfig& fields, const GridSpec& grid,
                                    const ModelParams& params) {
  const GridOperator kinetic =
      grid.spin ? discretize_pauli0(fields, grid) : discretize_h(fields, grid);
  return add_potential(apply_bernstein(kinetic, params), fields.V);
}

}  // namespace relkac
