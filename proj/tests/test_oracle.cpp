#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "relkac/errors.hpp"
#include "relkac/oracle.hpp"

using relkac::Complex;
using relkac::FieldConfig;
using relkac::GridOperator;
using relkac::GridSpec;
using relkac::MagneticField;
using relkac::ModelParams;
using relkac::ScalarPotential;
using relkac::TestFunction;

namespace {

GridSpec grid1d(int n, double half_extent) {
  GridSpec g;
  g.dimension = 1;
  g.n_per_axis = n;
  g.half_extent = half_extent;
  return g;
}

double operator_norm(const Eigen::MatrixXcd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

TestFunction packet(double center, double momentum = 0.0) {
  TestFunction f;
  f.dimension = 1;
  f.center = {center, 0, 0};
  f.momentum = {momentum, 0, 0};
  return f;
}

const ModelParams classical{1.0, 2.0, 2.0, 1.0, 1.0};

}  // namespace

TEST_CASE("free lattice Laplacian has circulant eigenvalues") {
  const auto grid = grid1d(8, M_PI);
  const auto op = relkac::discretize_h(FieldConfig{}, grid);
  const relkac::SpectralDecomposition spectral(op);
  std::vector<double> expected;
  const double dx = grid.spacing();
  for (int k = 0; k < 8; ++k) expected.push_back((1.0 - std::cos(2.0 * M_PI * k / 8)) / (dx * dx));
  std::sort(expected.begin(), expected.end());
  for (int k = 0; k < 8; ++k) CHECK(spectral.eigenvalues()(k) == doctest::Approx(expected[k]).epsilon(1e-10));
}

TEST_CASE("Peierls phases make gauge covariance exact") {
  GridSpec grid;
  grid.dimension = 2;
  grid.n_per_axis = 8;
  grid.half_extent = 4.0;
  FieldConfig base;
  base.dimension = 2;
  base.a.curl = {0.0, 0.0, 0.7};
  FieldConfig shifted = base;
  // chi = k . x with k = pi j / L is single-valued on the periodic lattice.
  shifted.a.gradient_k = {M_PI * 1 / grid.half_extent, M_PI * 3 / grid.half_extent, 0.0};

  const auto h = relkac::discretize_h(base, grid).matrix;
  const auto h_shifted = relkac::discretize_h(shifted, grid).matrix;
  Eigen::VectorXcd phases(static_cast<Eigen::Index>(grid.sites()));
  for (std::size_t s = 0; s < grid.sites(); ++s) {
    phases(static_cast<Eigen::Index>(s)) =
        std::polar(1.0, shifted.a.gauge_function(grid.site_position(s)));
  }
  const Eigen::MatrixXcd conjugated = phases.asDiagonal() * h * phases.conjugate().asDiagonal();
  CHECK((h_shifted - conjugated).cwiseAbs().maxCoeff() <= 1e-10 * h.cwiseAbs().maxCoeff());
}

TEST_CASE("kinetic operators are Hermitian and positive semidefinite") {
  GridSpec grid;
  grid.dimension = 2;
  grid.n_per_axis = 10;
  grid.half_extent = 5.0;
  std::vector<FieldConfig> presets(3);
  for (auto& f : presets) f.dimension = 2;
  presets[1].a.curl = {0.0, 0.0, 1.3};
  presets[2].a.curl = {0.0, 0.0, -0.4};
  presets[2].a.gradient_lambda = 0.5;
  presets[2].a.gradient_k = {0.2, 0.0, 0.0};
  for (const auto& fields : presets) {
    const auto op = relkac::discretize_h(fields, grid);
    CHECK(op.hermiticity_error() <= 1e-12);
    const relkac::SpectralDecomposition spectral(op);
    CHECK(spectral.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("Pauli operator on the lattice") {
  GridSpec grid = grid1d(12, 4.0);
  grid.spin = true;
  FieldConfig zero_b;
  zero_b.a.gradient_k = {0.3, 0, 0};
  const auto pauli = relkac::discretize_pauli0(zero_b, grid);
  GridSpec plain = grid;
  plain.spin = false;
  const auto h = relkac::discretize_h(zero_b, plain).matrix;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      CHECK(pauli.matrix(2 * i, 2 * j) == h(i, j));
      CHECK(pauli.matrix(2 * i + 1, 2 * j + 1) == h(i, j));
      CHECK(pauli.matrix(2 * i, 2 * j + 1) == Complex(0.0));
    }
  }

  GridSpec spin_only;
  spin_only.dimension = 0;
  spin_only.spin = true;
  const auto sx = relkac::discretize_pauli0(FieldConfig{0, {}, {}, MagneticField::constant({1, 0, 0})},
                                            spin_only);
  CHECK(sx.hermiticity_error() <= 1e-12);
  const relkac::SpectralDecomposition sx_spec(sx);
  CHECK(sx_spec.eigenvalues()(0) == doctest::Approx(-0.5));
  CHECK(sx_spec.eigenvalues()(1) == doctest::Approx(0.5));

  // Constant b on a grid: spectrum is the kinetic spectrum shifted by +-|b|/2.
  FieldConfig bfield;
  bfield.b = MagneticField::constant({0.3, 0.4, 0.0});
  const auto op = relkac::discretize_pauli0(bfield, grid);
  CHECK(op.hermiticity_error() <= 1e-12);
  const relkac::SpectralDecomposition spectral(op);
  const relkac::SpectralDecomposition kinetic(relkac::discretize_h(bfield, plain));
  std::vector<double> expected;
  for (Eigen::Index k = 0; k < kinetic.eigenvalues().size(); ++k) {
    expected.push_back(kinetic.eigenvalues()(k) - 0.25);
    expected.push_back(kinetic.eigenvalues()(k) + 0.25);
  }
  std::sort(expected.begin(), expected.end());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(spectral.eigenvalues()(static_cast<Eigen::Index>(k)) ==
          doctest::Approx(expected[k]).epsilon(1e-10));
  }
}

TEST_CASE("Bernstein spectral calculus") {
  GridSpec scalar;
  scalar.dimension = 0;
  GridOperator one{scalar, Eigen::MatrixXcd::Identity(1, 1), "1"};
  CHECK(std::abs(relkac::apply_bernstein(one, classical).matrix(0, 0) -
                 Complex(std::sqrt(3.0) - 1.0)) < 1e-14);

  const auto grid = grid1d(16, 5.0);
  GridOperator zero{grid, Eigen::MatrixXcd::Zero(16, 16), "0"};
  CHECK(relkac::apply_bernstein(zero, classical).matrix.cwiseAbs().maxCoeff() == 0.0);

  FieldConfig fields;
  fields.a.gradient_k = {0.4, 0, 0};
  fields.V = ScalarPotential::cosine(0.5, 1.0, 1);
  const auto op = relkac::add_potential(relkac::discretize_h(fields, grid), fields.V);
  const ModelParams params(1.3, 1.0, 1.0, 1.0, 1.5);
  const auto psi = relkac::apply_bernstein(op, params);
  CHECK(psi.hermiticity_error() <= 1e-12);

  // Spectral mapping.
  const relkac::SpectralDecomposition before(op), after(psi);
  for (Eigen::Index k = 0; k < 16; ++k) {
    CHECK(after.eigenvalues()(k) ==
          doctest::Approx(relkac::laplace_exponent_extended(params, before.eigenvalues()(k)))
              .epsilon(1e-10));
  }

  // Commutes with a permutation similarity.
  std::vector<int> perm(16);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(3));
  Eigen::PermutationMatrix<Eigen::Dynamic> P(16);
  for (int i = 0; i < 16; ++i) P.indices()(i) = perm[static_cast<std::size_t>(i)];
  GridOperator permuted = op;
  permuted.matrix = P * op.matrix * P.transpose();
  const Eigen::MatrixXcd lhs = relkac::apply_bernstein(permuted, params).matrix;
  const Eigen::MatrixXcd rhs = P * psi.matrix * P.transpose();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);

  // Clamping of tiny negative eigenvalues, continuation below, error beyond -theta.
  CHECK(relkac::bernstein_eigenvalue(-1e-14, 1.0, params) == 0.0);
  CHECK(relkac::bernstein_eigenvalue(-0.5 * params.theta(), 1.0, params) < 0.0);
  CHECK_THROWS_AS(relkac::bernstein_eigenvalue(-2.0 * params.theta(), 1.0, params),
                  relkac::DomainError);
}

TEST_CASE("semigroups") {
  const auto grid = grid1d(24, 6.0);
  FieldConfig fields;
  fields.V = ScalarPotential::gaussian_bump(-0.7, 1.0, {});
  const auto op = relkac::relativistic_generator(fields, grid, classical.with_c(2.0));
  CHECK(op.hermiticity_error() <= 1e-12);

  const Eigen::MatrixXcd a = relkac::semigroup(op, 0.4), b = relkac::semigroup(op, 0.9);
  const Eigen::MatrixXcd ab = relkac::semigroup(op, 1.3);
  CHECK(operator_norm(a * b - ab) <= 1e-8);

  // ||exp(-t (Psi(h) + V))|| <= e^{t ||V||}.
  CHECK(operator_norm(ab) <= std::exp(1.3 * fields.V.sup_norm()) * (1 + 1e-12));

  // t = 0 gives the grid inner product; a constant shift scales exactly.
  const auto f = packet(0.0), g = packet(0.5, 0.3);
  const auto fv = relkac::sample_on_grid(f, grid), gv = relkac::sample_on_grid(g, grid);
  const Complex inner = fv.dot(gv) * grid.cell_volume();
  CHECK(std::abs(relkac::semigroup_pairing(op, f, g, 0.0) - inner) < 1e-13);
  const auto shifted = relkac::add_potential(op, ScalarPotential::constant(0.6));
  CHECK(std::abs(relkac::semigroup_pairing(shifted, f, g, 1.0) -
                 std::exp(-0.6) * relkac::semigroup_pairing(op, f, g, 1.0)) < 1e-12);
}

TEST_CASE("lattice Fourier sum agrees with the grid oracle") {
  const auto grid = grid1d(256, 12.0);
  const auto f = packet(0.0), g = packet(0.7, -0.4);
  const auto psi = [](double k) { return relkac::laplace_exponent(classical, k); };
  const auto op = relkac::apply_bernstein(relkac::discretize_h(FieldConfig{}, grid), classical);
  const auto oracle = relkac::semigroup_pairing(op, f, g, 1.0);
  const auto lattice = relkac::fourier_pairing_lattice(f, g, 1.0, grid, psi);
  CHECK(std::abs(oracle - lattice) <= 1e-6);
  // The continuum value is close too; the difference is the lattice error.
  const auto continuum = relkac::fourier_pairing_continuum(f, g, 1.0, psi);
  CHECK(std::abs(oracle - continuum) <= 1e-4);
}

TEST_CASE("limit generator and the c-sweep") {
  const auto grid = grid1d(32, 6.0);
  FieldConfig fields;
  fields.V = ScalarPotential::cosine(0.4, 1.0, 1);
  const auto limit = relkac::limit_generator(fields, grid, classical);
  const auto unscaled = relkac::add_potential(relkac::discretize_h(fields, grid), fields.V);
  CHECK((limit.matrix - unscaled.matrix).cwiseAbs().maxCoeff() <= 1e-14);

  const Eigen::MatrixXcd target = relkac::semigroup(limit, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (const double c : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    const auto op = relkac::relativistic_generator(fields, grid, classical.with_c(c));
    const double gap = operator_norm(relkac::semigroup(op, 1.0) - target);
    CHECK(gap < prev);
    prev = gap;
  }

  GridSpec spin_grid = grid1d(8, 4.0);
  spin_grid.spin = true;
  // kappa != 1 here; the limit scales V by kappa while the relativistic
  // generator does not, so V is switched off to isolate the kinetic limit.
  fields.V = ScalarPotential::zero();
  fields.b = MagneticField::constant({0.3, 0.2, 0.1});
  const ModelParams p(1.5, 1.0, 3.0, 2.0, 1.0);
  const auto pauli_limit = relkac::limit_generator(fields, spin_grid, p);
  const Eigen::MatrixXcd pauli_target = relkac::semigroup(pauli_limit, 1.0);
  prev = std::numeric_limits<double>::infinity();
  for (const double c : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    const auto op = relkac::relativistic_generator(fields, spin_grid, p.with_c(c));
    const double gap = operator_norm(relkac::semigroup(op, 1.0) - pauli_target);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("boundary mass of a packet") {
  auto grid = grid1d(128, 10.0);
  const auto centred = packet(0.0);
  CHECK(relkac::boundary_mass(centred, grid) < 1e-10);
  // Edge at L - 3 dx; one side at distance 1 standard deviation.
  const double edge = grid.half_extent - 3.0 * grid.spacing();
  const auto shifted = packet(edge - 1.0);
  CHECK(relkac::boundary_mass(shifted, grid) ==
        doctest::Approx(0.5 * std::erfc(1.0 / std::sqrt(2.0)) +
                        0.5 * std::erfc((2.0 * edge - 1.0) / std::sqrt(2.0))));
}

TEST_CASE("grid size cap") {
  GridSpec grid;
  grid.dimension = 3;
  grid.n_per_axis = 32;
  CHECK_THROWS_AS(relkac::discretize_h(FieldConfig{}, grid), relkac::OracleError);
}
