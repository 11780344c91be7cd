#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "relkac/errors.hpp"
#include "relkac/oracle.hpp"

namespace relkac {

namespace {

void check_free_1d(const TestFunction& f, const TestFunction& g) {
  if (f.dimension != 1 || g.dimension != 1) {
    throw ContractError("Fourier-side pairing is implemented for d = 1 packets");
  }
}

}  // namespace

std::complex<double> fourier_pairing_continuum(const TestFunction& f, const TestFunction& g,
                                               double t,
                                               const std::function<double(double)>& spectral_fn) {
  check_free_1d(f, g);
  auto integrand = [&](double xi) {
    return std::conj(f.fourier({xi, 0.0, 0.0})) * g.fourier({xi, 0.0, 0.0}) *
           std::exp(-t * spectral_fn(0.5 * xi * xi));
  };
  // conj(f^) g^ is a Gaussian in xi centred between the two momenta.
  const double wf2 = f.width * f.width;
  const double wg2 = g.width * g.width;
  const double centre = (wf2 * f.momentum[0] + wg2 * g.momentum[0]) / (wf2 + wg2);
  const double half = 12.0 / std::sqrt(wf2 + wg2) + std::abs(f.momentum[0] - g.momentum[0]);

  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
  double error_re = 0.0;
  double error_im = 0.0;
  const double re = Quadrature::integrate([&](double xi) { return integrand(xi).real(); },
                                          centre - half, centre + half, 25, 1e-14, &error_re);
  const double im = Quadrature::integrate([&](double xi) { return integrand(xi).imag(); },
                                          centre - half, centre + half, 25, 1e-14, &error_im);
  if (error_re > 1e-10 || error_im > 1e-10) {
    throw QuadratureError("Fourier-side pairing quadrature did not converge");
  }
  return {re, im};
}

std::complex<double> fourier_pairing_lattice(const TestFunction& f, const TestFunction& g,
                                             double t, const GridSpec& grid,
                                             const std::function<double(double)>& spectral_fn) {
  check_free_1d(f, g);
  if (grid.dimension != 1 || grid.spin) throw ContractError("lattice Fourier pairing needs a 1-d grid");
  const double dx = grid.spacing();
  const double dk = std::numbers::pi / grid.half_extent;
  const int n = grid.n_per_axis;
  std::complex<double> sum{0.0, 0.0};
  for (int j = -n / 2; j < n - n / 2; ++j) {
    const double k = dk * j;
    const double symbol = (1.0 - std::cos(k * dx)) / (dx * dx);
    sum += std::conj(f.fourier({k, 0.0, 0.0})) * g.fourier({k, 0.0, 0.0}) *
           std::exp(-t * spectral_fn(symbol));
  }
  return sum * dk;
}

}  // namespace relkac
