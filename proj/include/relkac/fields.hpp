#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relkac/sampler.hpp"

namespace relkac {

using Complex = std::complex<double>;

/// A named preset with numeric parameters, as written in config files.
struct PresetSpec {
  std::string name = "zero";
  std::map<std::string, double> values;

  bool operator==(const PresetSpec&) const = default;
};

/// a(x) = (b2 x3, b3 x1, b1 x2) + lambda x + k.
///
/// The first term is a linear gauge with curl (b1, b2, b3); the remaining
/// two are the gradient of chi(x) = lambda |x|^2 / 2 + k . x.
struct VectorPotential {
  Vec3 curl{};
  double gradient_lambda = 0.0;
  Vec3 gradient_k{};

  Vec3 operator()(const Vec3& x) const;
  double divergence() const { return 3.0 * gradient_lambda; }
  /// chi for the pure-gradient part.
  double gauge_function(const Vec3& x) const;
  bool is_zero() const;
};

class ScalarPotential {
 public:
  enum class Kind { Zero, Constant, Cosine, GaussianBump, SmoothedHarmonic };

  ScalarPotential() = default;
  static ScalarPotential zero() { return {}; }
  static ScalarPotential constant(double value);
  /// amplitude * mean_i cos(wavenumber * x_i) over the first `dimension` axes.
  static ScalarPotential cosine(double amplitude, double wavenumber, int dimension);
  static ScalarPotential gaussian_bump(double amplitude, double width, const Vec3& center);
  /// (omega^2 / 2) |x|^2 / (1 + |x|^2 / radius^2): harmonic near the
  /// origin, bounded by omega^2 radius^2 / 2.
  static ScalarPotential smoothed_harmonic(double omega, double radius);

  double operator()(const Vec3& x) const;
  double sup_norm() const;
  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Zero || kind_ == Kind::Constant; }

 private:
  Kind kind_ = Kind::Zero;
  double amplitude_ = 0.0;
  double scale_ = 1.0;
  int dimension_ = 1;
  Vec3 center_{};
};

class MagneticField {
 public:
  enum class Kind { Zero, Constant, GaussianBump };

  MagneticField() = default;
  static MagneticField constant(const Vec3& b);
  /// background + amplitude * exp(-|x - center|^2 / (2 width^2)) on one
  /// component (axis 0, 1 or 2).
  static MagneticField gaussian_bump(int axis, double amplitude, double width,
                                     const Vec3& center, const Vec3& background = {});

  Vec3 operator()(const Vec3& x) const;
  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ != Kind::GaussianBump; }
  /// sup |b3|.
  double sup_b3() const;
  /// sup (1/2) sqrt(b1^2 + b2^2).
  double sup_transverse() const;
  /// inf (1/2) sqrt(b1^2 + b2^2); zero means the jump-weight logarithm
  /// degenerates somewhere.
  double inf_transverse() const;

 private:
  Kind kind_ = Kind::Zero;
  Vec3 background_{};
  int axis_ = 0;
  double amplitude_ = 0.0;
  double width_ = 1.0;
  Vec3 center_{};
};

struct FieldConfig {
  /// 0 is the spin-only mode: no kinetic term, fields evaluated at the origin.
  int dimension = 1;
  VectorPotential a;
  ScalarPotential V;
  MagneticField b;
};

/// Normalized Gaussian wavepacket, optionally chirped and carrying a spinor:
///
///   f(x, s) = scale * chi_s * (2 pi w^2)^(-d/4)
///             * exp(-|x - x0|^2 / (4 w^2) + i p.x + i (lambda |x|^2 / 2 + k.x))
///
/// where the chirp (lambda, k) is a gauge phase. Dimension 0 has no spatial
/// factor.
struct TestFunction {
  int dimension = 1;
  Vec3 center{};
  double width = 1.0;
  Vec3 momentum{};
  double chirp_lambda = 0.0;
  Vec3 chirp_k{};
  Complex scale{1.0, 0.0};
  /// Amplitudes for theta = +1 and theta = -1. Absent for spinless use.
  std::optional<std::array<Complex, 2>> spin;

  Complex spatial(const Vec3& x) const;
  /// f(x, theta) with theta = +-1; equals spatial(x) without a spinor.
  Complex operator()(const Vec3& x, int theta) const;
  /// L2 norm, including the spinor when present.
  double norm() const;
  /// Closed-form unitary Fourier transform of the spatial factor
  /// (unchirped packets only).
  Complex fourier(const Vec3& xi) const;
  /// Multiply by exp(i sign chi) for the gradient part of `a`.
  TestFunction gauge_transformed(const VectorPotential& a, double sign) const;

  bool operator==(const TestFunction&) const = default;
};

VectorPotential make_vector_potential(const PresetSpec& spec);
ScalarPotential make_scalar_potential(const PresetSpec& spec, int dimension);
MagneticField make_magnetic_field(const PresetSpec& spec, const VectorPotential& a);

/// Catalog of preset names and their parameter keys, for docs and validation.
std::map<std::string, std::vector<std::string>> preset_catalog(const std::string& field);

}  // namespace relkac
