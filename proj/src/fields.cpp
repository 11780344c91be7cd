#include "relkac/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "relkac/errors.hpp"

namespace relkac {

namespace {

double norm2(const Vec3& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }

double dot(const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

// Reads the preset's parameters, rejecting keys the preset does not know.
class PresetReader {
 public:
  PresetReader(const PresetSpec& spec, const std::string& field,
               std::map<std::string, double> defaults)
      : spec_(spec), values_(std::move(defaults)) {
    for (const auto& [key, value] : spec.values) {
      if (!values_.contains(key)) {
        throw ConfigError(field + " preset '" + spec.name + "' has no parameter '" + key + "'");
      }
      values_[key] = value;
    }
  }
  double operator[](const std::string& key) const { return values_.at(key); }
  Vec3 vec(const std::string& prefix) const {
    return {values_.at(prefix + "1"), values_.at(prefix + "2"), values_.at(prefix + "3")};
  }

 private:
  const PresetSpec& spec_;
  std::map<std::string, double> values_;
};

const std::map<std::string, std::map<std::string, double>>& vector_presets() {
  static const std::map<std::string, std::map<std::string, double>> presets = {
      {"zero", {}},
      {"linear_gauge", {{"b1", 0.0}, {"b2", 0.0}, {"b3", 0.0}}},
      {"gradient", {{"lambda", 0.0}}},
      {"constant", {{"k1", 0.0}, {"k2", 0.0}, {"k3", 0.0}}},
  };
  return presets;
}

const std::map<std::string, std::map<std::string, double>>& scalar_presets() {
  static const std::map<std::string, std::map<std::string, double>> presets = {
      {"zero", {}},
      {"constant", {{"value", 0.0}}},
      {"cosine", {{"amplitude", 1.0}, {"wavenumber", 1.0}}},
      {"gaussian_bump",
       {{"amplitude", 1.0}, {"width", 1.0}, {"x1", 0.0}, {"x2", 0.0}, {"x3", 0.0}}},
      {"smoothed_harmonic", {{"omega", 1.0}, {"radius", 2.0}}},
  };
  return presets;
}

const std::map<std::string, std::map<std::string, double>>& magnetic_presets() {
  static const std::map<std::string, std::map<std::string, double>> presets = {
      {"zero", {}},
      {"constant", {{"b1", 0.0}, {"b2", 0.0}, {"b3", 0.0}}},
      {"curl", {}},
      {"gaussian_bump",
       {{"axis", 0.0},
        {"amplitude", 1.0},
        {"width", 1.0},
        {"x1", 0.0},
        {"x2", 0.0},
        {"x3", 0.0},
        {"bg1", 0.0},
        {"bg2", 0.0},
        {"bg3", 0.0}}},
  };
  return presets;
}

const std::map<std::string, double>& lookup(
    const std::map<std::string, std::map<std::string, double>>& presets, const PresetSpec& spec,
    const std::string& field) {
  const auto it = presets.find(spec.name);
  if (it == presets.end()) throw ConfigError("unknown " + field + " preset '" + spec.name + "'");
  return it->second;
}

}  // namespace

Vec3 VectorPotential::operator()(const Vec3& x) const {
  return {curl[1] * x[2] + gradient_lambda * x[0] + gradient_k[0],
          curl[2] * x[0] + gradient_lambda * x[1] + gradient_k[1],
          curl[0] * x[1] + gradient_lambda * x[2] + gradient_k[2]};
}

double VectorPotential::gauge_function(const Vec3& x) const {
  return 0.5 * gradient_lambda * norm2(x) + dot(gradient_k, x);
}

bool VectorPotential::is_zero() const {
  return curl == Vec3{} && gradient_lambda == 0.0 && gradient_k == Vec3{};
}

ScalarPotential ScalarPotential::constant(double value) {
  ScalarPotential v;
  v.kind_ = Kind::Constant;
  v.amplitude_ = value;
  return v;
}

ScalarPotential ScalarPotential::cosine(double amplitude, double wavenumber, int dimension) {
  if (dimension < 1 || dimension > 3) throw DomainError("cosine potential needs 1 <= d <= 3");
  ScalarPotential v;
  v.kind_ = Kind::Cosine;
  v.amplitude_ = amplitude;
  v.scale_ = wavenumber;
  v.dimension_ = dimension;
  return v;
}

ScalarPotential ScalarPotential::gaussian_bump(double amplitude, double width,
                                               const Vec3& center) {
  if (!(width > 0.0)) throw DomainError("Gaussian bump width must be positive");
  ScalarPotential v;
  v.kind_ = Kind::GaussianBump;
  v.amplitude_ = amplitude;
  v.scale_ = width;
  v.center_ = center;
  return v;
}

ScalarPotential ScalarPotential::smoothed_harmonic(double omega, double radius) {
  if (!(radius > 0.0)) throw DomainError("smoothed harmonic radius must be positive");
  ScalarPotential v;
  v.kind_ = Kind::SmoothedHarmonic;
  v.amplitude_ = omega;
  v.scale_ = radius;
  return v;
}

double ScalarPotential::operator()(const Vec3& x) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return amplitude_;
    case Kind::Cosine: {
      double sum = 0.0;
      for (int i = 0; i < dimension_; ++i) sum += std::cos(scale_ * x[static_cast<std::size_t>(i)]);
      return amplitude_ * sum / dimension_;
    }
    case Kind::GaussianBump: {
      const Vec3 d{x[0] - center_[0], x[1] - center_[1], x[2] - center_[2]};
      return amplitude_ * std::exp(-norm2(d) / (2.0 * scale_ * scale_));
    }
    case Kind::SmoothedHarmonic: {
      const double r2 = norm2(x);
      return 0.5 * amplitude_ * amplitude_ * r2 / (1.0 + r2 / (scale_ * scale_));
    }
  }
  return 0.0;
}

double ScalarPotential::sup_norm() const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
    case Kind::Cosine:
    case Kind::GaussianBump:
      return std::abs(amplitude_);
    case Kind::SmoothedHarmonic:
      return 0.5 * amplitude_ * amplitude_ * scale_ * scale_;
  }
  return 0.0;
}

MagneticField MagneticField::constant(const Vec3& b) {
  MagneticField field;
  field.kind_ = (b == Vec3{}) ? Kind::Zero : Kind::Constant;
  field.background_ = b;
  return field;
}

MagneticField MagneticField::gaussian_bump(int axis, double amplitude, double width,
                                           const Vec3& center, const Vec3& background) {
  if (axis < 0 || axis > 2) throw DomainError("magnetic bump axis must be 0, 1 or 2");
  if (!(width > 0.0)) throw DomainError("magnetic bump width must be positive");
  MagneticField field;
  field.kind_ = Kind::GaussianBump;
  field.axis_ = axis;
  field.amplitude_ = amplitude;
  field.width_ = width;
  field.center_ = center;
  field.background_ = background;
  return field;
}

Vec3 MagneticField::operator()(const Vec3& x) const {
  Vec3 b = background_;
  if (kind_ == Kind::GaussianBump) {
    const Vec3 d{x[0] - center_[0], x[1] - center_[1], x[2] - center_[2]};
    b[static_cast<std::size_t>(axis_)] += amplitude_ * std::exp(-norm2(d) / (2.0 * width_ * width_));
  }
  return b;
}

namespace {

// Range of |component| over the field, as (inf, sup), when the component
// sweeps the half-open interval between `base` and `base + amplitude`.
std::pair<double, double> component_range(double base, double amplitude) {
  const double lo = std::min(base, base + amplitude);
  const double hi = std::max(base, base + amplitude);
  const double sup = std::max(std::abs(lo), std::abs(hi));
  const double inf = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
  return {inf, sup};
}

}  // namespace

double MagneticField::sup_b3() const {
  if (kind_ == Kind::GaussianBump && axis_ == 2) {
    return component_range(background_[2], amplitude_).second;
  }
  return std::abs(background_[2]);
}

double MagneticField::sup_transverse() const {
  double b1 = std::abs(background_[0]);
  double b2 = std::abs(background_[1]);
  if (kind_ == Kind::GaussianBump && axis_ == 0) b1 = component_range(background_[0], amplitude_).second;
  if (kind_ == Kind::GaussianBump && axis_ == 1) b2 = component_range(background_[1], amplitude_).second;
  return 0.5 * std::hypot(b1, b2);
}

double MagneticField::inf_transverse() const {
  double b1 = std::abs(background_[0]);
  double b2 = std::abs(background_[1]);
  if (kind_ == Kind::GaussianBump && axis_ == 0) b1 = component_range(background_[0], amplitude_).first;
  if (kind_ == Kind::GaussianBump && axis_ == 1) b2 = component_range(background_[1], amplitude_).first;
  return 0.5 * std::hypot(b1, b2);
}

Complex TestFunction::spatial(const Vec3& x) const {
  if (dimension == 0) return scale;
  double exponent = 0.0;
  double phase = chirp_lambda * 0.5 * norm2(x) + dot(chirp_k, x);
  for (int i = 0; i < dimension; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double d = x[k] - center[k];
    exponent -= d * d / (4.0 * width * width);
    phase += momentum[k] * x[k];
  }
  const double normalization = std::pow(2.0 * std::numbers::pi * width * width, -0.25 * dimension);
  return scale * std::polar(normalization * std::exp(exponent), phase);
}

Complex TestFunction::operator()(const Vec3& x, int theta) const {
  const Complex value = spatial(x);
  if (!spin) return value;
  return value * (*spin)[theta == 1 ? 0 : 1];
}

double TestFunction::norm() const {
  double spinor = 1.0;
  if (spin) spinor = std::sqrt(std::norm((*spin)[0]) + std::norm((*spin)[1]));
  return std::abs(scale) * spinor;
}

Complex TestFunction::fourier(const Vec3& xi) const {
  if (chirp_lambda != 0.0 || chirp_k != Vec3{}) {
    throw DomainError("closed-form Fourier transform needs an unchirped packet");
  }
  Complex value = scale;
  for (int i = 0; i < dimension; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double shift = xi[k] - momentum[k];
    value *= std::pow(2.0 * width * width / std::numbers::pi, 0.25) *
             std::polar(std::exp(-width * width * shift * shift), -shift * center[k]);
  }
  return value;
}

TestFunction TestFunction::gauge_transformed(const VectorPotential& a, double sign) const {
  TestFunction out = *this;
  out.chirp_lambda += sign * a.gradient_lambda;
  for (std::size_t i = 0; i < 3; ++i) out.chirp_k[i] += sign * a.gradient_k[i];
  return out;
}

VectorPotential make_vector_potential(const PresetSpec& spec) {
  const PresetReader p(spec, "vector potential", lookup(vector_presets(), spec, "vector potential"));
  VectorPotential a;
  if (spec.name == "linear_gauge") a.curl = p.vec("b");
  if (spec.name == "gradient") a.gradient_lambda = p["lambda"];
  if (spec.name == "constant") a.gradient_k = p.vec("k");
  return a;
}

ScalarPotential make_scalar_potential(const PresetSpec& spec, int dimension) {
  const PresetReader p(spec, "scalar potential", lookup(scalar_presets(), spec, "scalar potential"));
  if (spec.name == "constant") return ScalarPotential::constant(p["value"]);
  if (spec.name == "cosine") {
    return ScalarPotential::cosine(p["amplitude"], p["wavenumber"], std::max(dimension, 1));
  }
  if (spec.name == "gaussian_bump") {
    return ScalarPotential::gaussian_bump(p["amplitude"], p["width"], p.vec("x"));
  }
  if (spec.name == "smoothed_harmonic") {
    return ScalarPotential::smoothed_harmonic(p["omega"], p["radius"]);
  }
  return ScalarPotential::zero();
}

MagneticField make_magnetic_field(const PresetSpec& spec, const VectorPotential& a) {
  const PresetReader p(spec, "magnetic field", lookup(magnetic_presets(), spec, "magnetic field"));
  if (spec.name == "constant") return MagneticField::constant(p.vec("b"));
  if (spec.name == "curl") return MagneticField::constant(a.curl);
  if (spec.name == "gaussian_bump") {
    const double axis = p["axis"];
    if (axis != 0.0 && axis != 1.0 && axis != 2.0) {
      throw ConfigError("magnetic gaussian_bump axis must be 0, 1 or 2");
    }
    return MagneticField::gaussian_bump(static_cast<int>(axis), p["amplitude"], p["width"],
                                        p.vec("x"), p.vec("bg"));
  }
  return {};
}

std::map<std::string, std::vector<std::string>> preset_catalog(const std::string& field) {
  const std::map<std::string, std::map<std::string, double>>* presets = nullptr;
  if (field == "a") presets = &vector_presets();
  if (field == "V") presets = &scalar_presets();
  if (field == "b") presets = &magnetic_presets();
  if (presets == nullptr) throw ConfigError("unknown field '" + field + "'");
  std::map<std::string, std::vector<std::string>> catalog;
  for (const auto& [name, keys] : *presets) {
    auto& list = catalog[name];
    for (const auto& key : keys) list.push_back(key.first);
  }
  return catalog;
}

}  // namespace relkac
