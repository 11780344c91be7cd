#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relkac/fields.hpp"
#include "relkac/fk_engine.hpp"
#include "relkac/model.hpp"
#include "relkac/oracle.hpp"

namespace relkac {

enum class ExperimentKind { Laplace, Moments, Compare, Limit, Sample };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct FieldSpec {
  int dimension = 1;
  PresetSpec a;
  PresetSpec V;
  PresetSpec b;

  FieldConfig build() const;
  bool operator==(const FieldSpec&) const = default;
};

enum class EstimatorKind { Spinless, Schrodinger, PauliNonrel, PauliRel };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(const std::string& name);

/// oracle: grid spectral value; closed_form: spin-only 2x2 exponential;
/// fourier: free d = 1 Fourier-side quadrature; spinless_estimator: the
/// spinless Monte Carlo estimator (for b = 0 reductions of Pauli cases).
enum class ReferenceKind { Oracle, ClosedForm, Fourier, SpinlessEstimator };

std::string to_string(ReferenceKind kind);
ReferenceKind reference_kind_from_string(const std::string& name);

struct SpotCheck {
  double c = 4.0;
  std::size_t samples = 20'000;

  bool operator==(const SpotCheck&) const = default;
};

/// One pairing to estimate (compare) or sweep (limit).
struct CaseConfig {
  std::string name;
  EstimatorKind estimator = EstimatorKind::Spinless;
  std::optional<ModelParams> params;
  double t = 1.0;
  FieldSpec fields;
  TestFunction f;
  TestFunction g;
  GridSpec grid;
  ReferenceKind reference = ReferenceKind::Oracle;
  std::optional<std::size_t> samples;
  /// Conventions to run; rows for `convention` carry the pass criterion.
  std::vector<JumpConvention> conventions;
  std::optional<JumpConvention> convention;
  bool discriminate = false;
  /// Expand into the four entries (e_i, exp(-tH) e_j) of the spin matrix.
  bool spin_matrix = false;
  std::optional<double> expected_slope;
  std::optional<SpotCheck> spot_check;
  /// Tolerance for the free-field lattice Fourier sum against the grid
  /// oracle (d = 1, a = 0); absent disables the check.
  std::optional<double> fourier_check;

  bool operator==(const CaseConfig&) const = default;
};

struct MomentLimitSweep {
  double u = 0.25;
  double t = 1.0;
  std::vector<double> c_values;

  bool operator==(const MomentLimitSweep&) const = default;
};

struct ExperimentConfig {
  std::optional<ExperimentKind> kind;
  std::string id = "experiment";
  std::uint64_t seed = 1;
  int workers = 1;
  std::string output = "results";
  std::size_t samples = 100'000;
  std::vector<ModelParams> params;
  std::vector<double> u;
  std::vector<double> t{1.0};
  std::vector<double> c_values;
  std::vector<int> moments{1, 2, 4};
  Discretization discretization;
  JumpConvention convention = JumpConvention::PreJump;
  double min_acceptance = 0.1;
  double threshold_se = 4.0;
  /// Failing Monte Carlo rows tolerated; default: one per 25 rows, at least 1.
  std::optional<std::size_t> max_outliers;
  std::vector<double> exp_moment_fractions;
  std::optional<MomentLimitSweep> exp_moment_limit;
  double slope_tolerance = 0.15;
  double limit_tolerance = 1e-3;
  bool uniform_bound = false;
  double kurtosis_threshold = 50.0;
  std::vector<CaseConfig> cases;
  /// sample: subordinator | brownian | spin
  std::string sample_kind = "subordinator";
  std::size_t sample_paths = 10;
  int sample_dimension = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parse a YAML config. Errors carry "line N:" anchors; unknown keys are fatal.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// YAML text that parse_config maps back to an equal config.
std::string emit_config(const ExperimentConfig& config);

}  // namespace relkac
