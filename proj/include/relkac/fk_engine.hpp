#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relkac/fields.hpp"
#include "relkac/model.hpp"
#include "relkac/paths.hpp"
#include "relkac/sampler.hpp"

namespace relkac {

struct Discretization {
  int n_outer = 256;
  /// Uniform inner step. 0 selects t_alpha / 512 when the fields need an
  /// inner grid (non-zero a, non-constant V in ordinary time, non-constant
  /// b) and no uniform points otherwise.
  double inner_step = 0.0;

  bool operator==(const Discretization&) const = default;
};

struct EstimatorOptions {
  std::size_t n_samples = 100'000;
  std::uint64_t seed = 1;
  /// Added to the sample index to form the stream id.
  std::uint64_t stream_offset = 0;
  int workers = 1;
  Discretization discretization;
  JumpConvention convention = JumpConvention::PreJump;
  TemperedOptions tempered;
  /// Proposal standard deviation relative to the width of |f|^2.
  double proposal_width_factor = 1.5;
  /// Draw one set of paths per sample and reuse it for both initial spins.
  bool share_spin_paths = true;
  /// Kurtosis of e^{T} (M')^{#jumps} above which the variance alarm fires.
  double kurtosis_threshold = 50.0;
};

struct PairingEstimate {
  std::complex<double> mean;
  /// max(stderr_re, stderr_im).
  double std_error = 0.0;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  Discretization discretization;
  JumpConvention convention = JumpConvention::PreJump;
  /// Relativistic Pauli only; NaN elsewhere.
  double weight_kurtosis = 0.0;
  bool variance_alarm = false;
};

/// Streaming mean and variance of a complex sample (Welford / Chan merge)
/// plus power sums of a positive auxiliary weight for the kurtosis alarm.
class PairingAccumulator {
 public:
  void add(std::complex<double> value, double aux_weight = 0.0);
  void merge(const PairingAccumulator& other);

  std::size_t count() const { return n_; }
  std::complex<double> mean() const { return {mean_re_, mean_im_}; }
  double stderr_re() const;
  double stderr_im() const;
  double aux_kurtosis() const;

 private:
  std::size_t n_ = 0;
  double mean_re_ = 0.0, m2_re_ = 0.0;
  double mean_im_ = 0.0, m2_im_ = 0.0;
  double aux_[4] = {0.0, 0.0, 0.0, 0.0};
};

/// (f, exp(-t H_c^alpha) g) for H_c^alpha = Psi(h(a)) + V, by Brownian
/// motion time-changed by T^c with an importance-sampled starting point.
PairingEstimate estimate_pairing_spinless(const ModelParams& params, const FieldConfig& fields,
                                          const TestFunction& f, const TestFunction& g,
                                          double t, const EstimatorOptions& options);

/// (f, exp(-t (h(a) + V)) g): the same estimator with the deterministic clock T_t = t.
PairingEstimate estimate_pairing_schrodinger(const FieldConfig& fields, const TestFunction& f,
                                             const TestFunction& g, double t,
                                             const EstimatorOptions& options);

/// (f, exp(-t H_{Z2}(a, b)) g) = e^t sum_sigma E[conj f(q_0) g(q_t) e^{Z_t}].
PairingEstimate estimate_pairing_pauli_nonrel(const FieldConfig& fields, const TestFunction& f,
                                              const TestFunction& g, double t,
                                              const EstimatorOptions& options);

/// (f, exp(-t (Psi(H0_{Z2}(a, b)) + V)) g)
///   = sum_sigma E[e^{T_t} conj f(q_0) g(q_{T_t}) e^{Z~_t}].
PairingEstimate estimate_pairing_pauli_rel(const ModelParams& params, const FieldConfig& fields,
                                           const TestFunction& f, const TestFunction& g,
                                           double t, const EstimatorOptions& options);

using MultiSampleFn =
    std::function<void(RandomSource& rng, std::vector<std::complex<double>>& values)>;

/// Sample means of n_outputs functionals of one draw per stream
/// (options.seed, options.stream_offset + i), i < n_samples, with the same
/// block-ordered merge as the pairing estimators. Only seed, stream_offset,
/// workers and the metadata fields of `options` are used.
std::vector<PairingEstimate> estimate_means(std::size_t n_samples, std::size_t n_outputs,
                                            const EstimatorOptions& options,
                                            const MultiSampleFn& fn);

struct IntegrabilityDiagnostic {
  /// Largest finite |log (1/2) sqrt(b1^2 + b2^2)| on the probe grid.
  double max_abs_log = 0.0;
  /// Gaussian-weighted averages of |log ...| for the probed (x, s) pairs.
  std::vector<double> weighted_means;
  /// Set when b1^2 + b2^2 vanishes on the probe grid or has infimum 0.
  bool degenerate = false;
};

struct ProbeGrid {
  double half_extent = 6.0;
  int points_per_axis = 25;
  std::vector<Vec3> starts{Vec3{}};
  std::vector<double> times{0.5, 1.0};
};

IntegrabilityDiagnostic check_jump_weight_integrability(const FieldConfig& fields,
                                                        const ProbeGrid& probe = {});

}  // namespace relkac
