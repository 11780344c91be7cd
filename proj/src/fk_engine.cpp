#include "relkac/fk_engine.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "relkac/errors.hpp"

namespace relkac {

void PairingAccumulator::add(std::complex<double> value, double aux_weight) {
  ++n_;
  const double n = static_cast<double>(n_);
  const double d_re = value.real() - mean_re_;
  mean_re_ += d_re / n;
  m2_re_ += d_re * (value.real() - mean_re_);
  const double d_im = value.imag() - mean_im_;
  mean_im_ += d_im / n;
  m2_im_ += d_im * (value.imag() - mean_im_);
  double power = aux_weight;
  for (double& sum : aux_) {
    sum += power;
    power *= aux_weight;
  }
}

void PairingAccumulator::merge(const PairingAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double d_re = other.mean_re_ - mean_re_;
  const double d_im = other.mean_im_ - mean_im_;
  mean_re_ += d_re * nb / n;
  mean_im_ += d_im * nb / n;
  m2_re_ += other.m2_re_ + d_re * d_re * na * nb / n;
  m2_im_ += other.m2_im_ + d_im * d_im * na * nb / n;
  for (int k = 0; k < 4; ++k) aux_[k] += other.aux_[k];
  n_ += other.n_;
}

double PairingAccumulator::stderr_re() const {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  return std::sqrt(m2_re_ / (n - 1.0) / n);
}

double PairingAccumulator::stderr_im() const {
  if (n_ < 2) return 0.0;
  const double n = static_cast<double>(n_);
  return std::sqrt(m2_im_ / (n - 1.0) / n);
}

double PairingAccumulator::aux_kurtosis() const {
  if (n_ < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(n_);
  const double m1 = aux_[0] / n;
  const double m2 = aux_[1] / n;
  const double m3 = aux_[2] / n;
  const double m4 = aux_[3] / n;
  const double var = m2 - m1 * m1;
  if (!(var > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double central4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
  return central4 / (var * var);
}

namespace {

constexpr std::size_t kBlockSize = 1024;

struct SampleValue {
  std::complex<double> value;
  double aux = 0.0;
};

// Runs fn(sample_index, accumulator) over fixed-size blocks and merges
// block results in block order, so the result does not depend on the
// number of workers.
template <class Acc, class SampleFn>
Acc run_blocks_with(std::size_t n_samples, int workers, const Acc& empty, SampleFn&& fn) {
  const std::size_t n_blocks = (n_samples + kBlockSize - 1) / kBlockSize;
  std::vector<Acc> blocks(n_blocks, empty);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto work = [&] {
    while (!failed.load()) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        const std::size_t end = std::min(n_samples, (b + 1) * kBlockSize);
        for (std::size_t i = b * kBlockSize; i < end; ++i) fn(i, blocks[b]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };

  const int n_workers = std::max(1, workers);
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) threads.emplace_back(work);
    for (auto& thread : threads) thread.join();
  }
  if (failure) std::rethrow_exception(failure);

  Acc total = empty;
  for (const auto& block : blocks) total.merge(block);
  return total;
}

template <class SampleFn>
PairingAccumulator run_blocks(std::size_t n_samples, int workers, SampleFn&& fn) {
  return run_blocks_with(n_samples, workers, PairingAccumulator{},
                         [&](std::size_t i, PairingAccumulator& acc) {
                           const SampleValue s = fn(i);
                           acc.add(s.value, s.aux);
                         });
}

struct MultiAccumulator {
  std::vector<PairingAccumulator> parts;

  void merge(const MultiAccumulator& other) {
    for (std::size_t k = 0; k < parts.size(); ++k) parts[k].merge(other.parts[k]);
  }
};

PairingEstimate finish(const PairingAccumulator& acc, const EstimatorOptions& options,
                       bool with_kurtosis) {
  PairingEstimate estimate;
  estimate.mean = acc.mean();
  estimate.stderr_re = acc.stderr_re();
  estimate.stderr_im = acc.stderr_im();
  estimate.std_error = std::max(estimate.stderr_re, estimate.stderr_im);
  estimate.n_samples = acc.count();
  estimate.seed = options.seed;
  estimate.discretization = options.discretization;
  estimate.convention = options.convention;
  estimate.weight_kurtosis =
      with_kurtosis ? acc.aux_kurtosis() : std::numeric_limits<double>::quiet_NaN();
  estimate.variance_alarm = with_kurtosis && std::isfinite(estimate.weight_kurtosis) &&
                            estimate.weight_kurtosis > options.kurtosis_threshold;
  return estimate;
}

// Gaussian proposal for the starting point, matched to |f|^2.
struct StartingPoint {
  Vec3 x{};
  double density = 1.0;
};

StartingPoint draw_start(const TestFunction& f, double width_factor, RandomSource& rng) {
  StartingPoint start;
  if (f.dimension == 0) return start;
  const double s = width_factor * f.width;
  double log_q = 0.0;
  for (int i = 0; i < f.dimension; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double z = rng.normal();
    start.x[k] = f.center[k] + s * z;
    log_q += -0.5 * z * z - std::log(s) - 0.5 * std::log(2.0 * std::numbers::pi);
  }
  start.density = std::exp(log_q);
  if (!(start.density > 0.0)) {
    throw ContractError("starting-point proposal density vanished at a drawn point");
  }
  return start;
}

void check_dimensions(const FieldConfig& fields, const TestFunction& f, const TestFunction& g) {
  if (f.dimension != fields.dimension || g.dimension != fields.dimension) {
    throw ContractError("test functions and fields must share one dimension");
  }
  if (!(f.width > 0.0) || !(g.width > 0.0)) throw DomainError("test function width must be positive");
}

double resolve_inner_step(const Discretization& disc, bool needs_grid, double t_alpha) {
  if (disc.inner_step > 0.0) return disc.inner_step;
  return needs_grid ? t_alpha / 512.0 : 0.0;
}

SubordinatorPath deterministic_clock(double t, int n_outer) {
  SubordinatorPath path;
  const auto n = static_cast<std::size_t>(n_outer);
  path.outer_times.resize(n + 1);
  path.increments.assign(n, t / static_cast<double>(n));
  for (std::size_t j = 0; j <= n; ++j) {
    path.outer_times[j] = (j == n) ? t : static_cast<double>(j) * t / static_cast<double>(n);
  }
  path.cumulative = path.outer_times;
  return path;
}

PairingEstimate spinless_impl(const ModelParams* params, const FieldConfig& fields,
                              const TestFunction& f, const TestFunction& g, double t,
                              const EstimatorOptions& options) {
  check_dimensions(fields, f, g);
  if (fields.dimension < 1) throw ContractError("spinless estimator needs dimension >= 1");
  if (!(t >= 0.0)) throw DomainError("pairing time must be nonnegative");
  if (options.discretization.n_outer < 1) throw DomainError("n_outer must be >= 1");

  const double t_alpha = params != nullptr ? limit_coefficients(*params).limit_time(t) : t;
  const double step =
      resolve_inner_step(options.discretization, !fields.a.is_zero(), std::max(t_alpha, 1e-300));

  auto sample = [&](std::size_t index) -> SampleValue {
    RandomSource rng({options.seed, options.stream_offset + index});
    const StartingPoint start = draw_start(f, options.proposal_width_factor, rng);
    const std::complex<double> left = std::conj(f.spatial(start.x)) / start.density;
    if (t == 0.0) return {left * g.spatial(start.x)};

    const SubordinatorPath clock =
        params != nullptr
            ? sample_subordinator_path(*params, t, options.discretization.n_outer, rng,
                                       options.tempered)
            : deterministic_clock(t, options.discretization.n_outer);
    const double horizon = clock.horizon();
    const auto grid = merge_time_grid(horizon, step, {clock.cumulative});
    const BrownianPath path = sample_brownian(fields.dimension, grid, start.x, rng);
    const auto weight = assemble_weight_spinless(fields, path, clock);
    return {left * g.spatial(path.positions.back()) * weight};
  };

  return finish(run_blocks(options.n_samples, options.workers, sample), options, false);
}

PairingEstimate pauli_impl(const ModelParams* params, const FieldConfig& fields,
                           const TestFunction& f, const TestFunction& g, double t,
                           const EstimatorOptions& options) {
  check_dimensions(fields, f, g);
  if (!f.spin || !g.spin) throw ContractError("Pauli estimators need spinor test functions");
  if (!(t >= 0.0)) throw DomainError("pairing time must be nonnegative");
  if (options.discretization.n_outer < 1) throw DomainError("n_outer must be >= 1");

  const bool relativistic = params != nullptr;
  const bool needs_grid = !fields.a.is_zero() || !fields.b.is_constant() ||
                          (!relativistic && !fields.V.is_constant());
  const double t_alpha = relativistic ? limit_coefficients(*params).limit_time(t) : t;
  const double step =
      resolve_inner_step(options.discretization, needs_grid, std::max(t_alpha, 1e-300));
  const double transverse = fields.b.sup_transverse();

  auto one_spin = [&](RandomSource& rng, const StartingPoint& start, int theta0,
                      double& aux) -> std::complex<double> {
    const std::complex<double> left = std::conj(f(start.x, theta0)) / start.density;
    if (t == 0.0) {
      aux = 1.0;
      return left * g(start.x, theta0);
    }
    SubordinatorPath clock;
    double horizon = t;
    if (relativistic) {
      clock = sample_subordinator_path(*params, t, options.discretization.n_outer, rng,
                                       options.tempered);
      horizon = clock.horizon();
    }
    const SpinPath spin = sample_poisson_spin(horizon, theta0, rng);
    const auto grid =
        relativistic ? merge_time_grid(horizon, step, {clock.cumulative, spin.jump_times})
                     : merge_time_grid(horizon, step, {spin.jump_times});
    const BrownianPath path = sample_brownian(fields.dimension, grid, start.x, rng);
    const auto weight = assemble_weight_pauli(fields, path, spin, horizon, options.convention,
                                              relativistic ? &clock : nullptr);
    const double prefactor = std::exp(horizon);
    aux = prefactor * std::pow(transverse, static_cast<double>(spin.jumps_until(horizon)));
    return prefactor * left * g(path.positions.back(), spin.spin_at(horizon)) * weight;
  };

  auto sample = [&](std::size_t index) -> SampleValue {
    SampleValue out{{0.0, 0.0}, 0.0};
    double aux = 0.0;
    if (options.share_spin_paths) {
      // Both initial spins replay the same stream, hence the same subordinator,
      // jump times and Brownian increments.
      for (const int theta0 : {1, -1}) {
        RandomSource rng({options.seed, options.stream_offset + index});
        const StartingPoint start = draw_start(f, options.proposal_width_factor, rng);
        out.value += one_spin(rng, start, theta0, aux);
      }
    } else {
      for (const int theta0 : {1, -1}) {
        const std::uint64_t lane = theta0 == 1 ? 0 : 1;
        RandomSource rng({options.seed, options.stream_offset + 2 * index + lane});
        const StartingPoint start = draw_start(f, options.proposal_width_factor, rng);
        out.value += one_spin(rng, start, theta0, aux);
      }
    }
    out.aux = aux;
    return out;
  };

  return finish(run_blocks(options.n_samples, options.workers, sample), options, relativistic);
}

}  // namespace

PairingEstimate estimate_pairing_spinless(const ModelParams& params, const FieldConfig& fields,
                                          const TestFunction& f, const TestFunction& g,
                                          double t, const EstimatorOptions& options) {
  return spinless_impl(&params, fields, f, g, t, options);
}

PairingEstimate estimate_pairing_schrodinger(const FieldConfig& fields, const TestFunction& f,
                                             const TestFunction& g, double t,
                                             const EstimatorOptions& options) {
  return spinless_impl(nullptr, fields, f, g, t, options);
}

PairingEstimate estimate_pairing_pauli_nonrel(const FieldConfig& fields, const TestFunction& f,
                                              const TestFunction& g, double t,
                                              const EstimatorOptions& options) {
  return pauli_impl(nullptr, fields, f, g, t, options);
}

PairingEstimate estimate_pairing_pauli_rel(const ModelParams& params, const FieldConfig& fields,
                                           const TestFunction& f, const TestFunction& g,
                                           double t, const EstimatorOptions& options) {
  return pauli_impl(&params, fields, f, g, t, options);
}

std::vector<PairingEstimate> estimate_means(std::size_t n_samples, std::size_t n_outputs,
                                            const EstimatorOptions& options,
                                            const MultiSampleFn& fn) {
  MultiAccumulator empty{std::vector<PairingAccumulator>(n_outputs)};
  const auto total = run_blocks_with(
      n_samples, options.workers, empty, [&](std::size_t index, MultiAccumulator& acc) {
        RandomSource rng({options.seed, options.stream_offset + index});
        std::vector<std::complex<double>> values(n_outputs);
        fn(rng, values);
        for (std::size_t k = 0; k < n_outputs; ++k) acc.parts[k].add(values[k]);
      });
  std::vector<PairingEstimate> out;
  out.reserve(n_outputs);
  for (const auto& part : total.parts) out.push_back(finish(part, options, false));
  return out;
}

IntegrabilityDiagnostic check_jump_weight_integrability(const FieldConfig& fields,
                                                        const ProbeGrid& probe) {
  IntegrabilityDiagnostic out;
  const int d = std::clamp(fields.dimension, 0, 3);
  const int n = d == 0 ? 1 : std::max(2, probe.points_per_axis);
  const double h = d == 0 ? 0.0 : 2.0 * probe.half_extent / (n - 1);

  std::vector<Vec3> points;
  std::vector<double> logs;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  for (std::size_t index = 0; index < total; ++index) {
    Vec3 y{};
    std::size_t rest = index;
    for (int i = 0; i < d; ++i) {
      y[static_cast<std::size_t>(i)] =
          -probe.half_extent + h * static_cast<double>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
    }
    const Vec3 b = fields.b(y);
    const double r = 0.5 * std::hypot(b[0], b[1]);
    points.push_back(y);
    if (r == 0.0) {
      out.degenerate = true;
      logs.push_back(std::numeric_limits<double>::infinity());
    } else {
      logs.push_back(std::abs(std::log(r)));
      out.max_abs_log = std::max(out.max_abs_log, logs.back());
    }
  }
  if (fields.b.inf_transverse() == 0.0) out.degenerate = true;

  for (const Vec3& x : probe.starts) {
    for (const double s : probe.times) {
      double weighted = 0.0;
      double norm = 0.0;
      for (std::size_t k = 0; k < points.size(); ++k) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < 3; ++i) r2 += (points[k][i] - x[i]) * (points[k][i] - x[i]);
        const double w = std::exp(-r2 / (2.0 * s));
        norm += w;
        weighted += w * logs[k];
      }
      out.weighted_means.push_back(norm > 0.0 ? weighted / norm : 0.0);
    }
  }
  return out;
}

}  // namespace relkac
