#include "relkac/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "relkac/errors.hpp"
#include "relkac/fk_engine.hpp"
#include "relkac/oracle.hpp"
#include "relkac/sampler.hpp"

namespace relkac {

namespace {

using Clock = std::chrono::steady_clock;
using Params = std::vector<std::pair<std::string, double>>;

// Streams of different rows never overlap: each row owns 2^32 stream ids.
constexpr std::uint64_t kRowStride = std::uint64_t{1} << 32;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string label(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%g", value);
  return buffer;
}

Params tuple_columns(const ModelParams& p) {
  return {{"alpha", p.alpha()}, {"beta", p.beta()}, {"gamma", p.gamma()}, {"m", p.m()}, {"c", p.c()}};
}

EstimatorOptions base_options(const ExperimentConfig& config, std::uint64_t row) {
  EstimatorOptions options;
  options.n_samples = config.samples;
  options.seed = config.seed;
  options.stream_offset = row * kRowStride;
  options.workers = config.workers;
  options.discretization = config.discretization;
  options.convention = config.convention;
  options.tempered.min_acceptance = config.min_acceptance;
  options.kurtosis_threshold = config.kurtosis_threshold;
  return options;
}

void require_params(const ExperimentConfig& config, const std::string& kind) {
  if (config.params.empty()) throw ConfigError(kind + " needs at least one parameter tuple");
}

void require_consistent(const ModelParams& p, const std::string& where) {
  if (!consistency_report(p).derived_constraint_holds) {
    throw ConfigError(where + ": parameters violate alpha (beta + gamma) = 2 gamma, so the "
                      "c -> infinity limit is degenerate");
  }
}

// Counts failing budgeted rows and appends the row that checks them
// against the declared outlier budget.
void add_budget_row(ResultTable& table, const ExperimentConfig& config) {
  std::size_t budgeted = 0;
  std::size_t failed = 0;
  for (const auto& row : table.rows) {
    if (!row.budgeted || row.excluded) continue;
    ++budgeted;
    if (!row.passes()) ++failed;
  }
  if (budgeted == 0) return;
  const std::size_t budget =
      config.max_outliers ? *config.max_outliers : std::max<std::size_t>(1, budgeted / 25);
  ResultRow row;
  row.id = "outliers";
  row.estimate = static_cast<double>(failed);
  row.criterion = Criterion::ValueLe;
  row.tolerance = static_cast<double>(budget);
  row.note = "failing rows among " + std::to_string(budgeted) + " budgeted rows";
  table.add(std::move(row));
}

ResultRow mc_row(std::string id, Params params, const PairingEstimate& estimate,
                 std::complex<double> reference, ReferenceSource source, double threshold) {
  ResultRow row;
  row.id = std::move(id);
  row.params = std::move(params);
  row.estimate = estimate.mean;
  row.std_error = estimate.std_error;
  row.reference = reference;
  row.source = source;
  row.criterion = Criterion::SeLe;
  row.tolerance = threshold;
  return row;
}

ResultRow abort_row(std::string id, Params params, const std::exception& error) {
  ResultRow row;
  row.id = std::move(id);
  row.params = std::move(params);
  row.estimate = std::numeric_limits<double>::quiet_NaN();
  row.criterion = Criterion::SeLe;
  row.note = std::string("sampler abort: ") + error.what();
  return row;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------- laplace

PairingEstimate transform_estimate(const ModelParams& p, double t, double u, double sign,
                                   const ExperimentConfig& config, std::uint64_t row) {
  const auto options = base_options(config, row);
  return estimate_means(config.samples, 1, options,
                        [&](RandomSource& rng, std::vector<std::complex<double>>& values) {
                          const double T = sample_tempered_increment(p, t, rng, options.tempered);
                          values[0] = std::exp(sign * u * T);
                        })
      .front();
}

void laplace_rows(ResultTable& table, const ExperimentConfig& config, std::uint64_t& row_index) {
  for (std::size_t pi = 0; pi < config.params.size(); ++pi) {
    const ModelParams& p = config.params[pi];
    for (const double t : config.t) {
      for (const double u : config.u) {
        const auto start = Clock::now();
        const std::string id = "p" + std::to_string(pi) + "/t=" + label(t) + "/u=" + label(u);
        Params params = tuple_columns(p);
        params.emplace_back("t", t);
        params.emplace_back("u", u);
        const double reference = std::exp(-t * laplace_exponent(p, u));
        ResultRow row;
        if (u == 0.0) {
          // exp(-0 T) = 1 for every draw.
          PairingEstimate exact;
          exact.mean = 1.0;
          exact.std_error = 0.0;
          row = mc_row(id, params, exact, reference, ReferenceSource::ClosedForm,
                       config.threshold_se);
          row.note = "exact";
        } else {
          try {
            row = mc_row(id, params, transform_estimate(p, t, u, -1.0, config, row_index),
                         reference, ReferenceSource::ClosedForm, config.threshold_se);
          } catch (const SamplerAbort& e) {
            row = abort_row(id, params, e);
          }
        }
        ++row_index;
        row.budgeted = true;
        row.wall_time = seconds_since(start);
        table.add(std::move(row));
      }
    }
  }
}

void exp_moment_rows(ResultTable& table, const ExperimentConfig& config,
                     std::uint64_t& row_index) {
  for (std::size_t pi = 0; pi < config.params.size(); ++pi) {
    const ModelParams& p = config.params[pi];
    for (const double t : config.t) {
      for (const double fraction : config.exp_moment_fractions) {
        const auto start = Clock::now();
        const double u = fraction * p.theta();
        const std::string id =
            "expmoment/p" + std::to_string(pi) + "/t=" + label(t) + "/frac=" + label(fraction);
        Params params = tuple_columns(p);
        params.emplace_back("t", t);
        params.emplace_back("u", u);
        const double reference = exponential_moment(p, u, t);
        ResultRow row;
        if (!std::isfinite(reference)) {
          row.id = id;
          row.params = params;
          row.estimate = std::numeric_limits<double>::quiet_NaN();
          row.reference = reference;
          row.source = ReferenceSource::ClosedForm;
          row.criterion = Criterion::SeLe;
          row.tolerance = config.threshold_se;
          row.excluded = true;
          row.note = "infinite reference: u >= theta_c";
        } else {
          try {
            row = mc_row(id, params, transform_estimate(p, t, u, 1.0, config, row_index),
                         reference, ReferenceSource::ClosedForm, config.threshold_se);
          } catch (const SamplerAbort& e) {
            row = abort_row(id, params, e);
          }
          row.budgeted = true;
        }
        ++row_index;
        row.wall_time = seconds_since(start);
        table.add(std::move(row));
      }
    }
  }
}

void exp_moment_limit_rows(ResultTable& table, const ExperimentConfig& config,
                           std::uint64_t& row_index) {
  const MomentLimitSweep& sweep = *config.exp_moment_limit;
  const ModelParams& base = config.params.front();
  require_consistent(base, "exp_moment_limit");
  const double kappa = limit_coefficients(base).kappa;
  const double limit = std::exp(sweep.t * kappa * sweep.u);

  std::vector<double> mc_gap, mc_se, cf_gap;
  for (const double c : sweep.c_values) {
    const auto start = Clock::now();
    const ModelParams p = base.with_c(c);
    Params params = tuple_columns(p);
    params.emplace_back("t", sweep.t);
    params.emplace_back("u", sweep.u);
    const double reference = exponential_moment(p, sweep.u, sweep.t);
    if (!std::isfinite(reference)) {
      throw ConfigError("exp_moment_limit: u must stay below theta_c on the whole sweep");
    }
    const auto estimate = transform_estimate(p, sweep.t, sweep.u, 1.0, config, row_index++);
    ResultRow row = mc_row("expmoment_limit/c=" + label(c), params, estimate, reference,
                           ReferenceSource::ClosedForm, config.threshold_se);
    row.budgeted = true;
    row.wall_time = seconds_since(start);
    table.add(std::move(row));
    mc_gap.push_back(std::abs(estimate.mean.real() - limit));
    mc_se.push_back(estimate.std_error);
    cf_gap.push_back(std::abs(reference - limit));
  }
  if (mc_gap.size() < 2) return;

  double max_increase = -std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  for (std::size_t k = 0; k + 1 < mc_gap.size(); ++k) {
    const double noise = std::hypot(mc_se[k], mc_se[k + 1]);
    max_increase = std::max(max_increase, (mc_gap[k + 1] - mc_gap[k]) / noise);
    max_ratio = std::max(max_ratio, cf_gap[k + 1] / cf_gap[k]);
  }
  ResultRow increase;
  increase.id = "expmoment_limit/max_normalized_gap_increase";
  increase.params = {{"t", sweep.t}, {"u", sweep.u}};
  increase.estimate = max_increase;
  increase.criterion = Criterion::ValueLe;
  increase.tolerance = 2.0;
  increase.note = "max over consecutive c of (gap_next - gap) / combined SE; limit exp(t kappa u) = " +
                  label(limit);
  table.add(std::move(increase));

  ResultRow ratio;
  ratio.id = "expmoment_limit/closed_form_gap_ratio_max";
  ratio.params = {{"t", sweep.t}, {"u", sweep.u}};
  ratio.estimate = max_ratio;
  ratio.criterion = Criterion::ValueLt;
  ratio.tolerance = 1.0;
  ratio.note = "closed-form gaps strictly decreasing iff < 1";
  table.add(std::move(ratio));
}

// ---------------------------------------------------------------- moments

struct MomentPoint {
  double c;
  double mean;
  double se;
};

// ---------------------------------------------------------------- compare

bool is_spin(EstimatorKind kind) {
  return kind == EstimatorKind::PauliNonrel || kind == EstimatorKind::PauliRel;
}

struct Entry {
  std::string label;
  TestFunction f;
  TestFunction g;
};

std::vector<Entry> case_entries(const CaseConfig& c) {
  if (!c.spin_matrix) return {{"", c.f, c.g}};
  if (!is_spin(c.estimator)) throw ConfigError("case '" + c.name + "': spin_matrix needs a Pauli estimator");
  std::vector<Entry> entries;
  const std::array<std::array<Complex, 2>, 2> basis{{{Complex{1.0}, Complex{0.0}},
                                                     {Complex{0.0}, Complex{1.0}}}};
  const char* names[2] = {"+", "-"};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Entry e{std::string("[") + names[i] + "," + names[j] + "]", c.f, c.g};
      e.f.spin = basis[static_cast<std::size_t>(i)];
      e.g.spin = basis[static_cast<std::size_t>(j)];
      entries.push_back(std::move(e));
    }
  }
  return entries;
}

std::complex<double> spinor_product(const TestFunction& f, const TestFunction& g) {
  if (!f.spin || !g.spin) return 1.0;
  return std::conj((*f.spin)[0]) * (*g.spin)[0] + std::conj((*f.spin)[1]) * (*g.spin)[1];
}

TestFunction strip_spin(TestFunction f) {
  f.spin.reset();
  return f;
}

PairingEstimate run_estimator(const CaseConfig& c, const FieldConfig& fields,
                              const TestFunction& f, const TestFunction& g,
                              const EstimatorOptions& options) {
  switch (c.estimator) {
    case EstimatorKind::Spinless: return estimate_pairing_spinless(*c.params, fields, f, g, c.t, options);
    case EstimatorKind::Schrodinger: return estimate_pairing_schrodinger(fields, f, g, c.t, options);
    case EstimatorKind::PauliNonrel: return estimate_pairing_pauli_nonrel(fields, f, g, c.t, options);
    case EstimatorKind::PauliRel: return estimate_pairing_pauli_rel(*c.params, fields, f, g, c.t, options);
  }
  throw ContractError("unknown estimator");
}

GridOperator case_generator(const CaseConfig& c, const FieldConfig& fields,
                            const ModelParams* params) {
  GridSpec grid = c.grid;
  grid.dimension = fields.dimension;
  grid.spin = is_spin(c.estimator);
  switch (c.estimator) {
    case EstimatorKind::Schrodinger: return add_potential(discretize_h(fields, grid), fields.V);
    case EstimatorKind::PauliNonrel: return add_potential(discretize_pauli0(fields, grid), fields.V);
    case EstimatorKind::Spinless:
    case EstimatorKind::PauliRel: return relativistic_generator(fields, grid, *params);
  }
  throw ContractError("unknown estimator");
}

std::function<double(double)> kinetic_function(const CaseConfig& c) {
  if (c.estimator == EstimatorKind::Spinless || c.estimator == EstimatorKind::PauliRel) {
    const ModelParams p = *c.params;
    return [p](double lambda) { return laplace_exponent_extended(p, lambda); };
  }
  return [](double lambda) { return lambda; };
}

std::complex<double> closed_form_reference(const CaseConfig& c, const FieldConfig& fields,
                                           const Entry& e) {
  if (fields.dimension != 0 || !is_spin(c.estimator) || !fields.b.is_constant() ||
      !fields.V.is_constant()) {
    throw ConfigError("case '" + c.name +
                      "': closed_form reference needs a spin-only case with constant b and V");
  }
  const Vec3 origin{};
  const Eigen::Matrix2cd m = spin_only_semigroup(fields.b(origin), c.t, kinetic_function(c)) *
                             std::exp(-c.t * fields.V(origin));
  const Eigen::Vector2cd fv((*e.f.spin)[0] * e.f.scale, (*e.f.spin)[1] * e.f.scale);
  const Eigen::Vector2cd gv((*e.g.spin)[0] * e.g.scale, (*e.g.spin)[1] * e.g.scale);
  return fv.dot(m * gv);
}

std::complex<double> fourier_reference(const CaseConfig& c, const FieldConfig& fields,
                                       const Entry& e) {
  if (is_spin(c.estimator) || fields.dimension != 1 || !fields.a.is_zero() ||
      !fields.V.is_constant()) {
    throw ConfigError("case '" + c.name +
                      "': fourier reference needs a spinless d = 1 case with a = 0 and constant V");
  }
  return fourier_pairing_continuum(e.f, e.g, c.t, kinetic_function(c)) *
         std::exp(-c.t * fields.V(Vec3{}));
}

void compare_case(ResultTable& table, const ExperimentConfig& config, const CaseConfig& c,
                  std::uint64_t& row_index) {
  const FieldConfig fields = c.fields.build();
  const auto entries = case_entries(c);
  const JumpConvention primary = c.convention.value_or(config.convention);
  std::vector<JumpConvention> conventions{primary};
  if (is_spin(c.estimator) && !c.conventions.empty()) conventions = c.conventions;
  if (c.discriminate && conventions.size() < 2) {
    throw ConfigError("case '" + c.name + "': discriminate needs two conventions");
  }
  Params params{{"t", c.t}};
  if (c.params) params.emplace_back("c", c.params->c());

  // Deterministic references first (one decomposition serves all entries).
  std::vector<std::complex<double>> references(entries.size());
  std::vector<double> reference_se(entries.size(), 0.0);
  ReferenceSource source = ReferenceSource::Oracle;
  auto start = Clock::now();
  switch (c.reference) {
    case ReferenceKind::Oracle: {
      const GridOperator op = case_generator(c, fields, c.params ? &*c.params : nullptr);
      const SpectralDecomposition spectral(op);
      for (std::size_t k = 0; k < entries.size(); ++k) {
        references[k] = spectral.pairing(sample_on_grid(entries[k].f, op.grid),
                                         sample_on_grid(entries[k].g, op.grid),
                                         [t = c.t](double lambda) { return std::exp(-t * lambda); });
      }
      break;
    }
    case ReferenceKind::ClosedForm:
      source = ReferenceSource::ClosedForm;
      for (std::size_t k = 0; k < entries.size(); ++k) {
        references[k] = closed_form_reference(c, fields, entries[k]);
      }
      break;
    case ReferenceKind::Fourier:
      source = ReferenceSource::ClosedForm;
      for (std::size_t k = 0; k < entries.size(); ++k) {
        references[k] = fourier_reference(c, fields, entries[k]);
      }
      break;
    case ReferenceKind::SpinlessEstimator: {
      if (!is_spin(c.estimator) || fields.dimension < 1) {
        throw ConfigError("case '" + c.name +
                          "': spinless_estimator reference needs a Pauli case with d >= 1");
      }
      source = ReferenceSource::None;
      CaseConfig spinless = c;
      spinless.estimator = c.estimator == EstimatorKind::PauliRel ? EstimatorKind::Spinless
                                                                  : EstimatorKind::Schrodinger;
      auto options = base_options(config, row_index++);
      options.n_samples = c.samples.value_or(config.samples);
      for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto est = run_estimator(spinless, fields, strip_spin(entries[k].f),
                                       strip_spin(entries[k].g), options);
        const auto factor = spinor_product(entries[k].f, entries[k].g);
        references[k] = est.mean * factor;
        reference_se[k] = est.std_error * std::abs(factor);
      }
      break;
    }
  }
  const double reference_time = seconds_since(start);

  if (c.fourier_check) {
    if (is_spin(c.estimator) || fields.dimension != 1 || !fields.a.is_zero()) {
      throw ConfigError("case '" + c.name + "': fourier_check needs a spinless d = 1 case with a = 0");
    }
    start = Clock::now();
    FieldConfig free = fields;
    free.V = ScalarPotential::zero();
    GridSpec grid = c.grid;
    grid.dimension = 1;
    grid.spin = false;
    const GridOperator op = case_generator(c, free, c.params ? &*c.params : nullptr);
    ResultRow row;
    row.id = c.name + "/free_lattice_fourier_vs_grid";
    row.params = params;
    row.estimate = fourier_pairing_lattice(c.f, c.g, c.t, grid, kinetic_function(c));
    row.reference = semigroup_pairing(op, c.f, c.g, c.t);
    row.source = ReferenceSource::Oracle;
    row.criterion = Criterion::AbsLe;
    row.tolerance = *c.fourier_check;
    row.note = "V = 0; lattice-momentum Fourier sum vs eigendecomposition";
    row.wall_time = seconds_since(start);
    table.add(std::move(row));
  }

  std::vector<double> worst(conventions.size(), 0.0);
  const std::uint64_t mc_row_index = row_index++;
  for (std::size_t ci = 0; ci < conventions.size(); ++ci) {
    const JumpConvention convention = conventions[ci];
    for (std::size_t k = 0; k < entries.size(); ++k) {
      start = Clock::now();
      // Common random numbers across conventions and entries.
      auto options = base_options(config, mc_row_index);
      options.n_samples = c.samples.value_or(config.samples);
      options.convention = convention;
      std::string id = c.name;
      if (is_spin(c.estimator)) id += "/" + to_string(convention);
      id += entries[k].label;
      ResultRow row;
      try {
        const auto estimate = run_estimator(c, fields, entries[k].f, entries[k].g, options);
        row = mc_row(id, params, estimate, references[k], source, config.threshold_se);
        row.std_error = std::hypot(estimate.std_error, reference_se[k]);
        if (estimate.variance_alarm) {
          row.note = "variance alarm: weight kurtosis " + label(estimate.weight_kurtosis);
        }
      } catch (const SamplerAbort& e) {
        row = abort_row(id, params, e);
      }
      if (c.reference == ReferenceKind::SpinlessEstimator) {
        row.note += row.note.empty() ? "" : "; ";
        row.note += "stderr combines both estimators";
      }
      if (convention != primary) {
        row.excluded = true;
        row.note += row.note.empty() ? "" : "; ";
        row.note += "informational convention";
      }
      worst[ci] = std::max(worst[ci], row.discrepancy());
      row.wall_time = seconds_since(start) + (ci == 0 && k == 0 ? reference_time : 0.0);
      table.add(std::move(row));
    }
  }

  if (c.discriminate) {
    std::size_t matching = 0;
    std::size_t winner = 0;
    for (std::size_t ci = 0; ci < conventions.size(); ++ci) {
      if (worst[ci] <= config.threshold_se) {
        ++matching;
        winner = ci;
      }
    }
    ResultRow count;
    count.id = c.name + "/matching_conventions";
    count.params = params;
    count.estimate = static_cast<double>(matching);
    count.reference = 1.0;
    count.criterion = Criterion::AbsLe;
    count.tolerance = 0.0;
    count.note = matching == 1 ? "winner: " + to_string(conventions[winner]) : "no unique winner";
    table.add(std::move(count));
    for (std::size_t ci = 0; ci < conventions.size(); ++ci) {
      if (matching == 1 && ci == winner) continue;
      ResultRow rejected;
      rejected.id = c.name + "/rejected/" + to_string(conventions[ci]);
      rejected.params = params;
      rejected.estimate = worst[ci];
      rejected.criterion = Criterion::ValueGt;
      rejected.tolerance = 10.0;
      rejected.note = "largest SE-unit discrepancy over the entries";
      table.add(std::move(rejected));
    }
  }
}

// ---------------------------------------------------------------- limit

double uniform_bound(const CaseConfig& c, const FieldConfig& fields, const ModelParams& p) {
  const double spatial = std::exp(c.t * fields.V.sup_norm()) * c.f.norm() * c.g.norm();
  if (!is_spin(c.estimator)) return spatial;
  const double rate = 0.5 * fields.b.sup_b3() + fields.b.sup_transverse();
  return spatial * exponential_moment(p, rate, c.t);
}

void limit_case(ResultTable& table, const ExperimentConfig& config, const CaseConfig& c,
                std::uint64_t& row_index) {
  if (c.estimator != EstimatorKind::Spinless && c.estimator != EstimatorKind::PauliRel) {
    throw ConfigError("case '" + c.name + "': limit sweeps need a relativistic estimator");
  }
  if (config.c_values.empty()) throw ConfigError("limit sweep needs c_values");
  const ModelParams base = *c.params;
  require_consistent(base, "case '" + c.name + "'");
  const FieldConfig fields = c.fields.build();
  GridSpec grid = c.grid;
  grid.dimension = fields.dimension;
  grid.spin = is_spin(c.estimator);

  auto start = Clock::now();
  const GridOperator limit_op = limit_generator(fields, grid, base);
  const auto limit = semigroup_pairing(limit_op, c.f, c.g, c.t);
  const double limit_time = seconds_since(start);

  std::vector<double> gaps;
  std::vector<std::complex<double>> values;
  for (std::size_t k = 0; k < config.c_values.size(); ++k) {
    start = Clock::now();
    const double cv = config.c_values[k];
    const ModelParams p = base.with_c(cv);
    const GridOperator op = relativistic_generator(fields, grid, p);
    const auto value = semigroup_pairing(op, c.f, c.g, c.t);
    values.push_back(value);
    ResultRow row;
    row.id = c.name + "/c=" + label(cv);
    row.params = {{"c", cv}, {"t", c.t}};
    row.estimate = value;
    row.reference = limit;
    row.source = ReferenceSource::Oracle;
    if (k + 1 == config.c_values.size()) {
      row.criterion = Criterion::RelLe;
      row.tolerance = config.limit_tolerance;
      row.note = "largest c: relative gap to the limit pairing";
    }
    row.wall_time = seconds_since(start) + (k == 0 ? limit_time : 0.0);
    gaps.push_back(row.abs_error());
    table.add(std::move(row));
  }

  if (gaps.size() >= 2) {
    double max_ratio = 0.0;
    for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
      max_ratio = std::max(max_ratio, gaps[k + 1] / gaps[k]);
    }
    ResultRow ratio;
    ratio.id = c.name + "/gap_ratio_max";
    ratio.params = {{"t", c.t}};
    ratio.estimate = max_ratio;
    ratio.criterion = Criterion::ValueLt;
    ratio.tolerance = 1.0;
    ratio.note = "gap strictly decreasing in c iff < 1";
    table.add(std::move(ratio));
  }

  if (c.expected_slope) {
    std::vector<double> x, y;
    for (std::size_t k = 0; k < gaps.size(); ++k) {
      x.push_back(std::log(config.c_values[k]));
      y.push_back(std::log(gaps[k]));
    }
    ResultRow slope;
    slope.id = c.name + "/gap_loglog_slope";
    slope.params = {{"t", c.t}};
    slope.estimate = ols_slope(x, y);
    slope.reference = *c.expected_slope;
    slope.source = ReferenceSource::ClosedForm;
    slope.criterion = Criterion::RelLe;
    slope.tolerance = config.slope_tolerance;
    slope.note = "least-squares slope of log gap against log c";
    table.add(std::move(slope));
  }

  if (config.uniform_bound) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double cv = config.c_values[k];
      ResultRow bound;
      bound.id = c.name + "/bound/c=" + label(cv);
      bound.params = {{"c", cv}, {"t", c.t}};
      bound.estimate = values[k];
      bound.reference = uniform_bound(c, fields, base.with_c(cv));
      bound.source = ReferenceSource::ClosedForm;
      bound.criterion = Criterion::ModLeRef;
      bound.note = "|pairing| <= exp(t |V|_inf) |f| |g| E[exp((M/2 + M') T_t)]";
      table.add(std::move(bound));
    }
  }

  if (c.spot_check) {
    start = Clock::now();
    const ModelParams p = base.with_c(c.spot_check->c);
    auto options = base_options(config, row_index++);
    options.n_samples = c.spot_check->samples;
    const auto reference =
        semigroup_pairing(relativistic_generator(fields, grid, p), c.f, c.g, c.t);
    CaseConfig at_c = c;
    at_c.params = p;
    ResultRow row;
    const std::string id = c.name + "/spot_check/c=" + label(p.c());
    Params params{{"c", p.c()}, {"t", c.t}};
    try {
      row = mc_row(id, params, run_estimator(at_c, fields, c.f, c.g, options), reference,
                   ReferenceSource::Oracle, config.threshold_se);
    } catch (const SamplerAbort& e) {
      row = abort_row(id, params, e);
    }
    row.wall_time = seconds_since(start);
    table.add(std::move(row));
  }
}

}  // namespace

Eigen::Matrix2cd spin_only_semigroup(const Vec3& b, double t,
                                     const std::function<double(double)>& fn) {
  const double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  const double r = 0.5 * norm;
  // H0 has eigenvalue -r on sigma . b^ = +1 and +r on sigma . b^ = -1.
  const double aligned = std::exp(-t * fn(-r));
  const double anti = std::exp(-t * fn(r));
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity() * (0.5 * (aligned + anti));
  if (norm > 0.0) {
    Eigen::Matrix2cd sigma_b;
    sigma_b << b[2], Complex(b[0], -b[1]), Complex(b[0], b[1]), -b[2];
    m += (0.5 * (aligned - anti) / norm) * sigma_b;
  }
  return m;
}

ResultTable run_laplace_check(const ExperimentConfig& config) {
  require_params(config, "laplace");
  ResultTable table;
  table.experiment_id = config.id;
  table.kind = "laplace";
  table.param_columns = {"alpha", "beta", "gamma", "m", "c", "t", "u"};
  std::uint64_t row_index = 0;
  laplace_rows(table, config, row_index);
  exp_moment_rows(table, config, row_index);
  if (config.exp_moment_limit) exp_moment_limit_rows(table, config, row_index);
  add_budget_row(table, config);
  return table;
}

ResultTable run_moment_sweep(const ExperimentConfig& config) {
  require_params(config, "moments");
  if (config.c_values.empty()) throw ConfigError("moments needs c_values");
  for (const int n : config.moments) {
    if (n < 1) throw ConfigError("moment orders must be >= 1");
  }
  ResultTable table;
  table.experiment_id = config.id;
  table.kind = "moments";
  table.param_columns = {"alpha", "beta", "gamma", "m", "c", "t", "n"};
  std::uint64_t row_index = 0;

  for (std::size_t pi = 0; pi < config.params.size(); ++pi) {
    const ModelParams& base = config.params[pi];
    require_consistent(base, "moments tuple p" + std::to_string(pi));
    const double kappa = limit_coefficients(base).kappa;
    for (const double t : config.t) {
      const double t_alpha = kappa * t;
      std::vector<std::vector<MomentPoint>> series(config.moments.size());
      for (const double c : config.c_values) {
        const auto start = Clock::now();
        const ModelParams p = base.with_c(c);
        const auto options = base_options(config, row_index++);
        std::vector<PairingEstimate> estimates;
        std::string abort_note;
        try {
          estimates = estimate_means(
              config.samples, config.moments.size(), options,
              [&](RandomSource& rng, std::vector<std::complex<double>>& values) {
                const double T = sample_tempered_increment(p, t, rng, options.tempered);
                const double deviation = std::abs(T - t_alpha);
                for (std::size_t k = 0; k < values.size(); ++k) {
                  values[k] = std::pow(deviation, config.moments[k]);
                }
              });
        } catch (const SamplerAbort& e) {
          abort_note = e.what();
        }
        const double elapsed = seconds_since(start) / static_cast<double>(config.moments.size());
        for (std::size_t k = 0; k < config.moments.size(); ++k) {
          const int n = config.moments[k];
          Params params = tuple_columns(p);
          params.emplace_back("t", t);
          params.emplace_back("n", n);
          const std::string id =
              "p" + std::to_string(pi) + "/t=" + label(t) + "/n=" + std::to_string(n) + "/c=" + label(c);
          ResultRow row;
          if (!abort_note.empty()) {
            row = abort_row(id, params, SamplerAbort(abort_note));
            row.budgeted = true;
          } else if (t == 0.0) {
            // T_0 = 0 = t_alpha for every draw.
            row = mc_row(id, params, estimates[k], 0.0, ReferenceSource::ClosedForm, 0.0);
            row.criterion = Criterion::AbsLe;
            row.note = "t = 0";
          } else if (n == 2) {
            const double bias = t * laplace_exponent_derivative(p, 0.0) - t_alpha;
            const double reference = variance_rate(p, t) + bias * bias;
            row = mc_row(id, params, estimates[k], reference, ReferenceSource::ClosedForm,
                         config.threshold_se);
            row.budgeted = true;
          } else {
            row.id = id;
            row.params = params;
            row.estimate = estimates[k].mean;
            row.std_error = estimates[k].std_error;
          }
          row.wall_time = elapsed;
          if (abort_note.empty()) {
            series[k].push_back({c, estimates[k].mean.real(), estimates[k].std_error});
          }
          table.add(std::move(row));
        }
      }
      if (t == 0.0) continue;

      for (std::size_t k = 0; k < config.moments.size(); ++k) {
        const auto& points = series[k];
        const int n = config.moments[k];
        const std::string prefix =
            "p" + std::to_string(pi) + "/t=" + label(t) + "/n=" + std::to_string(n);
        if (points.size() >= 2) {
          double min_z = std::numeric_limits<double>::infinity();
          for (std::size_t j = 0; j + 1 < points.size(); ++j) {
            const double noise = std::hypot(points[j].se, points[j + 1].se);
            min_z = std::min(min_z, (points[j].mean - points[j + 1].mean) / noise);
          }
          ResultRow row;
          row.id = prefix + "/min_decrease_z";
          row.params = {{"t", t}, {"n", n}};
          row.estimate = min_z;
          row.criterion = Criterion::ValueGe;
          row.tolerance = 2.0;
          row.note = "min over consecutive c of (m_c - m_next) / combined SE";
          table.add(std::move(row));
        }
        if (n == 2 && points.size() >= 2) {
          std::vector<double> x, y;
          for (const auto& point : points) {
            x.push_back(std::log(point.c));
            y.push_back(std::log(point.mean));
          }
          ResultRow row;
          row.id = prefix + "/loglog_slope";
          row.params = {{"t", t}, {"n", n}};
          row.estimate = ols_slope(x, y);
          row.reference = -base.gamma();
          row.source = ReferenceSource::ClosedForm;
          row.criterion = Criterion::RelLe;
          row.tolerance = config.slope_tolerance;
          row.note = "least-squares slope of log E|T - t_alpha|^2 against log c";
          table.add(std::move(row));
        }
      }
    }
  }
  add_budget_row(table, config);
  return table;
}

ResultTable run_oracle_compare(const ExperimentConfig& config) {
  if (config.cases.empty()) throw ConfigError("compare needs at least one case");
  ResultTable table;
  table.experiment_id = config.id;
  table.kind = "compare";
  table.param_columns = {"t", "c"};
  std::uint64_t row_index = 0;
  for (const auto& c : config.cases) compare_case(table, config, c, row_index);
  return table;
}

ResultTable run_nr_limit_sweep(const ExperimentConfig& config) {
  if (config.cases.empty()) throw ConfigError("limit needs at least one case");
  ResultTable table;
  table.experiment_id = config.id;
  table.kind = "limit";
  table.param_columns = {"c", "t"};
  std::uint64_t row_index = 0;
  for (const auto& c : config.cases) limit_case(table, config, c, row_index);
  return table;
}

SampleExport run_sample_export(const ExperimentConfig& config) {
  SampleExport out;
  out.summary.experiment_id = config.id;
  out.summary.kind = "sample";
  out.summary.param_columns = {"path", "t"};
  if (config.t.empty()) throw ConfigError("sample needs a time horizon t");
  const double t = config.t.front();
  const int n_steps = config.discretization.n_outer;
  TemperedOptions tempered;
  tempered.min_acceptance = config.min_acceptance;

  std::ostringstream csv;
  csv.precision(12);
  if (config.sample_kind == "brownian") {
    csv << "path,index,time,x1,x2,x3\n";
  } else {
    csv << "path,index,time,value\n";
  }
  for (std::size_t i = 0; i < config.sample_paths; ++i) {
    RandomSource rng({config.seed, i});
    ResultRow row;
    row.id = config.sample_kind + "/" + std::to_string(i);
    row.params = {{"path", static_cast<double>(i)}, {"t", t}};
    if (config.sample_kind == "subordinator") {
      require_params(config, "sample subordinator");
      const auto path = sample_subordinator_path(config.params.front(), t, n_steps, rng, tempered);
      for (std::size_t k = 0; k < path.cumulative.size(); ++k) {
        csv << i << ',' << k << ',' << path.outer_times[k] << ',' << path.cumulative[k] << '\n';
      }
      row.estimate = path.horizon();
      row.note = "T_t";
    } else if (config.sample_kind == "brownian") {
      std::vector<double> times(static_cast<std::size_t>(n_steps) + 1);
      for (int k = 0; k <= n_steps; ++k) times[static_cast<std::size_t>(k)] = t * k / n_steps;
      const auto path = sample_brownian(config.sample_dimension, times, Vec3{}, rng);
      for (std::size_t k = 0; k < times.size(); ++k) {
        const Vec3& x = path.positions[k];
        csv << i << ',' << k << ',' << times[k] << ',' << x[0] << ',' << x[1] << ',' << x[2] << '\n';
      }
      const Vec3& end = path.positions.back();
      row.estimate = end[0] * end[0] + end[1] * end[1] + end[2] * end[2];
      row.note = "|B_t|^2";
    } else {
      const auto path = sample_poisson_spin(t, 1, rng);
      csv << i << ",0,0," << path.initial_spin << '\n';
      for (std::size_t k = 0; k < path.jump_times.size(); ++k) {
        csv << i << ',' << k + 1 << ',' << path.jump_times[k] << ','
            << path.spin_at(path.jump_times[k]) << '\n';
      }
      row.estimate = static_cast<double>(path.jump_times.size());
      row.note = "number of spin flips";
    }
    out.summary.add(std::move(row));
  }
  out.paths_csv = csv.str();
  return out;
}

ResultTable run_experiment(ExperimentKind kind, const ExperimentConfig& config) {
  switch (kind) {
    case ExperimentKind::Laplace: return run_laplace_check(config);
    case ExperimentKind::Moments: return run_moment_sweep(config);
    case ExperimentKind::Compare: return run_oracle_compare(config);
    case ExperimentKind::Limit: return run_nr_limit_sweep(config);
    case ExperimentKind::Sample: return run_sample_export(config).summary;
  }
  throw ContractError("unknown experiment kind");
}

}  // namespace relkac
