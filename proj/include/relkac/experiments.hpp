#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "relkac/config.hpp"
#include "relkac/results.hpp"

namespace relkac {

/// MC transforms E[exp(-u T_t)] and E[exp(u T_t)] against their closed
/// forms over (params, t, u), plus an optional c-sweep of the exponential
/// moment towards exp(t kappa u).
ResultTable run_laplace_check(const ExperimentConfig& config);

/// E|T_t^c - t_alpha|^n for n in config.moments along config.c_values, with
/// decrease and log-log slope summary rows.
ResultTable run_moment_sweep(const ExperimentConfig& config);

/// Each configured case: the matching Monte Carlo estimator against an
/// oracle, closed-form, Fourier-side or estimator reference.
ResultTable run_oracle_compare(const ExperimentConfig& config);

/// Oracle-only c-sweep of each case against its limit generator.
ResultTable run_nr_limit_sweep(const ExperimentConfig& config);

struct SampleExport {
  ResultTable summary;
  /// path,index,time,value columns (value1..3 for Brownian paths).
  std::string paths_csv;
};

/// Raw subordinator, Brownian or spin paths for inspection.
SampleExport run_sample_export(const ExperimentConfig& config);

/// Dispatch for laplace | moments | compare | limit.
ResultTable run_experiment(ExperimentKind kind, const ExperimentConfig& config);

/// exp(-t fn(H0)) for the spin-only H0 = -(1/2) sigma . b (constant b, spin
/// index theta = +1 first), from the projections onto sigma . b/|b| = +-1.
Eigen::Matrix2cd spin_only_semigroup(const Vec3& b, double t,
                                     const std::function<double(double)>& fn);

}  // namespace relkac
