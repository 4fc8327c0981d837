#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pcar/inference.hpp"
#include "pcar/pacf.hpp"

namespace pcar {

enum class PointEstimator { mean, median };

/// One simulation scenario: the generating process and series length.
struct StudyCase {
  Pacf true_pacf;
  double true_tau = 1.0;
  std::size_t n = 50;
  std::string label;
};

struct StudyConfig {
  std::vector<StudyCase> cases;
  std::size_t replications = 1000;
  std::size_t fit_order = 3;
  std::vector<PriorConfig> priors;
  PointEstimator estimator = PointEstimator::mean;
  double hpd_prob = 0.95;
  std::uint64_t master_seed = 0;
  McmcConfig mcmc;        // per-fit template; seeds are derived per task
  std::size_t jobs = 1;   // worker threads
};

/// Per-lag aggregate over replications, with Monte Carlo standard errors.
struct LagStats {
  double rmse = 0.0;
  double rmse_mc_se = 0.0;
  double coverage = 0.0;
  double coverage_mc_se = 0.0;
};

struct CellStats {
  std::vector<LagStats> lags;  // one entry per fitted lag
};

struct StudyReport {
  StudyConfig config;                        // echo of the inputs
  std::vector<std::vector<CellStats>> cells; // [case index][prior index]
  double wall_seconds = 0.0;
};

/// Root mean squared deviation of the estimates from the truth.
double rmse(const std::vector<double>& estimates, double truth);

/// Fraction of closed intervals containing the truth.
double coverage(const std::vector<std::pair<double, double>>& intervals,
                double truth);

/**
 * Simulate-and-refit replication study.
 *
 * Replication j of case i simulates one series with a seed derived from
 * (master_seed, i, j), then fits it once under every configured prior.
 * Replications are distributed over `jobs` workers; seeds are derived from
 * indices, not schedule, so parallel and sequential runs produce identical
 * reports.  Any failing replication aborts the study with its indices.
 */
StudyReport run_study(const StudyConfig& cfg);

/// Aligned text table of the report: one row per (case, prior), RMSE and
/// coverage per lag with Monte Carlo standard errors in parentheses.
std::string format_study_table(const StudyReport& report);

}  // namespace pcar
