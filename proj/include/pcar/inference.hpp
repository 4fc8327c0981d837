#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pcar/pacf.hpp"
#include "pcar/priors.hpp"

namespace pcar {

/// Joint prior choice for one posterior fit.
struct PriorConfig {
  PacfPrior pacf_prior = ApproximateReferencePrior{};
  PrecisionPrior precision_prior = Gumbel2PrecisionPrior{};
};

struct McmcConfig {
  std::size_t iterations = 6000;
  std::size_t burn_in = 1000;
  std::size_t thin = 1;
  std::uint64_t seed = 0;
  double adapt_target = 0.44;  // per-coordinate acceptance rate
};

/// Retained draws plus sampler diagnostics.  Rows of psi_draws are valid
/// Pacf values; tau_draws is constant when the precision was held fixed.
/// acceptance_rates and ess cover the p pacf coordinates, then the
/// precision coordinate when it was sampled.
struct PosteriorSamples {
  Eigen::MatrixXd psi_draws;  // draws x p
  Eigen::VectorXd tau_draws;
  std::vector<double> acceptance_rates;
  std::vector<double> ess;
  bool tau_sampled = false;

  std::size_t draw_count() const { return static_cast<std::size_t>(psi_draws.rows()); }
  std::size_t order() const { return static_cast<std::size_t>(psi_draws.cols()); }
};

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  double ess = 0.0;
  double hpd_lo = 0.0;
  double hpd_hi = 0.0;
};

/**
 * Posterior sampling for a zero-mean stationary AR(p) observed in x.
 *
 * Component-wise adaptive random-walk Metropolis on atanh(psi_k) and
 * ln(tau), log-Jacobians included in the target.  Step sizes adapt toward
 * adapt_target during burn-in, then freeze.  Deterministic given the seed.
 *
 * Throws if n <= p, if the series has zero variance, or on an invalid
 * config.
 */
PosteriorSamples fit_ar(const TimeSeries& x, std::size_t p,
                        const PriorConfig& prior, const McmcConfig& mcmc);

/// Draws from the pacf prior alone, pushed through the same Metropolis
/// machinery as fit_ar (no likelihood term).  Marginals must match the
/// direct densities; exercises the transform and Jacobian code paths.
PosteriorSamples sample_pacf_prior(std::size_t p, const PacfPrior& prior,
                                   const McmcConfig& mcmc);

/// Shortest contiguous interval covering ceil(prob * m) sorted draws.
/// Requires at least 100 draws.
std::pair<double, double> hpd_interval(std::vector<double> draws, double prob);

/// Effective sample size by initial-sequence truncation of the chain
/// autocorrelations; a constant chain reports the cap m.
double effective_sample_size(std::span<const double> chain);

/// Per-parameter summaries (psi1..psip, then tau when sampled).
std::vector<ParameterSummary> posterior_summary(const PosteriorSamples& s,
                                                double hpd_prob = 0.95);

}  // namespace pcar
