#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pcar/pacf.hpp"
#include "pcar/rng.hpp"

namespace pcar {

/**
 * Log density at phi of the white-noise-base prior with rate theta on the
 * distance scale.  Normalised over (-1, 1); symmetric in phi; the density
 * tends to theta/2 at phi = 0.
 */
double base0_logpdf(double phi, double theta);

/// Draw from the white-noise-base prior.  Result lies strictly inside
/// (-1, 1); values are clamped away from the boundary by kPacfLimit.
double base0_sample(double theta, Rng& rng);

/**
 * Log density at phi of the unit-root-base prior with rate theta on the
 * standardised distance sqrt(1-phi).  Normalised over (-1, 1); mass piles
 * up near phi = 1 as theta grows.
 */
double base1_logpdf(double phi, double theta);

/// Distribution function of the unit-root-base prior on (-1, 1].
double base1_cdf(double phi, double theta);

/// Inverse-CDF draw from the unit-root-base prior, clamped into
/// [-kPacfLimit, kPacfLimit].
double base1_sample(double theta, Rng& rng);

/// Joint log density of a Pacf whose components are independent
/// white-noise-base draws with per-lag rates thetas (sizes must agree).
double sequential_logpdf(const Pacf& psi, const std::vector<double>& thetas);

/// Component-wise draw from the sequential prior.
Pacf sequential_sample(const std::vector<double>& thetas, Rng& rng);

/// Log density of the type-2 Gumbel prior on a precision tau:
/// (lambda/2) tau^{-3/2} exp(-lambda/sqrt(tau)).
double gumbel2_logpdf(double tau, double lambda);

/// Arcsine log density on (-1, 1): 1 / (pi sqrt(1-phi^2)).
double reference_ar1_logpdf(double phi);

/// Independent arcsine components across all lags.  Exact reference prior
/// at order 1 only; label it "approximate-reference" above that.
double pacf_arcsine_product_logpdf(const Pacf& psi);

// Prior families selectable for posterior sampling.

struct SequentialPcPrior {
  std::vector<double> thetas;  // one rate per lag
};

struct ApproximateReferencePrior {};

struct Ar1Base1Prior {
  double theta = 1.0;
};

/// Flat on atanh(psi_k); unnormalised.  Posterior mode then matches the
/// maximum-likelihood fit.
struct FlatZPrior {};

using PacfPrior = std::variant<SequentialPcPrior, ApproximateReferencePrior,
                               Ar1Base1Prior, FlatZPrior>;

struct Gumbel2PrecisionPrior {
  // Rate putting 1% prior mass below precision 1.
  double lambda = 4.6051701859880913680;
};

struct FixedPrecision {
  double tau = 1.0;
};

using PrecisionPrior = std::variant<Gumbel2PrecisionPrior, FixedPrecision>;

/// Possibly-unnormalised log density of psi under the given family.
/// Throws if the family's order (when it has one) disagrees with psi.
double pacf_prior_logpdf(const PacfPrior& prior, const Pacf& psi);

/// Short stable name for reports: "sequential-pc", "approximate-reference",
/// "ar1-base1-pc", or "flat-z".
std::string prior_label(const PacfPrior& prior);

}  // namespace pcar
