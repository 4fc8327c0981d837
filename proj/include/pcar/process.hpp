#pragma once

#include <cstddef>
#include <cstdint>

#include "pcar/pacf.hpp"

namespace pcar {

/**
 * Zero-mean stationary AR(p) process, parameterised by its partial
 * autocorrelations and the marginal precision tau (the precision of the
 * stationary distribution of each x_t).  The innovation precision is the
 * derived quantity kappa = tau / prod_k (1 - psi_k^2).
 */
struct ArProcessSpec {
  Pacf pacf;
  double marginal_precision = 1.0;

  ArProcessSpec() = default;
  ArProcessSpec(Pacf psi, double tau);
};

/// One-step-ahead forecast-error variance tau^{-1} prod_k (1 - psi_k^2),
/// i.e. the variance of the innovations.
double innovation_variance(const ArProcessSpec& spec);

/**
 * Exact stationary draw of length n.  The first p values come from the
 * stationary Gaussian joint (via its prediction-error factorisation), the
 * rest from the AR recursion, so there is no burn-in bias.  Deterministic
 * given the seed.
 */
TimeSeries simulate(const ArProcessSpec& spec, std::size_t n,
                    std::uint64_t seed);

/**
 * Exact stationary Gaussian log density of x under spec, computed by the
 * prediction-error (Durbin-Levinson) decomposition: O(n*p) after an O(p^2)
 * setup.  Equals the dense multivariate normal log density with covariance
 * tau^{-1} times the process correlation matrix.
 */
double log_likelihood(const TimeSeries& x, const ArProcessSpec& spec);

}  // namespace pcar
