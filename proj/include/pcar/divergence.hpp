#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "pcar/pacf.hpp"

namespace pcar {

/// Dense symmetric Toeplitz matrix of process autocorrelations, unit
/// diagonal, positive definite for any valid Pacf.
using CorrelationMatrix = Eigen::MatrixXd;

/// n x n Toeplitz correlation matrix with entries rho_{|i-j|}.
CorrelationMatrix correlation_matrix(const Pacf& psi, std::size_t n);

/**
 * Kullback-Leibler divergence KLD(N(0, sigma1) || N(0, sigma0))
 *   = (tr(sigma0^{-1} sigma1) - n - ln(|sigma1|/|sigma0|)) / 2.
 *
 * Dense O(n^3) evaluation; the closed-form distance functions below are the
 * production path, this is their brute-force counterpart.
 */
double kld_gaussian(const CorrelationMatrix& sigma1,
                    const CorrelationMatrix& sigma0);

/// Distance of an AR(1) with coefficient phi from white noise:
/// sqrt(-(n-1) ln(1-phi^2)).  Even in phi, increasing in |phi|.
double distance_ar1_base0(double phi, std::size_t n);

/// Distance of an AR(p) from its AR(p-1) base:
/// sqrt(-(n-p) ln(1-psi_p^2)).  Depends only on the new partial
/// autocorrelation.
double distance_sequential(double psi_p, std::size_t n, std::size_t p);

/// Limiting distance from the no-change (phi = 1) base model, standardised
/// to drop the n-dependent constant: sqrt(1-phi), range (0, sqrt(2)).
double distance_ar1_base1_standardised(double phi);

}  // namespace pcar
