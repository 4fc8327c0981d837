#pragma once

#include <cstddef>
#include <vector>

#include "pcar/errors.hpp"

namespace pcar {

/// Largest |psi_k| accepted anywhere in the library.  Values closer to one
/// make the logs and divisions in the recursions lose all precision, and the
/// priors place negligible mass there.
inline constexpr double kPacfLimit = 1.0 - 1e-12;

/**
 * Partial autocorrelations psi_1..psi_p of a stationary AR(p) process.
 *
 * Each entry must lie strictly inside (-1, 1); the open unit hypercube is
 * exactly the stationarity region, which makes this the canonical
 * unconstrained parameterisation.  Order p = 0 is white noise.
 */
class Pacf {
 public:
  Pacf() = default;

  /// Validates every entry against kPacfLimit.
  explicit Pacf(std::vector<double> values);

  std::size_t order() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  /// Zero-based access: psi_{k+1}.
  double operator[](std::size_t k) const { return values_[k]; }

  bool operator==(const Pacf& other) const = default;

 private:
  std::vector<double> values_;
};

/// Regression coefficients phi_1..phi_p of an AR(p) process.  Unvalidated
/// beyond finiteness; stationarity is a property of the mapped Pacf.
struct ArCoefficients {
  std::vector<double> values;

  std::size_t order() const { return values.size(); }
};

/// Observed or simulated series x_1..x_n.
using TimeSeries = std::vector<double>;

/**
 * Coefficient hierarchy of the Levinson-Durbin recursion.
 *
 * coef[k-1] holds the AR(k) coefficients phi^(k)_1..phi^(k)_k of the best
 * linear predictor of order k; prediction_error[k] = prod_{j<=k}(1-psi_j^2)
 * is the relative one-step prediction-error variance after conditioning on
 * k lags (prediction_error[0] = 1).
 */
struct LevinsonHierarchy {
  std::vector<std::vector<double>> coef;
  std::vector<double> prediction_error;
};

LevinsonHierarchy levinson_hierarchy(const Pacf& psi);

/// Forward Levinson-Durbin recursion psi -> phi.  Bijective onto the
/// stationary region.
ArCoefficients pacf_to_coef(const Pacf& psi);

/// Inverse (step-down) recursion phi -> psi.  Throws nonstationary_error
/// when any recovered |psi_k| exceeds kPacfLimit.
Pacf coef_to_pacf(const ArCoefficients& phi);

/// Autocorrelations rho_0..rho_max_lag.  Lags up to p come out of the
/// Levinson-Durbin recursion; later lags are extended with the Yule-Walker
/// recursion rho_k = sum_j phi_j rho_{k-j}.
std::vector<double> autocorrelations(const Pacf& psi, std::size_t max_lag);

}  // namespace pcar
