#include "pcar/process.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pcar/rng.hpp"

namespace pcar {

ArProcessSpec::ArProcessSpec(Pacf psi, double tau)
    : pacf(std::move(psi)), marginal_precision(tau) {
  if (!std::isfinite(tau) || tau <= 0.0) {
    throw std::invalid_argument("marginal precision must be positive");
  }
}

double innovation_variance(const ArProcessSpec& spec) {
  if (!(spec.marginal_precision > 0.0)) {
    throw std::invalid_argument("marginal precision must be positive");
  }
  double value = 1.0 / spec.marginal_precision;
  for (double psi_k : spec.pacf.values()) value *= 1.0 - psi_k * psi_k;
  return value;
}

TimeSeries simulate(const ArProcessSpec& spec, std::size_t n,
                    std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("series length must be positive");
  if (!(spec.marginal_precision > 0.0)) {
    throw std::invalid_argument("marginal precision must be positive");
  }
  const std::size_t p = spec.pacf.order();
  const LevinsonHierarchy h = levinson_hierarchy(spec.pacf);
  const double marginal_variance = 1.0 / spec.marginal_precision;

  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  TimeSeries x(n);
  for (std::size_t t = 0; t < n; ++t) {
    // Conditional on the past, x_t is Gaussian with the order-min(t, p)
    // predictor mean and prediction-error variance from the hierarchy.
    const std::size_t k = std::min(t, p);
    double mean = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      mean += h.coef[k - 1][j - 1] * x[t - j];
    }
    const double sd = std::sqrt(marginal_variance * h.prediction_error[k]);
    x[t] = mean + sd * normal(rng);
  }
  return x;
}

double log_likelihood(const TimeSeries& x, const ArProcessSpec& spec) {
  if (x.empty()) throw std::invalid_argument("series must be non-empty");
  if (!(spec.marginal_precision > 0.0)) {
    throw std::invalid_argument("marginal precision must be positive");
  }
  const std::size_t n = x.size();
  const std::size_t p = spec.pacf.order();
  const LevinsonHierarchy h = levinson_hierarchy(spec.pacf);
  const double marginal_variance = 1.0 / spec.marginal_precision;
  constexpr double half_log_two_pi =
      0.91893853320467274178032973640562;  // ln(2*pi)/2

  double total = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t k = std::min(t, p);
    double mean = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      mean += h.coef[k - 1][j - 1] * x[t - j];
    }
    const double variance = marginal_variance * h.prediction_error[k];
    const double residual = x[t] - mean;
    total += -half_log_two_pi - 0.5 * std::log(variance) -
             0.5 * residual * residual / variance;
  }
  return total;
}

}  // namespace pcar
