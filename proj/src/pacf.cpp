#include "pcar/pacf.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace pcar {

namespace {

void check_entry(double value, std::size_t k) {
  if (!std::isfinite(value) || std::abs(value) > kPacfLimit) {
    throw std::invalid_argument("partial autocorrelation psi_" +
                                std::to_string(k + 1) + " = " +
                                std::to_string(value) +
                                " is outside (-1, 1)");
  }
}

}  // namespace

Pacf::Pacf(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t k = 0; k < values_.size(); ++k) check_entry(values_[k], k);
}

LevinsonHierarchy levinson_hierarchy(const Pacf& psi) {
  const std::size_t p = psi.order();
  LevinsonHierarchy h;
  h.coef.reserve(p);
  h.prediction_error.assign(p + 1, 1.0);
  std::vector<double> prev;
  for (std::size_t k = 1; k <= p; ++k) {
    const double psi_k = psi[k - 1];
    std::vector<double> cur(k);
    // phi^(k)_j = phi^(k-1)_j - psi_k * phi^(k-1)_{k-j}
    for (std::size_t j = 0; j + 1 < k; ++j) {
      cur[j] = prev[j] - psi_k * prev[k - 2 - j];
    }
    cur[k - 1] = psi_k;
    h.prediction_error[k] = h.prediction_error[k - 1] * (1.0 - psi_k * psi_k);
    prev = cur;
    h.coef.push_back(std::move(cur));
  }
  return h;
}

ArCoefficients pacf_to_coef(const Pacf& psi) {
  LevinsonHierarchy h = levinson_hierarchy(psi);
  if (h.coef.empty()) return ArCoefficients{};
  return ArCoefficients{h.coef.back()};
}

Pacf coef_to_pacf(const ArCoefficients& phi) {
  for (double value : phi.values) {
    if (!std::isfinite(value)) {
      throw std::invalid_argument("AR coefficients must be finite");
    }
  }
  const std::size_t p = phi.order();
  std::vector<double> psi(p);
  std::vector<double> work = phi.values;
  // Step-down recursion: peel off psi_k = phi^(k)_k and recover phi^(k-1).
  for (std::size_t k = p; k >= 1; --k) {
    const double psi_k = work[k - 1];
    if (!std::isfinite(psi_k) || std::abs(psi_k) > kPacfLimit) {
      throw nonstationary_error(
          "coefficients are non-stationary: recovered psi_" +
          std::to_string(k) + " = " + std::to_string(psi_k));
    }
    psi[k - 1] = psi_k;
    if (k == 1) break;
    const double denom = 1.0 - psi_k * psi_k;
    std::vector<double> prev(k - 1);
    for (std::size_t j = 0; j + 1 < k; ++j) {
      prev[j] = (work[j] + psi_k * work[k - 2 - j]) / denom;
    }
    work = std::move(prev);
  }
  return Pacf(std::move(psi));
}

std::vector<double> autocorrelations(const Pacf& psi, std::size_t max_lag) {
  const std::size_t p = psi.order();
  const LevinsonHierarchy h = levinson_hierarchy(psi);
  std::vector<double> rho(max_lag + 1, 0.0);
  rho[0] = 1.0;
  for (std::size_t k = 1; k <= p && k <= max_lag; ++k) {
    // rho_k = psi_k * v_{k-1} + sum_j phi^(k-1)_j rho_{k-j}
    double value = psi[k - 1] * h.prediction_error[k - 1];
    for (std::size_t j = 1; j < k; ++j) {
      value += h.coef[k - 2][j - 1] * rho[k - j];
    }
    rho[k] = value;
  }
  if (p > 0) {
    const std::vector<double>& coef = h.coef.back();
    for (std::size_t k = p + 1; k <= max_lag; ++k) {
      double value = 0.0;
      for (std::size_t j = 1; j <= p; ++j) value += coef[j - 1] * rho[k - j];
      rho[k] = value;
    }
  }
  return rho;
}

}  // namespace pcar
