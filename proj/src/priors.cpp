#include "pcar/priors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pcar {

namespace {

void check_rate(double theta, const char* where) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument(std::string(where) + ": rate must be positive and finite");
}

double clamp_pacf(double phi) {
  return std::clamp(phi, -kPacfLimit, kPacfLimit);
}

}  // namespace

double base0_logpdf(double phi, double theta) {
  check_rate(theta, "base0_logpdf");
  if (!(std::abs(phi) < 1.0))
    throw std::invalid_argument("base0_logpdf: phi must lie in (-1, 1)");
  // log|phi| - log(s) cancels near zero; the density is flat there.
  if (std::abs(phi) < 1e-8) return std::log(0.5 * theta);
  const double s = std::sqrt(-std::log1p(-phi * phi));
  return std::log(theta) - std::numbers::ln2 - theta * s +
         std::log(std::abs(phi)) - std::log1p(-phi * phi) - std::log(s);
}

double base0_sample(double theta, Rng& rng) {
  check_rate(theta, "base0_sample");
  std::exponential_distribution<double> exp_dist(theta);
  std::bernoulli_distribution coin(0.5);
  const double s = exp_dist(rng);
  const double mag = std::sqrt(-std::expm1(-s * s));
  return clamp_pacf(coin(rng) ? mag : -mag);
}

double base1_logpdf(double phi, double theta) {
  check_rate(theta, "base1_logpdf");
  if (!(phi > -1.0 && phi < 1.0))
    throw std::invalid_argument("base1_logpdf: phi must lie in (-1, 1)");
  const double u = std::sqrt(1.0 - phi);
  return std::log(theta) - theta * u -
         std::log(-std::expm1(-std::numbers::sqrt2 * theta)) -
         std::numbers::ln2 - 0.5 * std::log1p(-phi);
}

double base1_cdf(double phi, double theta) {
  check_rate(theta, "base1_cdf");
  if (!(phi > -1.0 && phi <= 1.0))
    throw std::invalid_argument("base1_cdf: phi must lie in (-1, 1]");
  const double u = std::sqrt(1.0 - phi);
  const double sqrt2_theta = std::numbers::sqrt2 * theta;
  // (exp(-theta u) - exp(-sqrt2 theta)) / (1 - exp(-sqrt2 theta)) rewritten
  // so small rates do not cancel.
  return std::exp(-sqrt2_theta) * std::expm1(theta * (std::numbers::sqrt2 - u)) /
         (-std::expm1(-sqrt2_theta));
}

double base1_sample(double theta, Rng& rng) {
  check_rate(theta, "base1_sample");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double sqrt2_theta = std::numbers::sqrt2 * theta;
  const double y =
      unif(rng) * (-std::expm1(-sqrt2_theta)) + std::exp(-sqrt2_theta);
  const double u = -std::log(y) / theta;
  return clamp_pacf(1.0 - u * u);
}

double sequential_logpdf(const Pacf& psi, const std::vector<double>& thetas) {
  if (thetas.size() != psi.order())
    throw std::invalid_argument("sequential_logpdf: one rate per lag required");
  double sum = 0.0;
  for (std::size_t k = 0; k < psi.order(); ++k)
    sum += base0_logpdf(psi[k], thetas[k]);
  return sum;
}

Pacf sequential_sample(const std::vector<double>& thetas, Rng& rng) {
  if (thetas.empty())
    throw std::invalid_argument("sequential_sample: need at least one rate");
  std::vector<double> psi(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); ++k)
    psi[k] = base0_sample(thetas[k], rng);
  return Pacf(std::move(psi));
}

double gumbel2_logpdf(double tau, double lambda) {
  check_rate(lambda, "gumbel2_logpdf");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("gumbel2_logpdf: tau must be positive and finite");
  return std::log(lambda) - std::numbers::ln2 - 1.5 * std::log(tau) -
         lambda / std::sqrt(tau);
}

double reference_ar1_logpdf(double phi) {
  if (!(std::abs(phi) < 1.0))
    throw std::invalid_argument("reference_ar1_logpdf: phi must lie in (-1, 1)");
  return -std::log(std::numbers::pi) - 0.5 * std::log1p(-phi * phi);
}

double pacf_arcsine_product_logpdf(const Pacf& psi) {
  double sum = 0.0;
  for (std::size_t k = 0; k < psi.order(); ++k)
    sum += reference_ar1_logpdf(psi[k]);
  return sum;
}

double pacf_prior_logpdf(const PacfPrior& prior, const Pacf& psi) {
  return std::visit(
      [&psi](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SequentialPcPrior>) {
          return sequential_logpdf(psi, p.thetas);
        } else if constexpr (std::is_same_v<T, ApproximateReferencePrior>) {
          return pacf_arcsine_product_logpdf(psi);
        } else if constexpr (std::is_same_v<T, Ar1Base1Prior>) {
          if (psi.order() != 1)
            throw std::invalid_argument("pacf_prior_logpdf: unit-root base prior is order 1 only");
          return base1_logpdf(psi[0], p.theta);
        } else {
          double sum = 0.0;
          for (std::size_t k = 0; k < psi.order(); ++k)
            sum -= std::log1p(-psi[k] * psi[k]);
          return sum;
        }
      },
      prior);
}

std::string prior_label(const PacfPrior& prior) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SequentialPcPrior>) return "sequential-pc";
        else if constexpr (std::is_same_v<T, ApproximateReferencePrior>) return "approximate-reference";
        else if constexpr (std::is_same_v<T, Ar1Base1Prior>) return "ar1-base1-pc";
        else return "flat-z";
      },
      prior);
}

}  // namespace pcar
