#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "pcar/calibrate.hpp"
#include "pcar/pacf.hpp"
#include "pcar/priors.hpp"
#include "pcar/rng.hpp"

namespace {

double shrink_distance(double phi) {
  return std::sqrt(-std::log1p(-phi * phi));
}

// Boundary of the representable coefficient range on the distance scale.
const double kDistanceCap = shrink_distance(pcar::kPacfLimit);

// Quadrature mass of the white-noise-base prior: substitute the distance s
// for |phi|, double for the sign, and add the closed-form mass beyond the
// representable boundary.
double base0_mass(double theta) {
  const double body = oracles::integrate(
      [theta](double s) {
        const double phi = std::sqrt(-std::expm1(-s * s));
        const double dphi_ds = s * std::exp(-s * s) / phi;
        return std::exp(pcar::base0_logpdf(phi, theta)) * dphi_ds;
      },
      1e-8, kDistanceCap, 1e-12);
  return 2.0 * body + std::exp(-theta * kDistanceCap);
}

// Quadrature mass of the unit-root-base prior in u = sqrt(1 - phi), with the
// closed-form mass of the u < 1e-6 sliver added back.
double base1_mass(double theta) {
  const double u_lo = 1e-6;
  const double u_hi = std::sqrt(1.0 + pcar::kPacfLimit);
  const double body = oracles::integrate(
      [theta](double u) {
        const double phi = 1.0 - u * u;
        return std::exp(pcar::base1_logpdf(phi, theta)) * 2.0 * u;
      },
      u_lo, u_hi, 1e-12);
  const double head = -std::expm1(-theta * u_lo) /
                      (-std::expm1(-std::numbers::sqrt2 * theta));
  return body + head;
}

// Quadrature mass of the precision prior in s = 1/sqrt(tau), plus the
// closed-form mass of the huge-precision sliver s < 1e-9.
double gumbel2_mass(double lambda) {
  const double s_lo = 1e-9;
  const double body = oracles::integrate(
      [lambda](double s) {
        const double tau = 1.0 / (s * s);
        return std::exp(pcar::gumbel2_logpdf(tau, lambda)) * 2.0 / (s * s * s);
      },
      s_lo, 45.0 / lambda, 1e-12);
  return body + (-std::expm1(-lambda * s_lo));
}

// Tensor Simpson mass of the order-2 sequential prior over one sign
// quadrant, in distance coordinates.
double joint_mass_quadrant(const std::vector<double>& thetas) {
  const int n = 512;
  const double lo = 1e-8;
  const double h = (kDistanceCap - lo) / n;
  std::vector<double> phi(n + 1), jac(n + 1), w(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = lo + i * h;
    phi[i] = std::sqrt(-std::expm1(-s * s));
    jac[i] = s * std::exp(-s * s) / phi[i];
    w[i] = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  }
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    double row = 0.0;
    for (int j = 0; j <= n; ++j)
      row += w[j] * jac[j] *
             std::exp(pcar::sequential_logpdf(pcar::Pacf({phi[i], phi[j]}), thetas));
    total += w[i] * jac[i] * row;
  }
  return total * h * h / 9.0;
}

double base0_cdf(double phi, double theta) {
  if (phi == 0.0) return 0.5;
  const double half_tail = 0.5 * std::exp(-theta * shrink_distance(phi));
  return phi > 0.0 ? 1.0 - half_tail : half_tail;
}

}  // namespace

TEST_CASE("white-noise-base prior integrates to one") {
  for (const double theta : {0.5, 2.0, 5.0}) {
    CHECK(base0_mass(theta) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("unit-root-base prior integrates to one") {
  for (const double theta : {0.5, 1.55, 5.0}) {
    CHECK(base1_mass(theta) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("precision prior integrates to one") {
  for (const double lambda : {1.0, 4.6051701859880913680, 10.0}) {
    CHECK(gumbel2_mass(lambda) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("order-2 sequential prior integrates to one") {
  const std::vector<double> thetas = {0.87, 1.94};
  const double t1 = std::exp(-thetas[0] * kDistanceCap);
  const double t2 = std::exp(-thetas[1] * kDistanceCap);
  const double expected = (1.0 - t1) * (1.0 - t2);
  CHECK(4.0 * joint_mass_quadrant(thetas) ==
        doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("spot values and symmetry") {
  CHECK(pcar::base0_logpdf(0.0, 2.0) == 0.0);
  CHECK(pcar::base0_logpdf(0.6, 1.3) == pcar::base0_logpdf(-0.6, 1.3));
  CHECK(pcar::reference_ar1_logpdf(0.0) ==
        doctest::Approx(-std::log(std::numbers::pi)).epsilon(1e-15));
  CHECK(pcar::gumbel2_logpdf(1.0, 2.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(pcar::pacf_arcsine_product_logpdf(pcar::Pacf({0.0, 0.0})) ==
        doctest::Approx(-2.0 * std::log(std::numbers::pi)).epsilon(1e-15));
  // Larger rate concentrates mass near the base model.
  CHECK(pcar::base0_logpdf(0.9, 4.0) < pcar::base0_logpdf(0.9, 1.0));
  CHECK(pcar::base1_logpdf(0.9, 2.0) > pcar::base1_logpdf(-0.9, 2.0));
}

TEST_CASE("constant rate on the distance scale") {
  const double theta = 1.7;
  auto log_distance_density = [theta](double s) {
    const double phi = std::sqrt(-std::expm1(-s * s));
    return pcar::base0_logpdf(phi, theta) +
           std::log(s * std::exp(-s * s) / phi);
  };
  const double delta = 0.65;
  for (const double s : {0.3, 0.9, 2.0}) {
    CHECK(log_distance_density(s + delta) - log_distance_density(s) ==
          doctest::Approx(-theta * delta).epsilon(1e-10));
  }
}

TEST_CASE("unit-root-base cdf") {
  const double theta = 1.3;
  CHECK(pcar::base1_cdf(1.0, theta) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pcar::base1_cdf(-1.0 + 1e-12, theta) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-11));
  CHECK_THROWS_AS(pcar::base1_cdf(-1.0, theta), std::invalid_argument);

  double prev = 0.0;
  for (double phi = -0.99; phi < 1.0; phi += 0.03) {
    const double cur = pcar::base1_cdf(phi, theta);
    CHECK(cur > prev);
    prev = cur;
  }

  // Central difference of the cdf recovers the density.
  const double h = 1e-6;
  for (const double phi : {-0.8, -0.2, 0.4, 0.9}) {
    const double numeric =
        (pcar::base1_cdf(phi + h, theta) - pcar::base1_cdf(phi - h, theta)) /
        (2.0 * h);
    CHECK(std::exp(pcar::base1_logpdf(phi, theta)) ==
          doctest::Approx(numeric).epsilon(1e-6));
  }
}

TEST_CASE("white-noise-base sampler follows its distribution") {
  const double theta = 2.0;
  auto rng = pcar::make_rng(pcar::derive_seed(11, {1}));
  const std::size_t n = 100000;
  std::vector<double> draws(n);
  for (double& d : draws) d = pcar::base0_sample(theta, rng);

  const double d_stat = oracles::ks_statistic(
      draws, [theta](double phi) { return base0_cdf(phi, theta); });
  CHECK(oracles::ks_pvalue(d_stat, static_cast<double>(n)) > 0.01);

  // Pushforward to the distance scale must be exponential with rate theta.
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = shrink_distance(draws[i]);
  const double d_push = oracles::ks_statistic(
      dist, [theta](double s) { return -std::expm1(-theta * s); });
  CHECK(oracles::ks_pvalue(d_push, static_cast<double>(n)) > 0.01);

  double mean = 0.0;
  double mean_shrink = 0.0;
  for (const double d : draws) {
    mean += d / n;
    mean_shrink += (1.0 - d * d) / n;
  }
  CHECK(std::abs(mean) < 0.01);
  CHECK(mean_shrink ==
        doctest::Approx(pcar::expected_shrinkage(theta)).epsilon(0.01));
}

TEST_CASE("shrinkage identity against a large sample") {
  const double theta = 0.87;
  auto rng = pcar::make_rng(pcar::derive_seed(11, {2}));
  const std::size_t n = 1000000;
  double mean_shrink = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pcar::base0_sample(theta, rng);
    mean_shrink += (1.0 - d * d) / n;
  }
  const double expected = pcar::expected_shrinkage(theta);
  CHECK(std::abs(mean_shrink - expected) < 0.003);
}

TEST_CASE("unit-root-base sampler follows its cdf") {
  auto rng = pcar::make_rng(pcar::derive_seed(11, {3}));
  const double theta = pcar::theta_from_tail_base1({0.5, 0.75});
  const std::size_t n = 100000;
  std::vector<double> draws(n);
  for (double& d : draws) d = pcar::base1_sample(theta, rng);

  // Pushforward u = sqrt(1-phi) is exponential truncated to [0, sqrt(2)].
  std::vector<double> u_draws(n);
  for (std::size_t i = 0; i < n; ++i) u_draws[i] = std::sqrt(1.0 - draws[i]);
  const double denom = -std::expm1(-std::numbers::sqrt2 * theta);
  const double d_push = oracles::ks_statistic(u_draws, [&](double u) {
    return -std::expm1(-theta * u) / denom;
  });
  CHECK(oracles::ks_pvalue(d_push, static_cast<double>(n)) > 0.01);

  std::sort(draws.begin(), draws.end());

  for (const double phi : {-0.9, -0.5, 0.0, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    const auto below = std::lower_bound(draws.begin(), draws.end(), phi);
    const double empirical =
        static_cast<double>(below - draws.begin()) / static_cast<double>(n);
    CHECK(std::abs(empirical - pcar::base1_cdf(phi, theta)) < 0.008);
  }

  const auto above_half =
      draws.end() - std::upper_bound(draws.begin(), draws.end(), 0.5);
  CHECK(std::abs(static_cast<double>(above_half) / static_cast<double>(n) -
                 0.75) < 0.01);
}

TEST_CASE("sequential sampler marginals") {
  const std::vector<double> thetas = {0.9, 2.3};
  auto rng = pcar::make_rng(pcar::derive_seed(11, {4}));
  const std::size_t n = 30000;
  std::vector<double> lag1(n), lag2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const pcar::Pacf psi = pcar::sequential_sample(thetas, rng);
    lag1[i] = psi[0];
    lag2[i] = psi[1];
  }
  const double d1 = oracles::ks_statistic(
      lag1, [&](double phi) { return base0_cdf(phi, thetas[0]); });
  const double d2 = oracles::ks_statistic(
      lag2, [&](double phi) { return base0_cdf(phi, thetas[1]); });
  CHECK(oracles::ks_pvalue(d1, static_cast<double>(n)) > 0.01);
  CHECK(oracles::ks_pvalue(d2, static_cast<double>(n)) > 0.01);
}

TEST_CASE("family dispatch") {
  const pcar::Pacf psi({0.4, -0.25});

  const pcar::PacfPrior seq = pcar::SequentialPcPrior{{1.1, 2.2}};
  CHECK(pcar::pacf_prior_logpdf(seq, psi) ==
        pcar::sequential_logpdf(psi, {1.1, 2.2}));
  CHECK(pcar::prior_label(seq) == "sequential-pc");

  const pcar::PacfPrior ref = pcar::ApproximateReferencePrior{};
  CHECK(pcar::pacf_prior_logpdf(ref, psi) ==
        pcar::pacf_arcsine_product_logpdf(psi));
  CHECK(pcar::prior_label(ref) == "approximate-reference");

  const pcar::PacfPrior b1 = pcar::Ar1Base1Prior{1.5};
  CHECK(pcar::pacf_prior_logpdf(b1, pcar::Pacf({0.4})) ==
        pcar::base1_logpdf(0.4, 1.5));
  CHECK_THROWS_AS(pcar::pacf_prior_logpdf(b1, psi), std::invalid_argument);
  CHECK(pcar::prior_label(b1) == "ar1-base1-pc");

  const pcar::PacfPrior flat = pcar::FlatZPrior{};
  const double expected = -std::log1p(-0.4 * 0.4) - std::log1p(-0.25 * 0.25);
  CHECK(pcar::pacf_prior_logpdf(flat, psi) ==
        doctest::Approx(expected).epsilon(1e-15));
  CHECK(pcar::prior_label(flat) == "flat-z");
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(pcar::base0_logpdf(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(pcar::base0_logpdf(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pcar::base0_logpdf(0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(pcar::base1_logpdf(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(pcar::gumbel2_logpdf(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pcar::gumbel2_logpdf(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pcar::reference_ar1_logpdf(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(pcar::sequential_logpdf(pcar::Pacf({0.5}), {1.0, 2.0}),
                  std::invalid_argument);
  auto rng = pcar::make_rng(0);
  CHECK_THROWS_AS(pcar::sequential_sample({}, rng), std::invalid_argument);
}
