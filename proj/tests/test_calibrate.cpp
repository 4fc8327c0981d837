#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "pcar/calibrate.hpp"
#include "pcar/errors.hpp"
#include "pcar/priors.hpp"
#include "pcar/rootfind.hpp"
#include "pcar/pacf.hpp"

namespace {

double shrink_distance(double phi) {
  return std::sqrt(-std::log1p(-phi * phi));
}

// P(|phi| > U) under the white-noise-base prior, by quadrature of the
// production density on the distance scale plus the boundary sliver.
double base0_tail_mass(double theta, double U) {
  const double s_cap = shrink_distance(pcar::kPacfLimit);
  const double body = oracles::integrate(
      [theta](double s) {
        const double phi = std::sqrt(-std::expm1(-s * s));
        const double dphi_ds = s * std::exp(-s * s) / phi;
        return std::exp(pcar::base0_logpdf(phi, theta)) * dphi_ds;
      },
      shrink_distance(U), s_cap, 1e-12);
  return 2.0 * body + std::exp(-theta * s_cap);
}

double base1_tail_residual(double theta, const pcar::TailStatement& ts) {
  const double u = std::sqrt(1.0 - ts.U);
  return -std::expm1(-theta * u) /
             -std::expm1(-std::numbers::sqrt2 * theta) -
         ts.alpha;
}

}  // namespace

TEST_CASE("root finder") {
  const auto sq = [](double x) { return x * x - 2.0; };
  const auto r = pcar::find_root_increasing(sq, 0.0, 2.0, 1e-13);
  CHECK(r.x == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
  CHECK(std::abs(r.residual) <= 1e-13);
  CHECK(r.iterations < 200);

  // Exponential target with a flat left flank, the shape the calibrations see.
  const auto g = [](double x) { return -std::expm1(-x) - 0.99; };
  const auto r2 = pcar::find_root_increasing(g, 1e-8, 50.0, 1e-14);
  CHECK(r2.x == doctest::Approx(-std::log(0.01)).epsilon(1e-10));

  CHECK_THROWS_AS(pcar::find_root_increasing(sq, 2.0, 0.5, 1e-10),
                  std::invalid_argument);
  CHECK_THROWS_AS(pcar::find_root_increasing(sq, 1.5, 2.0, 1e-10),
                  std::domain_error);
  const auto bad = [](double) { return std::nan(""); };
  CHECK_THROWS_AS(pcar::find_root_increasing(bad, 0.0, 1.0, 1e-10),
                  std::domain_error);
}

TEST_CASE("white-noise-base tail calibration") {
  const double theta = pcar::theta_from_tail_base0({0.5, 0.05});
  CHECK(theta ==
        doctest::Approx(-std::log(0.05) / std::sqrt(-std::log(0.75)))
            .epsilon(1e-14));
  CHECK(std::abs(theta - 5.59) < 0.01);

  for (const double U : {0.3, 0.5, 0.8}) {
    for (const double alpha : {0.01, 0.05, 0.2}) {
      const double t = pcar::theta_from_tail_base0({U, alpha});
      CHECK(base0_tail_mass(t, U) == doctest::Approx(alpha).epsilon(1e-6));
    }
  }

  // Pushing the threshold out weakens the required shrinkage.
  CHECK(pcar::theta_from_tail_base0({0.9, 0.05}) <
        pcar::theta_from_tail_base0({0.5, 0.05}));

  CHECK_THROWS_AS(pcar::theta_from_tail_base0({0.0, 0.05}),
                  std::invalid_argument);
  CHECK_THROWS_AS(pcar::theta_from_tail_base0({0.5, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("unit-root-base tail calibration") {
  const pcar::TailStatement ts{0.5, 0.75};
  const double theta = pcar::theta_from_tail_base1(ts);
  CHECK(std::abs(theta - 1.55) < 0.01);
  CHECK(std::abs(base1_tail_residual(theta, ts)) <= 1e-10);

  const pcar::TailStatement wide{0.0, 0.8};
  const double theta_wide = pcar::theta_from_tail_base1(wide);
  CHECK(std::abs(base1_tail_residual(theta_wide, wide)) <= 1e-10);

  // Tail mass below the theta -> 0 limit sqrt((1-U)/2) cannot be reached.
  CHECK_THROWS_AS(pcar::theta_from_tail_base1({0.5, 0.3}),
                  pcar::calibration_infeasible);
  CHECK_THROWS_AS(pcar::theta_from_tail_base1({0.5, 0.5}),
                  pcar::calibration_infeasible);
  CHECK_THROWS_AS(pcar::theta_from_tail_base1({0.0, 0.4}),
                  pcar::calibration_infeasible);

  // Just above the limit the solution exists and is tiny.
  const double eps_theta = pcar::theta_from_tail_base1({0.5, 0.5 + 1e-6});
  CHECK(eps_theta > 0.0);
  CHECK(eps_theta < 1e-4);

  CHECK_THROWS_AS(pcar::theta_from_tail_base1({-1.0, 0.9}),
                  std::invalid_argument);
}

TEST_CASE("expected shrinkage") {
  CHECK(pcar::expected_shrinkage(1e-6) < 1e-5);
  CHECK(pcar::expected_shrinkage(50.0) > 0.99);
  CHECK(std::abs(pcar::expected_shrinkage(0.87) - 0.5) < 0.01);
  CHECK(std::abs(pcar::expected_shrinkage(1.94) - 0.75) < 0.01);
  CHECK(std::abs(pcar::expected_shrinkage(3.33) - 0.875) < 0.01);

  double prev = 0.0;
  for (double theta = 0.1; theta <= 40.0; theta *= 1.3) {
    const double cur = pcar::expected_shrinkage(theta);
    CHECK(cur > prev);
    CHECK(cur < 1.0);
    prev = cur;
  }

  // Quadrature of (1 - phi^2) against the production density.
  for (const double theta : {0.5, 2.0}) {
    const double s_cap = shrink_distance(pcar::kPacfLimit);
    const double mean = 2.0 * oracles::integrate(
                                  [theta](double s) {
                                    const double phi =
                                        std::sqrt(-std::expm1(-s * s));
                                    const double dphi_ds =
                                        s * std::exp(-s * s) / phi;
                                    return (1.0 - phi * phi) *
                                           std::exp(pcar::base0_logpdf(phi, theta)) *
                                           dphi_ds;
                                  },
                                  1e-8, s_cap, 1e-13);
    CHECK(pcar::expected_shrinkage(theta) ==
          doctest::Approx(mean).epsilon(1e-7));
  }

  CHECK_THROWS_AS(pcar::expected_shrinkage(0.0), std::invalid_argument);
}

TEST_CASE("shrinkage schedule") {
  const std::vector<double> thetas = pcar::theta_schedule({0.5, 0.5}, 3);
  REQUIRE(thetas.size() == 3);
  CHECK(std::abs(thetas[0] - 0.87) < 0.01);
  CHECK(std::abs(thetas[1] - 1.94) < 0.01);
  CHECK(std::abs(thetas[2] - 3.33) < 0.01);
  CHECK(thetas[0] < thetas[1]);
  CHECK(thetas[1] < thetas[2]);

  const std::vector<double> flat = pcar::theta_schedule({0.4, 1.0}, 4);
  for (std::size_t k = 1; k < flat.size(); ++k) CHECK(flat[k] == flat[0]);

  const std::vector<double> deep = pcar::theta_schedule({0.3, 0.8}, 4);
  double decay = 1.0;
  for (std::size_t k = 0; k < deep.size(); ++k, decay *= 0.8) {
    const double target = 1.0 - 0.7 * decay;
    CHECK(std::abs(pcar::expected_shrinkage(deep[k]) - target) <= 1e-10);
  }

  CHECK_THROWS_AS(pcar::theta_schedule({1.0, 0.5}, 2),
                  pcar::calibration_infeasible);
  CHECK_THROWS_AS(pcar::theta_schedule({0.0, 1.0}, 2),
                  pcar::calibration_infeasible);
  CHECK_THROWS_AS(pcar::theta_schedule({0.5, 0.5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(pcar::theta_schedule({-0.1, 0.5}, 2), std::invalid_argument);

  // A long schedule with decaying b pushes targets toward 1; the solver must
  // either reach them or report infeasibility, not loop.
  const std::vector<double> long_run = pcar::theta_schedule({0.5, 0.5}, 12);
  CHECK(long_run.back() > long_run.front());
  decay = 1.0;
  for (std::size_t k = 0; k < long_run.size(); ++k, decay *= 0.5) {
    const double target = 1.0 - 0.5 * decay;
    CHECK(std::abs(pcar::expected_shrinkage(long_run[k]) - target) <= 1e-10);
  }
}

TEST_CASE("precision tail calibration") {
  for (const double U : {0.31, 1.0}) {
    for (const double alpha : {0.01, 0.2}) {
      const double lambda = pcar::gumbel2_lambda_from_tail({U, alpha});
      CHECK(std::exp(-lambda * U) == doctest::Approx(alpha).epsilon(1e-13));

      // Quadrature of the density over tau < U^{-2}.
      const double mass = oracles::integrate(
          [lambda](double s) {
            const double tau = 1.0 / (s * s);
            return std::exp(pcar::gumbel2_logpdf(tau, lambda)) * 2.0 /
                   (s * s * s);
          },
          U, U + 45.0 / lambda, 1e-12);
      CHECK(mass == doctest::Approx(alpha).epsilon(1e-8));
    }
  }

  CHECK(pcar::gumbel2_lambda_from_tail({0.3 / 0.31, 0.01}) ==
        doctest::Approx(-std::log(0.01) * 0.31 / 0.3).epsilon(1e-14));
  CHECK(pcar::Gumbel2PrecisionPrior{}.lambda ==
        doctest::Approx(-std::log(0.01)).epsilon(1e-15));

  CHECK_THROWS_AS(pcar::gumbel2_lambda_from_tail({0.0, 0.05}),
                  std::invalid_argument);
}
