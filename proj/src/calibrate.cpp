#include "pcar/calibrate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pcar/errors.hpp"
#include "pcar/rootfind.hpp"
#include "pcar/special.hpp"

namespace pcar {

namespace {

constexpr double kBracketLo = 1e-8;
constexpr double kBracketHi = 50.0;
constexpr double kResidualTol = 1e-12;

void check_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument(std::string(where) + ": alpha must lie in (0, 1)");
}

// Solve f(theta) = 0 for increasing f on [kBracketLo, hi0], doubling the
// upper end (to at most hi_max) when the target sits beyond it.
double solve_increasing(const auto& f, double hi0, double hi_max, const char* infeasible_msg) {
  double hi = hi0;
  if (f(kBracketLo) >= 0.0) return kBracketLo;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > hi_max) throw calibration_infeasible(infeasible_msg);
  }
  return find_root_increasing(f, kBracketLo, hi, kResidualTol).x;
}

}  // namespace

double theta_from_tail_base0(const TailStatement& ts) {
  if (!(ts.U > 0.0 && ts.U < 1.0))
    throw std::invalid_argument("theta_from_tail_base0: U must lie in (0, 1)");
  check_alpha(ts.alpha, "theta_from_tail_base0");
  const double s_u = std::sqrt(-std::log1p(-ts.U * ts.U));
  return -std::log(ts.alpha) / s_u;
}

double theta_from_tail_base1(const TailStatement& ts) {
  if (!(ts.U > -1.0 && ts.U < 1.0))
    throw std::invalid_argument("theta_from_tail_base1: U must lie in (-1, 1)");
  check_alpha(ts.alpha, "theta_from_tail_base1");
  const double u = std::sqrt(1.0 - ts.U);
  const double lower_limit = u / std::numbers::sqrt2;
  if (!(ts.alpha > lower_limit))
    throw calibration_infeasible(
        "theta_from_tail_base1: alpha " + std::to_string(ts.alpha) +
        " is at or below the feasibility limit sqrt((1-U)/2) = " +
        std::to_string(lower_limit));

  const auto tail_gap = [&](double theta) {
    return -std::expm1(-theta * u) / -std::expm1(-std::numbers::sqrt2 * theta) -
           ts.alpha;
  };
  return solve_increasing(tail_gap, kBracketHi, 1e4,
                          "theta_from_tail_base1: alpha too close to 1");
}

double expected_shrinkage(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("expected_shrinkage: theta must be positive and finite");
  constexpr double half_sqrt_pi = 0.88622692545275801364908374167057;
  return theta * half_sqrt_pi * erfc_scaled(0.5 * theta);
}

std::vector<double> theta_schedule(const ShrinkageSchedule& sched, std::size_t p) {
  if (p == 0) throw std::invalid_argument("theta_schedule: p must be positive");
  if (!(sched.a >= 0.0 && sched.a <= 1.0 && sched.b >= 0.0 && sched.b <= 1.0))
    throw std::invalid_argument("theta_schedule: a and b must lie in [0, 1]");

  std::vector<double> thetas(p);
  double decay = 1.0;  // b^{k-1}
  for (std::size_t k = 0; k < p; ++k, decay *= sched.b) {
    const double target = 1.0 - (1.0 - sched.a) * decay;
    if (!(target > 0.0 && target < 1.0))
      throw calibration_infeasible("theta_schedule: lag " + std::to_string(k + 1) +
                                   " target " + std::to_string(target) +
                                   " must lie strictly inside (0, 1)");
    const auto gap = [target](double theta) {
      return expected_shrinkage(theta) - target;
    };
    thetas[k] = solve_increasing(gap, kBracketHi, 1e8,
                                 "theta_schedule: target too close to 1");
  }
  return thetas;
}

double gumbel2_lambda_from_tail(const TailStatement& ts) {
  if (!(ts.U > 0.0) || !std::isfinite(ts.U))
    throw std::invalid_argument("gumbel2_lambda_from_tail: U must be positive and finite");
  check_alpha(ts.alpha, "gumbel2_lambda_from_tail");
  return -std::log(ts.alpha) / ts.U;
}

}  // namespace pcar
