#pragma once

#include <cstddef>
#include <vector>

namespace pcar {

/// Tail probability statement: the prior should put mass alpha beyond the
/// threshold U.  base0 reads it as P(|phi| > U), base1 as P(phi > U), the
/// precision prior as P(1/sqrt(tau) > U).
struct TailStatement {
  double U = 0.5;
  double alpha = 0.05;
};

/// Two-parameter prior-informativeness schedule: lag k targets expected
/// shrinkage 1 - (1-a) b^{k-1}.
struct ShrinkageSchedule {
  double a = 0.5;
  double b = 0.5;
};

/// Closed-form rate for the white-noise-base prior satisfying
/// P(|phi| > U) = alpha.  Requires 0 < U < 1.
double theta_from_tail_base0(const TailStatement& ts);

/**
 * Rate for the unit-root-base prior satisfying P(phi > U) = alpha, found by
 * bracketed root finding on a monotone map; plug-back residual <= 1e-10.
 *
 * Feasible only for alpha above sqrt((1-U)/2), the theta -> 0 limit of the
 * tail mass; throws calibration_infeasible otherwise.
 */
double theta_from_tail_base1(const TailStatement& ts);

/// E(1 - phi^2) under the white-noise-base prior with rate theta.
/// Strictly increasing, range (0, 1).
double expected_shrinkage(double theta);

/// Per-lag rates theta_1..theta_p solving expected_shrinkage(theta_k) =
/// 1 - (1-a) b^{k-1}; each plug-back residual <= 1e-10.  A target of 0 or 1
/// is calibration_infeasible.
std::vector<double> theta_schedule(const ShrinkageSchedule& sched, std::size_t p);

/// Closed-form rate for the precision prior satisfying
/// P(1/sqrt(tau) > U) = alpha.
double gumbel2_lambda_from_tail(const TailStatement& ts);

}  // namespace pcar
