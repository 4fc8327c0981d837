#include "pcar/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pcar {

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628694807945156077;

// erfc_scaled(x) = exp(x^2) - (2x/sqrt(pi)) * sum_n (2x^2)^n / (2n+1)!!
// from the Maclaurin series of erf; converges fast for x below ~2.
double series_small(double x) {
  const double two_x2 = 2.0 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 200; ++n) {
    term *= two_x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(x * x) - 2.0 * x * kInvSqrtPi * sum;
}

// Continued fraction erfc_scaled(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x +
// (3/2)/(x + 2/(x + ...))))), evaluated by the modified Lentz method.
double lentz_large(double x) {
  constexpr double tiny = 1e-30;
  double f = x;
  if (f == 0.0) f = tiny;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 400; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return kInvSqrtPi / f;
}

}  // namespace

double erfc_scaled(double x) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x < 0.0) throw std::invalid_argument("erfc_scaled: x must be nonnegative");
  if (x == std::numeric_limits<double>::infinity()) return 0.0;
  return x < 2.0 ? series_small(x) : lentz_large(x);
}

}  // namespace pcar
