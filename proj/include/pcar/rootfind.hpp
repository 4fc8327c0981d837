#pragma once

#include <cmath>
#include <stdexcept>

namespace pcar {

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/**
 * Root of a continuous increasing function on [lo, hi] by the Illinois
 * variant of false position, with a bisection step whenever the secant
 * update stalls.  Requires f(lo) <= 0 <= f(hi); stops when |f(x)| <= f_tol
 * or the bracket collapses to machine spacing.
 */
template <class F>
RootResult find_root_increasing(F f, double lo, double hi, double f_tol) {
  if (!(lo < hi)) throw std::invalid_argument("find_root_increasing: empty bracket");
  double flo = f(lo);
  double fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi))
    throw std::domain_error("find_root_increasing: function returned NaN at bracket");
  if (flo > 0.0 || fhi < 0.0)
    throw std::domain_error("find_root_increasing: root not bracketed");
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};

  int side = 0;  // which endpoint the last retained sign was on
  double x = lo;
  double fx = flo;
  for (int it = 1; it <= 200; ++it) {
    x = (flo * hi - fhi * lo) / (flo - fhi);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    fx = f(x);
    if (std::isnan(fx))
      throw std::domain_error("find_root_increasing: function returned NaN");
    if (std::abs(fx) <= f_tol || hi - lo <= std::abs(x) * 1e-15 + 1e-300)
      return {x, fx, it};
    if (fx < 0.0) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;  // Illinois damping against stagnation
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  return {x, fx, 200};
}

}  // namespace pcar
