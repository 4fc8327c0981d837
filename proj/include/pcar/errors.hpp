#pragma once

#include <stdexcept>
#include <string>

namespace pcar {

/// Thrown when AR coefficients map outside the stationary region.
class nonstationary_error : public std::domain_error {
 public:
  explicit nonstationary_error(const std::string& what)
      : std::domain_error(what) {}
};

/// Thrown when a rate-calibration target cannot be met by any rate.
/// Distinct from a numeric failure of the solver itself.
class calibration_infeasible : public std::runtime_error {
 public:
  explicit calibration_infeasible(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace pcar
