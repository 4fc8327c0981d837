#include "pcar/divergence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

namespace pcar {

CorrelationMatrix correlation_matrix(const Pacf& psi, std::size_t n) {
  if (n == 0) throw std::invalid_argument("correlation_matrix: n must be positive");
  const std::vector<double> rho =
      n > 1 ? autocorrelations(psi, n - 1) : std::vector<double>{1.0};
  CorrelationMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rho[i > j ? i - j : j - i];
  return m;
}

namespace {

// Cholesky factor or throw; log-determinant read off the diagonal.
double cholesky_log_det(const CorrelationMatrix& m, Eigen::LLT<CorrelationMatrix>& llt,
                        const char* name) {
  llt.compute(m);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(std::string("kld_gaussian: ") + name +
                                " is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

double kld_gaussian(const CorrelationMatrix& sigma1, const CorrelationMatrix& sigma0) {
  if (sigma1.rows() != sigma1.cols() || sigma0.rows() != sigma0.cols())
    throw std::invalid_argument("kld_gaussian: matrices must be square");
  if (sigma1.rows() != sigma0.rows())
    throw std::invalid_argument("kld_gaussian: dimension mismatch");

  const auto n = sigma0.rows();
  Eigen::LLT<CorrelationMatrix> llt0;
  Eigen::LLT<CorrelationMatrix> llt1;
  const double log_det0 = cholesky_log_det(sigma0, llt0, "sigma0");
  const double log_det1 = cholesky_log_det(sigma1, llt1, "sigma1");

  const double trace = llt0.solve(sigma1).trace();
  const double kld =
      0.5 * (trace - static_cast<double>(n) - (log_det1 - log_det0));
  // Exact value is nonnegative; tiny negatives are rounding noise.
  return kld < 0.0 ? 0.0 : kld;
}

double distance_ar1_base0(double phi, std::size_t n) {
  if (!(n >= 2)) throw std::invalid_argument("distance_ar1_base0: need n >= 2");
  if (!(std::abs(phi) < 1.0))
    throw std::invalid_argument("distance_ar1_base0: |phi| must be < 1");
  return std::sqrt(-static_cast<double>(n - 1) * std::log1p(-phi * phi));
}

double distance_sequential(double psi_p, std::size_t n, std::size_t p) {
  if (p == 0) throw std::invalid_argument("distance_sequential: p must be positive");
  if (!(n > p)) throw std::invalid_argument("distance_sequential: need n > p");
  if (!(std::abs(psi_p) < 1.0))
    throw std::invalid_argument("distance_sequential: |psi_p| must be < 1");
  return std::sqrt(-static_cast<double>(n - p) * std::log1p(-psi_p * psi_p));
}

double distance_ar1_base1_standardised(double phi) {
  if (!(phi > -1.0 && phi < 1.0))
    throw std::invalid_argument("distance_ar1_base1_standardised: phi must be in (-1, 1)");
  return std::sqrt(1.0 - phi);
}

}  // namespace pcar
