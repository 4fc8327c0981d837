#include "pcar/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "pcar/process.hpp"
#include "pcar/rng.hpp"

namespace pcar {

namespace {

constexpr std::size_t kAdaptBatch = 50;
constexpr double kInitialLogStep = -0.6931471805599453;  // step 0.5
constexpr double kLogStepMin = -10.0;
constexpr double kLogStepMax = 3.0;
const double kNegInf = -std::numeric_limits<double>::infinity();

void check_config(const McmcConfig& cfg) {
  if (cfg.iterations <= cfg.burn_in)
    throw std::invalid_argument("McmcConfig: iterations must exceed burn_in");
  if (cfg.thin < 1)
    throw std::invalid_argument("McmcConfig: thin must be at least 1");
  if (!(cfg.adapt_target > 0.0 && cfg.adapt_target < 1.0))
    throw std::invalid_argument("McmcConfig: adapt_target must lie in (0, 1)");
  if ((cfg.iterations - cfg.burn_in) / cfg.thin == 0)
    throw std::invalid_argument("McmcConfig: no draws retained after thinning");
}

// Log density over the unconstrained coordinates z_k = atanh(psi_k) and
// w = ln(tau), Jacobians included.  Out-of-range states get -inf rather
// than an exception so the Metropolis loop can simply reject them.
class TransformedTarget {
 public:
  TransformedTarget(const TimeSeries* x, std::size_t p, const PacfPrior& pacf_prior,
                    const PrecisionPrior& precision)
      : x_(x), p_(p), pacf_prior_(&pacf_prior), precision_(&precision), psi_(p) {}

  bool tau_sampled() const {
    return std::holds_alternative<Gumbel2PrecisionPrior>(*precision_);
  }

  double operator()(const std::vector<double>& z, double w) {
    double jacobian = 0.0;
    for (std::size_t k = 0; k < p_; ++k) {
      const double psi = std::tanh(z[k]);
      if (!(std::abs(psi) <= kPacfLimit)) return kNegInf;
      psi_[k] = psi;
      jacobian += std::log1p(-psi * psi);
    }
    if (std::abs(w) > 690.0) return kNegInf;

    Pacf pacf(psi_);
    double lp = pacf_prior_logpdf(*pacf_prior_, pacf) + jacobian;
    double tau;
    if (const auto* gumbel = std::get_if<Gumbel2PrecisionPrior>(precision_)) {
      tau = std::exp(w);
      lp += gumbel2_logpdf(tau, gumbel->lambda) + w;
    } else {
      tau = std::get<FixedPrecision>(*precision_).tau;
    }
    if (x_) lp += log_likelihood(*x_, ArProcessSpec(std::move(pacf), tau));
    return lp;
  }

 private:
  const TimeSeries* x_;
  std::size_t p_;
  const PacfPrior* pacf_prior_;
  const PrecisionPrior* precision_;
  std::vector<double> psi_;  // scratch
};

PosteriorSamples run_sampler(const TimeSeries* x, std::size_t p,
                             const PacfPrior& pacf_prior,
                             const PrecisionPrior& precision,
                             const McmcConfig& cfg) {
  check_config(cfg);
  if (p == 0) throw std::invalid_argument("fit order must be positive");
  if (const auto* seq = std::get_if<SequentialPcPrior>(&pacf_prior);
      seq && seq->thetas.size() != p)
    throw std::invalid_argument("prior needs one rate per lag");
  if (std::holds_alternative<Ar1Base1Prior>(pacf_prior) && p != 1)
    throw std::invalid_argument("unit-root base prior applies to order 1 only");

  double data_variance = 0.0;
  if (x) {
    if (x->size() <= p)
      throw std::invalid_argument("series length must exceed the fit order");
    const double mean =
        std::accumulate(x->begin(), x->end(), 0.0) / static_cast<double>(x->size());
    for (double v : *x) data_variance += (v - mean) * (v - mean);
    data_variance /= static_cast<double>(x->size());
    if (data_variance == 0.0)
      throw std::invalid_argument("input series has zero variance");
  }

  TransformedTarget target(x, p, pacf_prior, precision);
  const bool tau_free = target.tau_sampled();
  const std::size_t n_coords = p + (tau_free ? 1 : 0);

  std::vector<double> z(p, 0.0);
  double w = 0.0;
  if (tau_free && x) w = std::log(std::clamp(1.0 / data_variance, 1e-6, 1e6));

  std::vector<double> log_step(n_coords, kInitialLogStep);
  std::vector<long> accepted_batch(n_coords, 0);
  std::vector<long> accepted_post(n_coords, 0);

  const std::size_t m = (cfg.iterations - cfg.burn_in) / cfg.thin;
  Eigen::MatrixXd psi_draws(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
  Eigen::VectorXd tau_draws(static_cast<Eigen::Index>(m));
  const double fixed_tau =
      tau_free ? 0.0 : std::get<FixedPrecision>(precision).tau;

  Rng rng = make_rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  double cur_lp = target(z, w);
  if (!std::isfinite(cur_lp))
    throw std::runtime_error("sampler start state has zero target density");

  std::size_t batch = 0;
  std::size_t stored = 0;
  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    auto& accepted = t <= cfg.burn_in ? accepted_batch : accepted_post;
    for (std::size_t k = 0; k < n_coords; ++k) {
      const double step = std::exp(log_step[k]);
      double* coord = k < p ? &z[k] : &w;
      const double old = *coord;
      *coord = old + step * normal(rng);
      const double cand_lp = target(z, w);
      if (std::log(unif(rng)) < cand_lp - cur_lp) {
        cur_lp = cand_lp;
        ++accepted[k];
      } else {
        *coord = old;
      }
    }
    if (t <= cfg.burn_in && t % kAdaptBatch == 0) {
      ++batch;
      const double delta =
          std::min(0.1, 1.0 / std::sqrt(static_cast<double>(batch)));
      for (std::size_t k = 0; k < n_coords; ++k) {
        const double rate =
            static_cast<double>(accepted_batch[k]) / static_cast<double>(kAdaptBatch);
        log_step[k] += rate > cfg.adapt_target ? delta : -delta;
        log_step[k] = std::clamp(log_step[k], kLogStepMin, kLogStepMax);
        accepted_batch[k] = 0;
      }
    }
    if (t > cfg.burn_in && (t - cfg.burn_in) % cfg.thin == 0 && stored < m) {
      for (std::size_t k = 0; k < p; ++k)
        psi_draws(static_cast<Eigen::Index>(stored), static_cast<Eigen::Index>(k)) =
            std::tanh(z[k]);
      tau_draws(static_cast<Eigen::Index>(stored)) =
          tau_free ? std::exp(w) : fixed_tau;
      ++stored;
    }
  }

  PosteriorSamples out;
  out.psi_draws = std::move(psi_draws);
  out.tau_draws = std::move(tau_draws);
  out.tau_sampled = tau_free;
  const double post_iters = static_cast<double>(cfg.iterations - cfg.burn_in);
  out.acceptance_rates.resize(n_coords);
  for (std::size_t k = 0; k < n_coords; ++k)
    out.acceptance_rates[k] = static_cast<double>(accepted_post[k]) / post_iters;
  out.ess.resize(n_coords);
  for (std::size_t k = 0; k < p; ++k)
    out.ess[k] = effective_sample_size(
        {out.psi_draws.col(static_cast<Eigen::Index>(k)).data(), m});
  if (tau_free)
    out.ess[p] = effective_sample_size({out.tau_draws.data(), m});
  return out;
}

}  // namespace

PosteriorSamples fit_ar(const TimeSeries& x, std::size_t p,
                        const PriorConfig& prior, const McmcConfig& mcmc) {
  return run_sampler(&x, p, prior.pacf_prior, prior.precision_prior, mcmc);
}

PosteriorSamples sample_pacf_prior(std::size_t p, const PacfPrior& prior,
                                   const McmcConfig& mcmc) {
  const PrecisionPrior fixed = FixedPrecision{1.0};
  return run_sampler(nullptr, p, prior, fixed, mcmc);
}

std::pair<double, double> hpd_interval(std::vector<double> draws, double prob) {
  const std::size_t m = draws.size();
  if (m < 100)
    throw std::invalid_argument("hpd_interval: need at least 100 draws");
  if (!(prob > 0.0 && prob < 1.0))
    throw std::invalid_argument("hpd_interval: prob must lie in (0, 1)");
  std::sort(draws.begin(), draws.end());
  const std::size_t window = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(prob * static_cast<double>(m))), 1, m);
  std::size_t best = 0;
  double best_width = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + window <= m; ++i) {
    const double width = draws[i + window - 1] - draws[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {draws[best], draws[best + window - 1]};
}

double effective_sample_size(std::span<const double> chain) {
  const std::size_t m = chain.size();
  if (m == 0)
    throw std::invalid_argument("effective_sample_size: empty chain");
  if (m == 1) return 1.0;

  const double mean =
      std::accumulate(chain.begin(), chain.end(), 0.0) / static_cast<double>(m);
  std::vector<double> centered(m);
  for (std::size_t t = 0; t < m; ++t) centered[t] = chain[t] - mean;

  const auto gamma = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < m; ++t) s += centered[t] * centered[t + lag];
    return s / static_cast<double>(m);
  };

  // A bitwise-constant chain can still show variance at rounding scale,
  // because the accumulated mean is not exactly the common value.
  const double g0 = gamma(0);
  const double rounding_sd = std::numeric_limits<double>::epsilon() *
                             static_cast<double>(m) * std::abs(mean);
  if (g0 <= 0.0 || std::sqrt(g0) <= rounding_sd)
    return static_cast<double>(m);  // constant chain

  // Initial monotone positive sequence over paired autocovariances.
  double var_sum = -g0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < m; k += 2) {
    double pair = gamma(k) + gamma(k + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    var_sum += 2.0 * pair;
    prev_pair = pair;
  }
  if (var_sum <= 0.0) return static_cast<double>(m);
  const double ess = g0 * static_cast<double>(m) / var_sum;
  return std::min(ess, static_cast<double>(m));
}

std::vector<ParameterSummary> posterior_summary(const PosteriorSamples& s,
                                                double hpd_prob) {
  const std::size_t m = s.draw_count();
  const std::size_t p = s.order();
  if (m == 0) throw std::invalid_argument("posterior_summary: no draws");

  const std::size_t n_params = p + (s.tau_sampled ? 1 : 0);
  std::vector<ParameterSummary> out(n_params);
  std::vector<double> column(m);
  for (std::size_t j = 0; j < n_params; ++j) {
    ParameterSummary& ps = out[j];
    if (j < p) {
      ps.name = "psi" + std::to_string(j + 1);
      for (std::size_t t = 0; t < m; ++t)
        column[t] = s.psi_draws(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
    } else {
      ps.name = "tau";
      for (std::size_t t = 0; t < m; ++t)
        column[t] = s.tau_draws(static_cast<Eigen::Index>(t));
    }

    const double mean =
        std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(m);
    double ss = 0.0;
    for (double v : column) ss += (v - mean) * (v - mean);
    ps.mean = mean;
    ps.sd = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1)) : 0.0;
    ps.ess = j < s.ess.size() ? s.ess[j] : effective_sample_size(column);

    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());
    ps.median = m % 2 == 1 ? sorted[m / 2]
                           : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    const auto [lo, hi] = hpd_interval(std::move(sorted), hpd_prob);
    ps.hpd_lo = lo;
    ps.hpd_hi = hi;
  }
  return out;
}

}  // namespace pcar
