#include "pcar/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pcar/process.hpp"
#include "pcar/rng.hpp"

namespace pcar {

double rmse(const std::vector<double>& estimates, double truth) {
  if (estimates.empty()) throw std::invalid_argument("rmse: empty estimates");
  double ss = 0.0;
  for (double e : estimates) {
    const double d = e - truth;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(estimates.size()));
}

double coverage(const std::vector<std::pair<double, double>>& intervals,
                double truth) {
  if (intervals.empty()) throw std::invalid_argument("coverage: empty intervals");
  std::size_t hits = 0;
  for (const auto& [lo, hi] : intervals) {
    if (lo > hi) throw std::invalid_argument("coverage: interval has lo > hi");
    if (lo <= truth && truth <= hi) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(intervals.size());
}

namespace {

void validate_config(const StudyConfig& cfg) {
  if (cfg.cases.empty()) throw std::invalid_argument("run_study: no cases");
  if (cfg.priors.empty()) throw std::invalid_argument("run_study: no priors");
  if (cfg.replications < 1)
    throw std::invalid_argument("run_study: need at least one replication");
  if (cfg.fit_order < 1)
    throw std::invalid_argument("run_study: fit order must be positive");
  if (!(cfg.hpd_prob > 0.0 && cfg.hpd_prob < 1.0))
    throw std::invalid_argument("run_study: hpd_prob must lie in (0, 1)");
  for (std::size_t c = 0; c < cfg.cases.size(); ++c) {
    const StudyCase& cs = cfg.cases[c];
    if (cs.true_pacf.order() != cfg.fit_order)
      throw std::invalid_argument("run_study: case " + std::to_string(c + 1) +
                                  " truth order differs from fit order");
    if (cs.n <= cfg.fit_order)
      throw std::invalid_argument("run_study: case " + std::to_string(c + 1) +
                                  " series length must exceed fit order");
  }
  for (std::size_t q = 0; q < cfg.priors.size(); ++q) {
    const PacfPrior& prior = cfg.priors[q].pacf_prior;
    if (const auto* seq = std::get_if<SequentialPcPrior>(&prior);
        seq && seq->thetas.size() != cfg.fit_order)
      throw std::invalid_argument("run_study: prior " + std::to_string(q + 1) +
                                  " needs one rate per fitted lag");
    if (std::holds_alternative<Ar1Base1Prior>(prior) && cfg.fit_order != 1)
      throw std::invalid_argument("run_study: prior " + std::to_string(q + 1) +
                                  " applies to order 1 only");
  }
}

double point_estimate(std::vector<double>& column, PointEstimator which) {
  if (which == PointEstimator::mean)
    return std::accumulate(column.begin(), column.end(), 0.0) /
           static_cast<double>(column.size());
  const std::size_t m = column.size();
  std::nth_element(column.begin(), column.begin() + m / 2, column.end());
  const double upper = column[m / 2];
  if (m % 2 == 1) return upper;
  std::nth_element(column.begin(), column.begin() + m / 2 - 1,
                   column.begin() + m / 2);
  return 0.5 * (column[m / 2 - 1] + upper);
}

double sample_sd(const std::vector<double>& v) {
  const std::size_t m = v.size();
  if (m < 2) return 0.0;
  const double mean =
      std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(m);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(m - 1));
}

}  // namespace

StudyReport run_study(const StudyConfig& cfg) {
  validate_config(cfg);
  const auto start = std::chrono::steady_clock::now();

  const std::size_t n_cases = cfg.cases.size();
  const std::size_t n_priors = cfg.priors.size();
  const std::size_t p = cfg.fit_order;
  const std::size_t m = cfg.replications;
  const std::size_t total_tasks = n_cases * m;

  // One slot per (case, prior, lag, replication); workers write disjoint
  // slots, so aggregation after the join is race-free and order-fixed.
  std::vector<double> estimates(n_cases * n_priors * p * m, 0.0);
  std::vector<unsigned char> hpd_hits(estimates.size(), 0);
  const auto slot = [&](std::size_t c, std::size_t q, std::size_t l, std::size_t r) {
    return ((c * n_priors + q) * p + l) * m + r;
  };

  std::atomic<std::size_t> next_task{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t error_case = 0;
  std::size_t error_rep = 0;

  const auto run_task = [&](std::size_t c, std::size_t r) {
    const StudyCase& cs = cfg.cases[c];
    const std::uint64_t sim_seed = derive_seed(cfg.master_seed, {c, r});
    const TimeSeries x =
        simulate(ArProcessSpec(cs.true_pacf, cs.true_tau), cs.n, sim_seed);
    std::vector<double> column;
    for (std::size_t q = 0; q < n_priors; ++q) {
      McmcConfig mc = cfg.mcmc;
      mc.seed = derive_seed(cfg.master_seed, {c, r, q});
      const PosteriorSamples draws = fit_ar(x, p, cfg.priors[q], mc);
      const std::size_t n_draws = draws.draw_count();
      for (std::size_t l = 0; l < p; ++l) {
        column.resize(n_draws);
        for (std::size_t t = 0; t < n_draws; ++t)
          column[t] = draws.psi_draws(static_cast<Eigen::Index>(t),
                                      static_cast<Eigen::Index>(l));
        const auto [lo, hi] = hpd_interval(column, cfg.hpd_prob);
        const double truth = cs.true_pacf[l];
        const std::size_t i = slot(c, q, l, r);
        estimates[i] = point_estimate(column, cfg.estimator);
        hpd_hits[i] = lo <= truth && truth <= hi ? 1 : 0;
      }
    }
  };

  const auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next_task.fetch_add(1);
      if (i >= total_tasks) break;
      const std::size_t c = i / m;
      const std::size_t r = i % m;
      try {
        run_task(c, r);
      } catch (...) {
        const std::lock_guard<std::mutex> guard(error_mutex);
        if (!failed.exchange(true)) {
          first_error = std::current_exception();
          error_case = c;
          error_rep = r;
        }
      }
    }
  };

  const std::size_t jobs =
      std::max<std::size_t>(1, std::min(cfg.jobs, total_tasks));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  if (failed.load()) {
    std::string detail = "unknown error";
    try {
      std::rethrow_exception(first_error);
    } catch (const std::exception& e) {
      detail = e.what();
    } catch (...) {
    }
    throw std::runtime_error("run_study: case " + std::to_string(error_case + 1) +
                             ", replication " + std::to_string(error_rep + 1) +
                             " failed: " + detail);
  }

  StudyReport report;
  report.config = cfg;
  report.cells.assign(n_cases, std::vector<CellStats>(n_priors));
  std::vector<double> sq_errors(m);
  for (std::size_t c = 0; c < n_cases; ++c) {
    for (std::size_t q = 0; q < n_priors; ++q) {
      CellStats& cell = report.cells[c][q];
      cell.lags.resize(p);
      for (std::size_t l = 0; l < p; ++l) {
        const double truth = cfg.cases[c].true_pacf[l];
        double sq_sum = 0.0;
        std::size_t hits = 0;
        for (std::size_t r = 0; r < m; ++r) {
          const std::size_t i = slot(c, q, l, r);
          const double err = estimates[i] - truth;
          sq_errors[r] = err * err;
          sq_sum += sq_errors[r];
          hits += hpd_hits[i];
        }
        LagStats& stats = cell.lags[l];
        stats.rmse = std::sqrt(sq_sum / static_cast<double>(m));
        stats.rmse_mc_se =
            stats.rmse > 0.0
                ? sample_sd(sq_errors) /
                      (2.0 * stats.rmse * std::sqrt(static_cast<double>(m)))
                : 0.0;
        stats.coverage = static_cast<double>(hits) / static_cast<double>(m);
        stats.coverage_mc_se =
            std::sqrt(stats.coverage * (1.0 - stats.coverage) /
                      static_cast<double>(m));
      }
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

std::string format_study_table(const StudyReport& report) {
  const std::size_t p = report.config.fit_order;
  const auto cell_text = [](double value, double se) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f (%.3f)", value, se);
    return std::string(buf);
  };

  std::ostringstream os;
  os << std::left << std::setw(16) << "case" << std::setw(24) << "prior";
  for (std::size_t l = 0; l < p; ++l)
    os << std::right << std::setw(16) << ("rmse" + std::to_string(l + 1));
  for (std::size_t l = 0; l < p; ++l)
    os << std::right << std::setw(16) << ("cover" + std::to_string(l + 1));
  os << '\n';

  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    const std::string case_label = report.config.cases[c].label.empty()
                                       ? "case " + std::to_string(c + 1)
                                       : report.config.cases[c].label;
    for (std::size_t q = 0; q < report.cells[c].size(); ++q) {
      os << std::left << std::setw(16) << case_label << std::setw(24)
         << prior_label(report.config.priors[q].pacf_prior);
      const CellStats& cell = report.cells[c][q];
      for (const LagStats& s : cell.lags)
        os << std::right << std::setw(16) << cell_text(s.rmse, s.rmse_mc_se);
      for (const LagStats& s : cell.lags)
        os << std::right << std::setw(16) << cell_text(s.coverage, s.coverage_mc_se);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace pcar
