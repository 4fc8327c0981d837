#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pcar/calibrate.hpp"
#include "pcar/csv.hpp"
#include "pcar/errors.hpp"
#include "pcar/inference.hpp"
#include "pcar/priors.hpp"
#include "pcar/process.hpp"
#include "pcar/report_io.hpp"
#include "pcar/rng.hpp"
#include "pcar/study.hpp"

namespace {

namespace fs = std::filesystem;

// Files registered here are deleted if the command unwinds before
// release(); a failed command must not leave partial outputs behind.
class OutputGuard {
 public:
  ~OutputGuard() {
    if (released_) return;
    for (const fs::path& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
  const fs::path& add(fs::path p) { return paths_.emplace_back(std::move(p)); }
  void release() { released_ = true; }

 private:
  std::vector<fs::path> paths_;
  bool released_ = false;
};

std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start);
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(what),
                                 "cannot parse \"" + item + "\" as a number");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty())
    throw CLI::ValidationError(std::string(what), "empty list");
  return out;
}

std::size_t as_index(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9)
    throw CLI::ValidationError(std::string(what),
                               "expected a positive integer, got " +
                                   std::to_string(v));
  return static_cast<std::size_t>(v);
}

void print_parameter_table(const std::vector<pcar::ParameterSummary>& summary) {
  std::cout << std::left << std::setw(8) << "param" << std::right
            << std::setw(12) << "mean" << std::setw(12) << "median"
            << std::setw(12) << "sd" << std::setw(12) << "ess" << std::setw(12)
            << "hpd_lo" << std::setw(12) << "hpd_hi" << '\n';
  std::cout << std::fixed << std::setprecision(4);
  for (const auto& ps : summary)
    std::cout << std::left << std::setw(8) << ps.name << std::right
              << std::setw(12) << ps.mean << std::setw(12) << ps.median
              << std::setw(12) << ps.sd << std::setw(12) << ps.ess
              << std::setw(12) << ps.hpd_lo << std::setw(12) << ps.hpd_hi
              << '\n';
  std::cout.unsetf(std::ios::fixed);
  std::cout << std::setprecision(6);
}

// Grid nodes uniform in each family's natural scale, so the emitted
// (value, pdf) table integrates accurately by the trapezoid rule despite
// the boundary spikes of the densities.
void run_prior_grid(const std::string& family, double rate, std::size_t n_points,
                    const fs::path& out_path) {
  if (n_points < 2) throw CLI::ValidationError("--grid", "need at least 2 points");
  std::vector<std::vector<double>> rows;
  rows.reserve(n_points);
  std::vector<std::string> header{"phi", "pdf"};

  const double s_cap = std::sqrt(-std::log1p(-pcar::kPacfLimit * pcar::kPacfLimit));
  if (family == "base0") {
    const double s_max = std::min(std::log(1e4) / rate, s_cap);
    for (std::size_t i = 0; i < n_points; ++i) {
      const double s = -s_max + 2.0 * s_max * static_cast<double>(i) /
                                    static_cast<double>(n_points - 1);
      const double mag =
          std::min(std::sqrt(-std::expm1(-s * s)), pcar::kPacfLimit);
      const double phi = s < 0 ? -mag : mag;
      rows.push_back({phi, std::exp(pcar::base0_logpdf(phi, rate))});
    }
  } else if (family == "base1") {
    const double u_min = 1e-4;
    const double u_max = std::sqrt(2.0 - 1e-12);
    for (std::size_t i = 0; i < n_points; ++i) {
      const double u = u_max - (u_max - u_min) * static_cast<double>(i) /
                                   static_cast<double>(n_points - 1);
      const double phi = 1.0 - u * u;
      rows.push_back({phi, std::exp(pcar::base1_logpdf(phi, rate))});
    }
  } else if (family == "reference") {
    const double t_min = 1e-4;
    for (std::size_t i = 0; i < n_points; ++i) {
      const double t = t_min + (1.0 - 2.0 * t_min) * static_cast<double>(i) /
                                   static_cast<double>(n_points - 1);
      const double phi = std::sin(std::numbers::pi * (t - 0.5));
      rows.push_back({phi, std::exp(pcar::reference_ar1_logpdf(phi))});
    }
  } else {  // gumbel2 over the precision
    header[0] = "tau";
    const double s_min = 1e-4 / rate;
    const double s_max = std::log(1e4) / rate;
    for (std::size_t i = 0; i < n_points; ++i) {
      const double s = s_min + (s_max - s_min) * static_cast<double>(i) /
                                   static_cast<double>(n_points - 1);
      const double tau = 1.0 / (s * s);
      rows.push_back({tau, std::exp(pcar::gumbel2_logpdf(tau, rate))});
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
  }
  pcar::write_table_csv(out_path, header, rows);
}

void run_prior_samples(const std::string& family, double rate, std::size_t count,
                       std::uint64_t seed, const fs::path& out_path) {
  if (count == 0) throw CLI::ValidationError("--samples", "need at least 1 draw");
  pcar::Rng rng = pcar::make_rng(seed);
  std::vector<std::vector<double>> rows;
  rows.reserve(count);
  if (family == "base0") {
    for (std::size_t i = 0; i < count; ++i)
      rows.push_back({pcar::base0_sample(rate, rng)});
  } else if (family == "base1") {
    for (std::size_t i = 0; i < count; ++i)
      rows.push_back({pcar::base1_sample(rate, rng)});
  } else if (family == "reference") {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = 0; i < count; ++i)
      rows.push_back({std::sin(std::numbers::pi * (unif(rng) - 0.5))});
  } else {  // gumbel2: 1/sqrt(tau) is exponential
    std::exponential_distribution<double> exp_dist(rate);
    for (std::size_t i = 0; i < count; ++i) {
      const double s = std::max(exp_dist(rng), 1e-12);
      rows.push_back({1.0 / (s * s)});
    }
  }
  pcar::write_table_csv(out_path, {"value"}, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Shrinkage priors for stationary AR(p): rate calibration, prior "
      "evaluation and sampling, exact-likelihood posterior fits, and "
      "replication studies"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string config_path;
  std::string out_dir = ".";
  auto* seed_opt = app.add_option("--seed", seed, "Master RNG seed");
  auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads for studies");
  app.add_option("--config", config_path, "Run configuration document (JSON)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (default: current)");

  const auto load_config = [&]() -> pcar::RunConfig {
    if (config_path.empty()) return {};
    return pcar::load_run_config(config_path);
  };
  const auto out_path = [&](const char* name) {
    fs::create_directories(out_dir);
    return fs::path(out_dir) / name;
  };

  // calibrate ---------------------------------------------------------
  auto* cal = app.add_subcommand(
      "calibrate", "Solve prior rates from a tail statement or a shrinkage schedule");
  cal->fallthrough();
  std::string tail_arg;
  std::string schedule_arg;
  int base_model = 0;
  cal->add_option("--tail", tail_arg, "U,alpha : prior mass alpha beyond U");
  cal->add_option("--base", base_model, "Base model: 0 white noise, 1 unit root")
      ->check(CLI::Range(0, 1));
  cal->add_option("--schedule", schedule_arg,
                  "a,b,p : expected-shrinkage targets 1-(1-a)b^(k-1)");
  cal->callback([&] {
    if (schedule_arg.empty() == tail_arg.empty())
      throw CLI::ValidationError("calibrate",
                                 "need exactly one of --tail or --schedule");
    std::cout << std::setprecision(6) << std::fixed;
    if (!schedule_arg.empty()) {
      const auto v = parse_number_list(schedule_arg, "--schedule");
      if (v.size() != 3)
        throw CLI::ValidationError("--schedule", "expected a,b,p");
      const std::size_t p = as_index(v[2], "--schedule");
      const pcar::ShrinkageSchedule sched{v[0], v[1]};
      const std::vector<double> thetas = pcar::theta_schedule(sched, p);
      for (std::size_t k = 0; k < p; ++k) {
        const double target = 1.0 - (1.0 - sched.a) * std::pow(sched.b, k);
        const double residual = pcar::expected_shrinkage(thetas[k]) - target;
        std::cout << "theta[" << k + 1 << "] " << thetas[k] << "  target "
                  << target << "  residual " << std::scientific << residual
                  << std::fixed << '\n';
      }
    } else {
      const auto v = parse_number_list(tail_arg, "--tail");
      if (v.size() != 2) throw CLI::ValidationError("--tail", "expected U,alpha");
      const pcar::TailStatement ts{v[0], v[1]};
      double theta = 0.0;
      double residual = 0.0;
      if (base_model == 0) {
        theta = pcar::theta_from_tail_base0(ts);
        const double s_u = std::sqrt(-std::log1p(-ts.U * ts.U));
        residual = std::exp(-theta * s_u) - ts.alpha;
      } else {
        theta = pcar::theta_from_tail_base1(ts);
        const double u = std::sqrt(1.0 - ts.U);
        residual = -std::expm1(-theta * u) /
                       -std::expm1(-std::numbers::sqrt2 * theta) -
                   ts.alpha;
      }
      std::cout << "theta " << theta << "  residual " << std::scientific
                << residual << std::fixed << '\n';
    }
  });

  // prior -------------------------------------------------------------
  auto* pri = app.add_subcommand("prior",
                                 "Tabulate a prior density on a grid or draw samples");
  pri->fallthrough();
  std::string family;
  double rate = 1.0;
  std::size_t grid_points = 0;
  std::size_t sample_count = 0;
  pri->add_option("--family", family, "base0 | base1 | gumbel2 | reference")
      ->required()
      ->check(CLI::IsMember({"base0", "base1", "gumbel2", "reference"}));
  pri->add_option("--rate", rate, "Rate (theta or lambda); ignored for reference");
  pri->add_option("--grid", grid_points, "Write a (value, pdf) grid of this size");
  pri->add_option("--samples", sample_count, "Write this many draws");
  pri->callback([&] {
    if ((grid_points == 0) == (sample_count == 0))
      throw CLI::ValidationError("prior", "need exactly one of --grid or --samples");
    if (family != "reference" && !(rate > 0.0))
      throw CLI::ValidationError("--rate", "rate must be positive");
    OutputGuard guard;
    if (grid_points > 0) {
      const fs::path path = guard.add(out_path("prior_grid.csv"));
      run_prior_grid(family, rate, grid_points, path);
      std::cout << "wrote " << path.string() << '\n';
    } else {
      const fs::path path = guard.add(out_path("prior_samples.csv"));
      run_prior_samples(family, rate, sample_count, seed, path);
      std::cout << "wrote " << path.string() << '\n';
    }
    guard.release();
  });

  // simulate ----------------------------------------------------------
  auto* sim = app.add_subcommand("simulate",
                                 "Draw one stationary series and write it as CSV");
  sim->fallthrough();
  std::string pacf_arg;
  double sim_tau = 1.0;
  std::size_t sim_n = 0;
  sim->add_option("--pacf", pacf_arg, "Partial autocorrelations psi1,psi2,...")
      ->required();
  sim->add_option("--tau", sim_tau, "Marginal precision (default 1)");
  sim->add_option("--n", sim_n, "Series length")->required();
  sim->callback([&] {
    const auto psi = parse_number_list(pacf_arg, "--pacf");
    const pcar::ArProcessSpec spec(pcar::Pacf(psi), sim_tau);
    const pcar::TimeSeries x = pcar::simulate(spec, sim_n, seed);
    OutputGuard guard;
    const fs::path path = guard.add(out_path("series.csv"));
    pcar::write_series_csv(path, x);
    guard.release();
    std::cout << "wrote " << path.string() << '\n';
  });

  // fit ---------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "Posterior sampling for an observed series");
  fit->fallthrough();
  std::string input_path;
  std::size_t fit_order = 1;
  bool emit_draws = false;
  fit->add_option("--input", input_path, "Single-column CSV series")
      ->required()
      ->check(CLI::ExistingFile);
  fit->add_option("--order", fit_order, "AR order p")->required();
  fit->add_flag("--draws", emit_draws, "Also write raw draws as CSV");
  fit->callback([&] {
    const pcar::TimeSeries x = pcar::read_series_csv(input_path);
    const pcar::RunConfig rc = load_config();

    pcar::PriorConfig prior;
    if (rc.has_prior) {
      prior = rc.prior;
    } else {
      prior.pacf_prior = pcar::SequentialPcPrior{
          pcar::theta_schedule(pcar::ShrinkageSchedule{0.5, 0.5}, fit_order)};
      prior.precision_prior = pcar::Gumbel2PrecisionPrior{};
    }
    pcar::McmcConfig mc = rc.has_mcmc ? rc.mcmc : pcar::McmcConfig{};
    if (seed_opt->count() > 0 || !rc.has_mcmc) mc.seed = seed;

    const pcar::PosteriorSamples samples = pcar::fit_ar(x, fit_order, prior, mc);
    const auto summary = pcar::posterior_summary(samples);

    OutputGuard guard;
    const fs::path summary_path = guard.add(out_path("fit_summary.json"));
    {
      std::ofstream out(summary_path);
      out << pcar::fit_summary_document(prior, mc, samples, summary);
      if (!out) throw std::runtime_error("failed writing " + summary_path.string());
    }
    if (emit_draws) {
      std::vector<std::string> header;
      for (std::size_t k = 0; k < samples.order(); ++k)
        header.push_back("psi" + std::to_string(k + 1));
      if (samples.tau_sampled) header.push_back("tau");
      std::vector<std::vector<double>> rows(samples.draw_count());
      for (std::size_t t = 0; t < samples.draw_count(); ++t) {
        auto& row = rows[t];
        for (std::size_t k = 0; k < samples.order(); ++k)
          row.push_back(samples.psi_draws(static_cast<Eigen::Index>(t),
                                          static_cast<Eigen::Index>(k)));
        if (samples.tau_sampled)
          row.push_back(samples.tau_draws(static_cast<Eigen::Index>(t)));
      }
      const fs::path draws_path = guard.add(out_path("fit_draws.csv"));
      pcar::write_table_csv(draws_path, header, rows);
      std::cout << "wrote " << draws_path.string() << '\n';
    }
    guard.release();
    print_parameter_table(summary);
    std::cout << "wrote " << summary_path.string() << '\n';
  });

  // study -------------------------------------------------------------
  auto* stu = app.add_subcommand("study",
                                 "Simulate-and-refit replication study from a config");
  stu->fallthrough();
  std::size_t override_reps = 0;
  stu->add_option("--replications", override_reps,
                  "Override the configured replication count");
  stu->callback([&] {
    const pcar::RunConfig rc = load_config();
    if (!rc.has_study)
      throw CLI::ValidationError("study", "--config with a \"study\" section is required");
    pcar::StudyConfig sc = rc.study;
    if (seed_opt->count() > 0) sc.master_seed = seed;
    if (jobs_opt->count() > 0) sc.jobs = jobs;
    if (override_reps > 0) sc.replications = override_reps;

    const pcar::StudyReport report = pcar::run_study(sc);
    const std::string table = pcar::format_study_table(report);

    OutputGuard guard;
    const fs::path table_path = guard.add(out_path("study_table.txt"));
    {
      std::ofstream out(table_path);
      out << table;
      if (!out) throw std::runtime_error("failed writing " + table_path.string());
    }
    const fs::path report_path = guard.add(out_path("study_report.json"));
    {
      std::ofstream out(report_path);
      out << pcar::study_report_document(report);
      if (!out) throw std::runtime_error("failed writing " + report_path.string());
    }
    guard.release();
    std::cout << table;
    std::cout << "wrote " << table_path.string() << '\n'
              << "wrote " << report_path.string() << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const pcar::calibration_infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
