#include "pcar/report_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace pcar {

namespace {

using nlohmann::json;

constexpr int kDocumentVersion = 1;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("config " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) {
        known = true;
        break;
      }
    if (!known) fail(where, "unknown key \"" + key + "\"");
  }
}

double get_number(const json& obj, const std::string& where, const char* key,
                  double fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) fail(where, std::string("missing key \"") + key + "\"");
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& obj, const std::string& where, const char* key,
                        std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<double>() < 0))
    fail(where + "." + key, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& where, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_number_array(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number()) fail(where, "expected numbers only");
    out.push_back(e.get<double>());
  }
  return out;
}

PacfPrior parse_pacf_prior(const json& obj, const std::string& where) {
  check_keys(obj, where, {"family", "thetas", "theta"});
  const std::string family = get_string(obj, where, "family", "");
  if (family == "sequential-pc") {
    if (!obj.contains("thetas")) fail(where, "sequential-pc needs \"thetas\"");
    return SequentialPcPrior{get_number_array(obj.at("thetas"), where + ".thetas")};
  }
  if (family == "approximate-reference") return ApproximateReferencePrior{};
  if (family == "ar1-base1")
    return Ar1Base1Prior{get_number(obj, where, "theta", 1.0, true)};
  if (family == "flat-z") return FlatZPrior{};
  fail(where, "unknown pacf prior family \"" + family + "\"");
}

PrecisionPrior parse_precision_prior(const json& obj, const std::string& where) {
  check_keys(obj, where, {"family", "lambda", "tau"});
  const std::string family = get_string(obj, where, "family", "");
  if (family == "gumbel2") {
    Gumbel2PrecisionPrior g;
    g.lambda = get_number(obj, where, "lambda", g.lambda);
    return g;
  }
  if (family == "fixed")
    return FixedPrecision{get_number(obj, where, "tau", 1.0, true)};
  fail(where, "unknown precision prior family \"" + family + "\"");
}

PriorConfig parse_prior_config(const json& obj, const std::string& where) {
  check_keys(obj, where, {"pacf", "precision"});
  PriorConfig cfg;
  if (obj.contains("pacf")) cfg.pacf_prior = parse_pacf_prior(obj.at("pacf"), where + ".pacf");
  if (obj.contains("precision"))
    cfg.precision_prior = parse_precision_prior(obj.at("precision"), where + ".precision");
  return cfg;
}

McmcConfig parse_mcmc(const json& obj, const std::string& where) {
  check_keys(obj, where, {"iterations", "burn_in", "thin", "seed", "adapt_target"});
  McmcConfig cfg;
  cfg.iterations = get_count(obj, where, "iterations", cfg.iterations);
  cfg.burn_in = get_count(obj, where, "burn_in", cfg.burn_in);
  cfg.thin = get_count(obj, where, "thin", cfg.thin);
  cfg.seed = get_count(obj, where, "seed", cfg.seed);
  cfg.adapt_target = get_number(obj, where, "adapt_target", cfg.adapt_target);
  return cfg;
}

StudyCase parse_case(const json& obj, const std::string& where) {
  check_keys(obj, where, {"pacf", "tau", "n", "label"});
  if (!obj.contains("pacf")) fail(where, "missing key \"pacf\"");
  StudyCase cs{Pacf(get_number_array(obj.at("pacf"), where + ".pacf")), 1.0, 50, ""};
  cs.true_tau = get_number(obj, where, "tau", cs.true_tau);
  cs.n = get_count(obj, where, "n", cs.n);
  cs.label = get_string(obj, where, "label", "");
  return cs;
}

StudyConfig parse_study(const json& obj, const std::string& where,
                        const McmcConfig& mcmc) {
  check_keys(obj, where,
             {"cases", "replications", "fit_order", "priors", "estimator",
              "hpd_prob", "master_seed", "jobs"});
  StudyConfig cfg;
  cfg.mcmc = mcmc;
  if (!obj.contains("cases")) fail(where, "missing key \"cases\"");
  if (!obj.at("cases").is_array() || obj.at("cases").empty())
    fail(where + ".cases", "expected a non-empty array");
  std::size_t idx = 0;
  for (const json& c : obj.at("cases"))
    cfg.cases.push_back(parse_case(c, where + ".cases[" + std::to_string(idx++) + "]"));

  cfg.replications = get_count(obj, where, "replications", cfg.replications);
  cfg.fit_order = get_count(obj, where, "fit_order", cfg.fit_order);
  cfg.hpd_prob = get_number(obj, where, "hpd_prob", cfg.hpd_prob);
  cfg.master_seed = get_count(obj, where, "master_seed", cfg.master_seed);
  cfg.jobs = get_count(obj, where, "jobs", cfg.jobs);

  const std::string estimator = get_string(obj, where, "estimator", "mean");
  if (estimator == "mean") cfg.estimator = PointEstimator::mean;
  else if (estimator == "median") cfg.estimator = PointEstimator::median;
  else fail(where + ".estimator", "expected \"mean\" or \"median\"");

  if (!obj.contains("priors")) fail(where, "missing key \"priors\"");
  if (!obj.at("priors").is_array() || obj.at("priors").empty())
    fail(where + ".priors", "expected a non-empty array");
  idx = 0;
  for (const json& pr : obj.at("priors"))
    cfg.priors.push_back(
        parse_prior_config(pr, where + ".priors[" + std::to_string(idx++) + "]"));
  return cfg;
}

json pacf_prior_json(const PacfPrior& prior) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SequentialPcPrior>)
          return {{"family", "sequential-pc"}, {"thetas", p.thetas}};
        else if constexpr (std::is_same_v<T, ApproximateReferencePrior>)
          return {{"family", "approximate-reference"}};
        else if constexpr (std::is_same_v<T, Ar1Base1Prior>)
          return {{"family", "ar1-base1"}, {"theta", p.theta}};
        else
          return {{"family", "flat-z"}};
      },
      prior);
}

json precision_prior_json(const PrecisionPrior& prior) {
  if (const auto* g = std::get_if<Gumbel2PrecisionPrior>(&prior))
    return {{"family", "gumbel2"}, {"lambda", g->lambda}};
  return {{"family", "fixed"}, {"tau", std::get<FixedPrecision>(prior).tau}};
}

json prior_config_json(const PriorConfig& cfg) {
  return {{"pacf", pacf_prior_json(cfg.pacf_prior)},
          {"precision", precision_prior_json(cfg.precision_prior)}};
}

json mcmc_json(const McmcConfig& cfg) {
  return {{"iterations", cfg.iterations},
          {"burn_in", cfg.burn_in},
          {"thin", cfg.thin},
          {"seed", cfg.seed},
          {"adapt_target", cfg.adapt_target}};
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json doc = json::parse(json_text, nullptr, true, true);  // allow comments
  check_keys(doc, "document", {"version", "prior", "mcmc", "study"});
  if (!doc.contains("version")) fail("document", "missing key \"version\"");
  if (!doc.at("version").is_number_integer() ||
      doc.at("version").get<int>() != kDocumentVersion)
    fail("document.version", "unsupported version");

  RunConfig cfg;
  if (doc.contains("mcmc")) {
    cfg.mcmc = parse_mcmc(doc.at("mcmc"), "mcmc");
    cfg.has_mcmc = true;
  }
  if (doc.contains("prior")) {
    cfg.prior = parse_prior_config(doc.at("prior"), "prior");
    cfg.has_prior = true;
  }
  if (doc.contains("study")) {
    cfg.study = parse_study(doc.at("study"), "study", cfg.mcmc);
    cfg.has_study = true;
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return parse_run_config(text);
}

std::string fit_summary_document(const PriorConfig& prior, const McmcConfig& mcmc,
                                 const PosteriorSamples& samples,
                                 const std::vector<ParameterSummary>& summary) {
  json params = json::array();
  for (const ParameterSummary& ps : summary)
    params.push_back({{"name", ps.name},
                      {"mean", ps.mean},
                      {"median", ps.median},
                      {"sd", ps.sd},
                      {"ess", ps.ess},
                      {"hpd", {ps.hpd_lo, ps.hpd_hi}}});
  const json doc = {{"version", kDocumentVersion},
                    {"kind", "fit-summary"},
                    {"prior", prior_config_json(prior)},
                    {"mcmc", mcmc_json(mcmc)},
                    {"draws", samples.draw_count()},
                    {"acceptance_rates", samples.acceptance_rates},
                    {"parameters", params}};
  return doc.dump(2) + "\n";
}

std::string study_report_document(const StudyReport& report) {
  const StudyConfig& cfg = report.config;

  json cases = json::array();
  for (const StudyCase& cs : cfg.cases)
    cases.push_back({{"pacf", cs.true_pacf.values()},
                     {"tau", cs.true_tau},
                     {"n", cs.n},
                     {"label", cs.label}});
  json priors = json::array();
  for (const PriorConfig& pr : cfg.priors) priors.push_back(prior_config_json(pr));

  const json config = {
      {"cases", cases},
      {"priors", priors},
      {"replications", cfg.replications},
      {"fit_order", cfg.fit_order},
      {"estimator", cfg.estimator == PointEstimator::mean ? "mean" : "median"},
      {"hpd_prob", cfg.hpd_prob},
      {"master_seed", cfg.master_seed},
      {"jobs", cfg.jobs},
      {"mcmc", mcmc_json(cfg.mcmc)}};

  json results = json::array();
  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    for (std::size_t q = 0; q < report.cells[c].size(); ++q) {
      json lags = json::array();
      const CellStats& cell = report.cells[c][q];
      for (std::size_t l = 0; l < cell.lags.size(); ++l) {
        const LagStats& s = cell.lags[l];
        lags.push_back({{"lag", l + 1},
                        {"rmse", s.rmse},
                        {"rmse_mc_se", s.rmse_mc_se},
                        {"coverage", s.coverage},
                        {"coverage_mc_se", s.coverage_mc_se}});
      }
      results.push_back({{"case", c + 1},
                         {"label", cfg.cases[c].label},
                         {"prior", prior_label(cfg.priors[q].pacf_prior)},
                         {"lags", lags}});
    }
  }

  const json doc = {{"version", kDocumentVersion},
                    {"kind", "study-report"},
                    {"config", config},
                    {"results", results},
                    {"wall_seconds", report.wall_seconds}};
  return doc.dump(2) + "\n";
}

}  // namespace pcar
