#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pcar/inference.hpp"
#include "pcar/study.hpp"

namespace pcar {

/// Declarative run document: prior + sampler settings for a single fit and
/// a full study description.  Flags record which sections the document
/// actually carried.
struct RunConfig {
  PriorConfig prior;
  McmcConfig mcmc;
  StudyConfig study;
  bool has_prior = false;
  bool has_mcmc = false;
  bool has_study = false;
};

/// Parse and schema-check a run document.  Unknown keys anywhere are an
/// error; a "version" field is required.
RunConfig parse_run_config(const std::string& json_text);

RunConfig load_run_config(const std::filesystem::path& path);

/// Self-contained fit report: configuration echo, acceptance rates, and
/// per-parameter summaries.  Versioned key-value document.
std::string fit_summary_document(const PriorConfig& prior, const McmcConfig& mcmc,
                                 const PosteriorSamples& samples,
                                 const std::vector<ParameterSummary>& summary);

/// Versioned machine-readable form of a study report, config echo included.
std::string study_report_document(const StudyReport& report);

}  // namespace pcar
