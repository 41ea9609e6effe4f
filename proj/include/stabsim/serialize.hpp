#pragma once

#include <string>

#include <json.hpp>

#include "stabsim/experiments.hpp"
#include "stabsim/stabilization.hpp"
#include "stabsim/stein.hpp"

namespace stabsim {

using nlohmann::json;

json space_to_json(const Space& space);
// rejects unknown keys and invalid kind/k_spec combinations
Space space_from_json(const json& j);

json marks_to_json(const MarkDistribution& m);
MarkDistribution marks_from_json(const json& j);

json experiment_spec_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_spec_from_json(const json& j);

json rate_fit_to_json(const RateFit& f);
json rate_report_to_json(const RateReport& r);
std::string rate_report_to_csv(const RateReport& r);

json tail_fit_to_json(const TailFit& f);
json identity_report_to_json(const IdentityReport& r);
json vanishing_report_to_json(const VanishingReport& r);
json growth_report_to_json(const GrowthReport& r);
json stein_estimate_to_json(const SteinEstimate& e);
json fourth_moment_report_to_json(const FourthMomentReport& r);

// acceptance predicate attached to a run config: named report field must
// land inside [min, max]
struct Predicate {
  std::string field;
  double min = -1e300;
  double max = 1e300;
};

struct RunConfig {
  ExperimentSpec spec;
  std::vector<Predicate> predicates;
  std::string out_json;  // empty = stdout only
  std::string out_csv;
  std::string out_svg;
};

// full schema validation: unknown keys anywhere are an error
RunConfig run_config_from_json(const json& j);
json run_config_to_json(const RunConfig& c);

// evaluates the declared predicates against a finished report;
// returns the list of failures (empty = pass)
std::vector<std::string> check_predicates(const RunConfig& c,
                                          const RateReport& r);

// self-contained log-log scatter with the fitted line
std::string svg_loglog_plot(const std::vector<double>& x,
                            const std::vector<double>& y, const RateFit& fit,
                            const std::string& title);

}  // namespace stabsim
