#pragma once

#include <string>
#include <vector>

#include "stabsim/functionals.hpp"
#include "stabsim/stats.hpp"

namespace stabsim {

enum class ProcessKind { Poisson, Binomial };

struct ExperimentSpec {
  std::string functional_id;
  FunctionalParams params;
  ProcessKind process = ProcessKind::Poisson;
  Space space = Space::unit_cube(2);
  std::vector<double> sizes;  // intensities (Poisson) or counts (binomial)
  int replications = 2000;
  std::uint64_t seed = 1;
  MarkDistribution marks = MarkDistribution::dirac();
  int threads = 1;
  // delta for the DKW noise floor reported next to each dK estimate
  double dkw_delta = 0.05;
};

struct SummaryRow {
  double size = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double central4 = 0.0;
  double dk_emp = 0.0;
  double dw_emp = 0.0;
  double dkw_floor = 0.0;
  double runtime_sec = 0.0;
};

struct RateReport {
  ExperimentSpec spec;
  std::vector<SummaryRow> rows;
  RateFit var_slope;
  RateFit dk_slope;    // fitted on rows with dK >= 2x the DKW floor
  RateFit mean_slope;  // fitted only when all means are positive
  bool var_fit_ok = false;
  bool dk_fit_ok = false;
  bool mean_fit_ok = false;
};

// R independent replications of the statistic per grid size; every
// replication is keyed by (size index, rep index) so the report is
// bit-identical for any thread count.
RateReport run_experiment(const ExperimentSpec& spec);

// raw replication values for one grid size (used by distribution checks)
std::vector<double> replicate_statistic(const ExperimentSpec& spec,
                                        std::size_t size_index);

}  // namespace stabsim
