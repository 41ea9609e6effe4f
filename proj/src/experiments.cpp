#include "stabsim/experiments.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "stabsim/parallel.hpp"

namespace stabsim {

namespace {

std::uint64_t work_stream(std::size_t size_index, std::size_t rep) {
  return (static_cast<std::uint64_t>(size_index) << 32) |
         static_cast<std::uint64_t>(rep);
}

void validate(const ExperimentSpec& spec) {
  if (spec.sizes.size() < 1)
    throw std::invalid_argument("empty size grid");
  for (std::size_t i = 0; i + 1 < spec.sizes.size(); ++i)
    if (!(spec.sizes[i] < spec.sizes[i + 1]))
      throw std::invalid_argument("size grid must be strictly increasing");
  if (spec.replications < 2)
    throw std::invalid_argument("need at least 2 replications");
}

}  // namespace

std::vector<double> replicate_statistic(const ExperimentSpec& spec,
                                        std::size_t size_index) {
  validate(spec);
  if (size_index >= spec.sizes.size())
    throw std::invalid_argument("size index out of range");
  double size = spec.sizes[size_index];
  FunctionalParams params = spec.params;
  params.scale = size;
  auto fam = make_functional(spec.functional_id, params, spec.space);

  std::vector<double> values(spec.replications);
  parallel_for(values.size(), spec.threads, [&](std::size_t rep) {
    RandomStream rng(spec.seed, work_stream(size_index, rep));
    Configuration c =
        spec.process == ProcessKind::Poisson
            ? sample_poisson(spec.space, size, spec.marks, rng)
            : sample_binomial(spec.space,
                              static_cast<std::size_t>(std::llround(size)),
                              spec.marks, rng);
    values[rep] = fam->total(c);
  });
  return values;
}

RateReport run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  RateReport report;
  report.spec = spec;

  for (std::size_t si = 0; si < spec.sizes.size(); ++si) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> values = replicate_statistic(spec, si);
    Moments mo = summarize(values);
    SummaryRow row;
    row.size = spec.sizes[si];
    row.mean = mo.mean;
    row.variance = mo.variance;
    row.central4 = mo.central4;
    row.dkw_floor =
        std::sqrt(std::log(2.0 / spec.dkw_delta) / (2.0 * spec.replications));
    if (mo.variance > 0) {
      row.dk_emp = kolmogorov_distance(values, true);
      row.dw_emp = wasserstein_distance(values, true);
    }
    row.runtime_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report.rows.push_back(row);
  }

  std::vector<double> sizes, vars, dks, dk_sizes, means;
  bool means_positive = true;
  for (const SummaryRow& r : report.rows) {
    sizes.push_back(r.size);
    vars.push_back(r.variance);
    means.push_back(r.mean);
    if (r.mean <= 0) means_positive = false;
    if (r.dk_emp >= 2.0 * r.dkw_floor) {
      dk_sizes.push_back(r.size);
      dks.push_back(r.dk_emp);
    }
  }
  try {
    report.var_slope = rate_fit(sizes, vars);
    report.var_fit_ok = true;
  } catch (const std::exception&) {
  }
  if (dks.size() >= 2) {
    report.dk_slope = rate_fit(dk_sizes, dks);
    report.dk_fit_ok = true;
  }
  if (means_positive && sizes.size() >= 2) {
    report.mean_slope = rate_fit(sizes, means);
    report.mean_fit_ok = true;
  }
  return report;
}

}  // namespace stabsim
