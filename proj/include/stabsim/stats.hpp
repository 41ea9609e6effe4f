#pragma once

#include <cstddef>
#include <vector>

namespace stabsim {

// Phi(z), absolute error below 1e-12
double normal_cdf(double z);

// inverse of normal_cdf, refined to ~1e-14
double normal_quantile(double p);

// one-sample Kolmogorov-Smirnov statistic of standardized samples vs Phi.
// standardize=true rescales by the empirical mean/sd first.
double kolmogorov_distance(std::vector<double> samples, bool standardize = true);

// empirical W1 distance to the standard normal via quantile coupling
double wasserstein_distance(std::vector<double> samples, bool standardize = true);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double central4 = 0.0;
  std::size_t n = 0;
};

Moments summarize(const std::vector<double>& samples);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r2 = 0.0;
};

// OLS of log(value) on log(size); values must be positive
RateFit rate_fit(const std::vector<double>& sizes,
                 const std::vector<double>& values);

}  // namespace stabsim
