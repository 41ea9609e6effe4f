#include "stabsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stabsim {

double normal_cdf(double z) {
  // std::erfc is correctly rounded to ~1 ulp, far inside the 1e-12 budget
  return 0.5 * std::erfc(-z * M_SQRT1_2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("quantile needs p in (0,1)");
  // Acklam-style rational initial guess
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00, 2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= phigh) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  // two Halley refinements against the high-accuracy cdf
  for (int it = 0; it < 2; ++it) {
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
    x = x - u / (1 + x * u / 2);
  }
  return x;
}

namespace {

void standardize_inplace(std::vector<double>& s) {
  Moments m = summarize(s);
  if (m.variance <= 0.0)
    throw std::invalid_argument("zero sample variance");
  double sd = std::sqrt(m.variance);
  for (double& v : s) v = (v - m.mean) / sd;
}

}  // namespace

double kolmogorov_distance(std::vector<double> samples, bool standardize) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  if (standardize) standardize_inplace(samples);
  std::sort(samples.begin(), samples.end());
  double n = static_cast<double>(samples.size());
  double dk = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = normal_cdf(samples[i]);
    dk = std::max(dk, std::abs((i + 1) / n - f));
    dk = std::max(dk, std::abs(i / n - f));
  }
  return dk;
}

double wasserstein_distance(std::vector<double> samples, bool standardize) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  if (standardize) standardize_inplace(samples);
  std::sort(samples.begin(), samples.end());
  double n = static_cast<double>(samples.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    acc += std::abs(samples[i] - normal_quantile((i + 0.5) / n));
  return acc / n;
}

Moments summarize(const std::vector<double>& samples) {
  Moments m;
  m.n = samples.size();
  if (m.n == 0) return m;
  double s = 0.0;
  for (double v : samples) s += v;
  m.mean = s / m.n;
  double s2 = 0.0, s4 = 0.0;
  for (double v : samples) {
    double d = v - m.mean;
    s2 += d * d;
    s4 += d * d * d * d;
  }
  m.variance = m.n > 1 ? s2 / (m.n - 1) : 0.0;
  m.central4 = s4 / m.n;
  return m;
}

RateFit rate_fit(const std::vector<double>& sizes,
                 const std::vector<double>& values) {
  if (sizes.size() != values.size() || sizes.size() < 2)
    throw std::invalid_argument("need >= 2 points");
  std::size_t n = sizes.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (sizes[i] <= 0 || values[i] <= 0)
      throw std::invalid_argument("rate_fit needs positive data");
    x[i] = std::log(sizes[i]);
    y[i] = std::log(values[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = y[i] - (f.intercept + f.slope * x[i]);
    sse += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  f.stderr_slope = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  return f;
}

}  // namespace stabsim
