#pragma once

#include <functional>

#include "stabsim/functionals.hpp"

namespace stabsim {

using TotalFn = std::function<double(const Configuration&)>;

// add-one-point increment f(M u {x}) - f(M)
double diff1(const TotalFn& f, const Configuration& config,
             const MarkedPoint& x);

// second-order difference, symmetric in (x1, x2)
double diff2(const TotalFn& f, const Configuration& config,
             const MarkedPoint& x1, const MarkedPoint& x2);

struct IdentityReport {
  double max_rel_residual_first = 0.0;
  double max_rel_residual_second = 0.0;
  int trials = 0;
  bool pass = false;  // both residuals <= 1e-9
};

// Verifies on random configurations (n <= 30) that the difference of the
// total splits into the inserted point's score plus score differences,
// to first and second order.
IdentityReport score_sum_identity_check(const ScoreFunctional& fam,
                                        const Space& space, int trials,
                                        std::uint64_t seed,
                                        const MarkDistribution& marks =
                                            MarkDistribution::dirac());

// 3 x distance from config[i] to its k-th nearest neighbor
double knn_radius(const Space& space, const Configuration& config,
                  std::size_t i, int k);
double knn_radius_at(const Space& space, const Configuration& others,
                     const Point& x, int k);

// Stabilization radius of the truncated hull scores on the unit disk under
// the d_max semi-metric. `others` excludes x. Returns +inf when the capture
// condition is never met on the search grid; 0 when x is outside the
// near-boundary shell A_{-rho0}.
double hull_radius_2d(const Space& dmax_space, const Configuration& others,
                      const Point& x, double rho0 = 0.2, double c_max = 3.0,
                      int grid_steps = 40, double r_min = 1e-3,
                      double r_max = 2.0);

// score evaluated at x given the full configuration including x
using PointScoreFn =
    std::function<double(const Point& x, const Configuration& with_x)>;
using RadiusFn =
    std::function<double(const Point& x, const Configuration& others)>;

struct VanishingReport {
  int trials = 0;
  int violations = 0;
  int skipped = 0;  // radius was infinite or covered the whole space
  bool pass = false;
};

// Checks the defining property of a stabilization radius: with up to
// `max_extras` extra points placed strictly outside the semimetric ball
// B(x, R), the score at x is unchanged by the extras and by restricting
// the configuration to the ball.
VanishingReport vanishing_check(const PointScoreFn& score, const RadiusFn& radius,
                                const Space& space, int trials, double s,
                                std::uint64_t seed, int max_extras = 7,
                                const MarkDistribution& marks =
                                    MarkDistribution::dirac());

struct TailFit {
  double C_hat = 1.0;
  double c_hat = 0.0;
  double alpha_hat = 0.0;
  double residual = 0.0;  // 1 - R^2 of the log-log fit
  std::vector<double> log_scaled_r;  // fitted abscissae log(s^(1/gamma) r)
  std::vector<double> survivals;     // matching survival estimates
};

// Survival of the radius under a Poisson sample: for each s in the grid and
// each center x, estimates P(R >= r) on r = u * s^(-1/gamma) for u in
// u_grid, then fits log(-log survival) against log(u).
TailFit radius_tail_fit(const RadiusFn& radius, const Space& space,
                        const std::vector<double>& s_grid,
                        const std::vector<double>& u_grid,
                        const std::vector<Point>& centers, int reps,
                        std::uint64_t seed);

// Probability that the score at distance t from K is nonzero, with up to 7
// extra points; fits the exponent of -log p against log(s^(1/gamma) t).
TailFit decay_check(const PointScoreFn& score, const Space& space,
                    const std::vector<double>& s_grid,
                    const std::vector<double>& t_grid,
                    const std::function<Point(double)>& x_of_t, int reps,
                    std::uint64_t seed, int max_extras = 7);

}  // namespace stabsim
