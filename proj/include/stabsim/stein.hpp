#pragma once

#include <functional>

#include "stabsim/process.hpp"
#include "stabsim/stabilization.hpp"

namespace stabsim {

struct McParams {
  int outer = 200;   // outer points / pairs
  int inner = 1000;  // fresh process replications per probability estimate
  double p = 1.0;    // moment parameter in (0, 1]
  std::uint64_t seed = 1;
};

struct SteinEstimate {
  double gamma_term = 0.0;          // estimate of the first-difference term
  double gamma_se = 0.0;
  double psi_sq_integral = 0.0;     // int psi^2 dQ^2
  double psi_sq_se = 0.0;
  double psi_inner_sq_integral = 0.0;  // int (int psi dQ)^2 dQ
  double psi_inner_sq_se = 0.0;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  double i_ks = 0.0;
  double bound = 0.0;
  McParams mc;
};

struct BoundInputs {
  double p = 1.0;           // in (0, 1]
  double c_combined = 1.0;  // min of the stabilization and decay constants
  double alpha = 2.0;       // min of the two tail exponents
  double user_constant = 1.0;
};

// Exponentially weighted mass near K. K = full space gives exactly s.
// Otherwise adaptive quadrature of the closed-form radial reduction,
// relative error <= 1e-6.
double i_ks(const Space& space, const BoundInputs& in, double s);

// s * int P(D f(P_s) != 0)^(p/(8+2p)) dQ(x) by nested Monte Carlo.
// Reports the estimate and its standard error.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

McEstimate estimate_gamma(const TotalFn& f, const Space& space, double s,
                          const McParams& mc);

struct PsiIntegrals {
  McEstimate psi_sq;        // int psi^2 dQ^2
  McEstimate psi_inner_sq;  // int (int psi dQ)^2 dQ
};

PsiIntegrals estimate_psi_integrals(const TotalFn& f, const Space& space,
                                    double s, const McParams& mc);

// psi value for one pair (diagnostic; used by the monotone-trend test)
double psi_at(const TotalFn& f, const Space& space, double s,
              const Point& x1, const Point& x2, const McParams& mc);

// S1 + S2 + S3 assembly for Poisson input
double assemble_poisson_bound(SteinEstimate& est, double s, double variance,
                              double user_constant = 1.0);

// Gamma', psi' and S1'-S3' assembly for binomial input; the sup over
// added sets of size <= 1 is the max over the empty set and one fresh point
double assemble_binomial_bound(const TotalFn& f, const Space& space,
                               std::size_t n, double variance,
                               const McParams& mc, SteinEstimate* out = nullptr,
                               double user_constant = 1.0);

// three-term Kolmogorov bound in terms of the weighted mass near K;
// binomial=true swaps the I^(5/4) term for I
double closed_form_bound_rhs(double i_ks_value, double variance, double user_constant,
                     bool binomial = false);

struct FourthMomentReport {
  double lhs = 0.0;       // 4th central moment of the standardized statistic
  double rhs = 0.0;
  double lhs_se = 0.0;
  bool pass = false;      // lhs <= rhs + 3 SE
};

// Fourth-moment inequality for the standardized statistic of a binomial
// sample: E(F - EF)^4 <= 9 max{(32 n Int sqrt(E(D_x f)^4) dQ)^2,
// 4 n E(D_1 f)^4 + 1}.
FourthMomentReport efron_stein_4th_check(const TotalFn& f, const Space& space,
                                         std::size_t n, int reps,
                                         std::uint64_t seed);

}  // namespace stabsim
