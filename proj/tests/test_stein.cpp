#include <doctest.h>

#include <cmath>

#include "stabsim/stats.hpp"
#include "stabsim/stein.hpp"

using namespace stabsim;

TEST_SUITE("stein") {

TEST_CASE("weighted mass near K: full space is exact") {
  BoundInputs in;
  for (double s : {1.0, 100.0, 5000.0})
    CHECK(i_ks(Space::unit_cube(2), in, s) == s);
}

TEST_CASE("weighted mass: zero decay constant gives s") {
  BoundInputs in;
  in.c_combined = 0.0;
  CHECK(i_ks(Space::unit_cube(2, KSpec::BoundaryOfBody), in, 100.0) ==
        doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("weighted mass quadrature against 30-digit oracles") {
  BoundInputs in;
  in.c_combined = 50.0;
  in.p = 1.0;
  in.alpha = 2.0;
  Space cube = Space::unit_cube(2, KSpec::BoundaryOfBody);
  CHECK(i_ks(cube, in, 100.0) ==
        doctest::Approx(91.851311733516118).epsilon(1e-6));
  CHECK(i_ks(cube, in, 1000.0) ==
        doctest::Approx(576.698987892189221).epsilon(1e-6));
  Space ball = Space::ball(2, 1.0, KSpec::BoundaryOfBody);
  CHECK(i_ks(ball, in, 100.0) ==
        doctest::Approx(75.020386957082482).epsilon(1e-6));
  Space simplex = Space::triangle_under_f(2, {1, 1});
  CHECK(i_ks(simplex, in, 100.0) ==
        doctest::Approx(85.191245794678286).epsilon(1e-6));
  BoundInputs in3 = in;
  in3.alpha = 3.0;
  CHECK(i_ks(Space::convex_body_dmax(), in3, 1000.0) ==
        doctest::Approx(459.979121762481059).epsilon(1e-6));
}

TEST_CASE("surface-order scaling of the boundary mass") {
  // the weight decays on the scale (c s)^(-1/2), so the square-root law
  // only shows once that scale is far inside the body
  BoundInputs in;
  in.c_combined = 50.0;
  Space cube = Space::unit_cube(2, KSpec::BoundaryOfBody);
  std::vector<double> sizes, vals;
  for (double s : {1e4, 1e5, 1e6, 1e7}) {
    sizes.push_back(s);
    vals.push_back(i_ks(cube, in, s));
  }
  RateFit f = rate_fit(sizes, vals);
  CHECK(std::abs(f.slope - 0.5) < 0.02);
}

TEST_CASE("first-difference term for degenerate functionals") {
  Space cube = Space::unit_cube(2);
  McParams mc{100, 100, 1.0, 3};
  TotalFn card = [](const Configuration& c) {
    return static_cast<double>(c.size());
  };
  McEstimate g = estimate_gamma(card, cube, 50.0, mc);
  CHECK(g.value == 50.0);
  CHECK(g.std_error == 0.0);
  TotalFn zero = [](const Configuration&) { return 0.0; };
  CHECK(estimate_gamma(zero, cube, 50.0, mc).value == 0.0);
}

TEST_CASE("pair integrals vanish for additive functionals") {
  Space cube = Space::unit_cube(2);
  McParams mc{200, 100, 1.0, 3};
  TotalFn additive = [](const Configuration& c) {
    double s = 0.0;
    for (const auto& mp : c.items()) s += mp.pt[0];
    return s;
  };
  PsiIntegrals pi = estimate_psi_integrals(additive, cube, 50.0, mc);
  CHECK(pi.psi_sq.value == 0.0);
  CHECK(pi.psi_inner_sq.value == 0.0);
}

TEST_CASE("pair interaction decreases with distance") {
  Space cube = Space::unit_cube(2);
  FunctionalParams params;
  auto fam = make_functional("knn", params, cube);
  ScoreFunctional* raw = fam.get();
  TotalFn f = [raw](const Configuration& c) { return raw->total(c); };
  McParams mc{100, 400, 1.0, 5};
  double near = psi_at(f, cube, 200.0, Point{0.5, 0.5}, Point{0.52, 0.5}, mc);
  double far = psi_at(f, cube, 200.0, Point{0.5, 0.5}, Point{0.9, 0.9}, mc);
  CHECK(near >= far);
  CHECK(near > 0.5);
  CHECK(far == 0.0);
}

TEST_CASE("poisson assembly plug-in arithmetic") {
  SteinEstimate est;
  est.gamma_term = 100.0;
  est.psi_sq_integral = 0.0;
  est.psi_inner_sq_integral = 0.0;
  double bound = assemble_poisson_bound(est, 100.0, 100.0, 1.0);
  CHECK(est.s1 == 0.0);
  CHECK(est.s2 == 0.0);
  CHECK(est.s3 == doctest::Approx(0.5316227766016838).epsilon(1e-12));
  CHECK(bound == est.s3);
  CHECK_THROWS_AS(assemble_poisson_bound(est, 100.0, 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("three-term bound plug-in arithmetic and scaling") {
  CHECK(closed_form_bound_rhs(100.0, 100.0, 1.0) ==
        doctest::Approx(0.3316227766016838).epsilon(1e-12));
  CHECK(closed_form_bound_rhs(0.0, 100.0, 1.0) == 0.0);
  // binomial variant swaps I^(5/4) for I
  CHECK(closed_form_bound_rhs(100.0, 100.0, 1.0, true) ==
        doctest::Approx(0.1 + 0.1 + (100.0 + 1000.0) / 1e4).epsilon(1e-12));
  // I = Var = s decays like 1/sqrt(s)
  std::vector<double> sizes, vals;
  for (double s = 100.0; s <= 1e6; s *= 10.0) {
    sizes.push_back(s);
    vals.push_back(closed_form_bound_rhs(s, s, 1.0));
  }
  RateFit f = rate_fit(sizes, vals);
  CHECK(std::abs(f.slope + 0.5) < 0.01);
}

TEST_CASE("assembly is monotone nonincreasing in the variance") {
  SteinEstimate est;
  est.gamma_term = 80.0;
  est.psi_sq_integral = 0.01;
  est.psi_inner_sq_integral = 0.001;
  double b1 = assemble_poisson_bound(est, 100.0, 50.0, 1.0);
  double b2 = assemble_poisson_bound(est, 100.0, 100.0, 1.0);
  CHECK(b2 < b1);
  CHECK(closed_form_bound_rhs(100.0, 200.0, 1.0) < closed_form_bound_rhs(100.0, 100.0, 1.0));
}

TEST_CASE("standard errors shrink with more outer samples") {
  Space cube = Space::unit_cube(2);
  FunctionalParams params;
  auto fam = make_functional("knn", params, cube);
  ScoreFunctional* raw = fam.get();
  TotalFn f = [raw](const Configuration& c) { return raw->total(c); };
  McParams mc1{100, 100, 1.0, 3};
  McParams mc2{400, 100, 1.0, 3};
  McEstimate g1 = estimate_gamma(f, cube, 50.0, mc1);
  McEstimate g2 = estimate_gamma(f, cube, 50.0, mc2);
  double ratio = g1.std_error / g2.std_error;
  CHECK(ratio > 1.2);
  CHECK(ratio < 3.4);
}

TEST_CASE("fourth-moment inequality for a half-square count") {
  Space cube = Space::unit_cube(2);
  TotalFn f = [](const Configuration& c) {
    double s = 0.0;
    for (const auto& mp : c.items()) s += mp.pt[0] < 0.5 ? 1.0 : 0.0;
    return s;
  };
  FourthMomentReport rep = efron_stein_4th_check(f, cube, 100, 2000, 7);
  CHECK(rep.pass);
  // binomial(n, 1/2) kurtosis is 3 - 2/n
  CHECK(rep.lhs == doctest::Approx(3.0 - 2.0 / 100).epsilon(0.1));
}

TEST_CASE("binomial assembly runs and is positive for knn") {
  Space cube = Space::unit_cube(2);
  FunctionalParams params;
  auto fam = make_functional("knn", params, cube);
  ScoreFunctional* raw = fam.get();
  TotalFn f = [raw](const Configuration& c) { return raw->total(c); };
  McParams mc{100, 100, 1.0, 3};
  SteinEstimate est;
  double bound = assemble_binomial_bound(f, cube, 60, 3.0, mc, &est, 1.0);
  CHECK(bound > 0.0);
  CHECK(est.gamma_term > 0.0);
  CHECK(est.gamma_term <= 60.0);
  CHECK(est.s3 > 0.0);
  CHECK(bound == doctest::Approx(est.s1 + est.s2 + est.s3).epsilon(1e-12));
}

}  // TEST_SUITE
