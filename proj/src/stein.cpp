#include "stabsim/stein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stabsim/stats.hpp"

namespace stabsim {

namespace {

constexpr double kZeroTol = 1e-12;

double adaptive_simpson(const std::function<double(double)>& g, double a,
                        double b, double fa, double fm, double fb, double eps,
                        int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = g(lm), frm = g(rm);
  double h = b - a;
  double whole = h / 6.0 * (fa + 4 * fm + fb);
  double left = h / 12.0 * (fa + 4 * flm + fm);
  double right = h / 12.0 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <=
                        15 * eps * std::max(1e-300, std::abs(left + right)))
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(g, a, m, fa, flm, fm, eps, depth - 1) +
         adaptive_simpson(g, m, b, fm, frm, fb, eps, depth - 1);
}

double integrate(const std::function<double(double)>& g, double a, double b) {
  double m = 0.5 * (a + b);
  return adaptive_simpson(g, a, b, g(a), g(m), g(b), 1e-7, 40);
}

// density of the distance to K under Q, with its upper endpoint
bool k_distance_density(const Space& space, double& tmax,
                        std::function<double(double)>& pdf) {
  int d = space.dim();
  switch (space.kind()) {
    case SpaceKind::UnitCube:
      if (space.k_spec() != KSpec::BoundaryOfBody) return false;
      tmax = 0.5;
      pdf = [d](double t) {
        return 2.0 * d * std::pow(1.0 - 2.0 * t, d - 1);
      };
      return true;
    case SpaceKind::Ball: {
      if (space.k_spec() != KSpec::BoundaryOfBody) return false;
      double R = space.radius();
      tmax = R;
      pdf = [d, R](double t) {
        return (d / R) * std::pow(1.0 - t / R, d - 1);
      };
      return true;
    }
    case SpaceKind::TriangleUnderF: {
      if (space.k_spec() != KSpec::LevelSetF) return false;
      double na = 0.0;
      for (double a : space.region().coeffs) na += a * a;
      double h = 1.0 / std::sqrt(na);
      tmax = h;
      pdf = [d, h](double t) {
        return (d / h) * std::pow(1.0 - t / h, d - 1);
      };
      return true;
    }
    case SpaceKind::ConvexBodyDMax:
      // T = sqrt(1 - |x|), so P(T >= t) = (1 - t^2)^2 on the unit disk
      tmax = 1.0;
      pdf = [](double t) { return 4.0 * t * (1.0 - t * t); };
      return true;
    default:
      return false;
  }
}

}  // namespace

double i_ks(const Space& space, const BoundInputs& in, double s) {
  if (s < 1) throw std::invalid_argument("need s >= 1");
  if (space.k_spec() == KSpec::FullSpace) return s;  // s Q(X), Q(X) = 1
  double tmax;
  std::function<double(double)> pdf;
  if (!k_distance_density(space, tmax, pdf))
    throw std::invalid_argument("unsupported space/K pair for the quadrature");
  double lambda =
      in.c_combined * in.p / (36.0 * std::pow(4.0, in.alpha + 1.0));
  double sg = std::pow(s, 1.0 / space.gamma());
  double alpha = in.alpha;
  auto g = [&](double t) {
    return std::exp(-lambda * std::pow(sg * t, alpha)) * pdf(t);
  };
  return s * integrate(g, 0.0, tmax);
}

McEstimate estimate_gamma(const TotalFn& f, const Space& space, double s,
                          const McParams& mc) {
  if (mc.outer < 100 || mc.inner < 100)
    throw std::invalid_argument("need outer >= 100 and inner >= 100");
  RandomStream rng(mc.seed, 101);
  MarkDistribution marks;
  std::vector<Point> xs(mc.outer);
  for (auto& x : xs) x = space.sample(rng);
  std::vector<int> hits(mc.outer, 0);
  for (int j = 0; j < mc.inner; ++j) {
    Configuration m = sample_poisson(space, s, marks, rng);
    double f0 = f(m);
    for (int i = 0; i < mc.outer; ++i) {
      double f1 = f(m.inserted({xs[i], 1.0}));
      if (std::abs(f1 - f0) > kZeroTol) ++hits[i];
    }
  }
  double expn = mc.p / (8.0 + 2.0 * mc.p);
  std::vector<double> terms(mc.outer);
  for (int i = 0; i < mc.outer; ++i) {
    double prob =
        std::clamp(static_cast<double>(hits[i]) / mc.inner, 0.0, 1.0);
    terms[i] = std::pow(prob, expn);
  }
  Moments mo = summarize(terms);
  return {s * mo.mean, s * std::sqrt(mo.variance / mc.outer)};
}

namespace {

// shared engine for the pair integrals; exponent differs between the
// Poisson and binomial statements
struct PsiGrid {
  std::vector<Point> x1;               // n1 outer points
  std::vector<std::vector<Point>> x2;  // m2 inner points per outer point
  std::vector<std::vector<double>> psi;
};

PsiGrid psi_grid(const TotalFn& f, const Space& space, double s_or_n,
                 bool binomial, const McParams& mc, double exponent) {
  // the inner-average integral targets a probability of order (a/s)^2, so
  // the x2 budget has to grow with the inner replication budget for the
  // off-diagonal product estimator below to see any coincident pairs
  int n1 = std::max(20, mc.outer / 2);
  int m2 = std::max(10, mc.outer / 8);
  RandomStream rng(mc.seed, 211);
  MarkDistribution marks;
  PsiGrid g;
  g.x1.resize(n1);
  g.x2.assign(n1, std::vector<Point>(m2));
  for (int i = 0; i < n1; ++i) {
    g.x1[i] = space.sample(rng);
    for (int j = 0; j < m2; ++j) g.x2[i][j] = space.sample(rng);
  }
  std::vector<std::vector<int>> hits(n1, std::vector<int>(m2, 0));
  std::vector<std::vector<int>> hits_a;  // binomial: added set of size 1
  if (binomial) hits_a.assign(n1, std::vector<int>(m2, 0));

  for (int r = 0; r < mc.inner; ++r) {
    Configuration m =
        binomial
            ? sample_binomial(space, static_cast<std::size_t>(s_or_n) - 2,
                              marks, rng)
            : sample_poisson(space, s_or_n, marks, rng);
    Configuration ma;  // binomial sup: n-3 points plus one fresh Q-point
    if (binomial && static_cast<std::size_t>(s_or_n) >= 3) {
      ma = sample_binomial(space, static_cast<std::size_t>(s_or_n) - 3, marks,
                           rng)
               .inserted({space.sample(rng), 1.0});
    }
    for (auto* pr : {&m, binomial ? &ma : nullptr}) {
      if (pr == nullptr) break;
      const Configuration& base = *pr;
      auto& h = (pr == &m) ? hits : hits_a;
      double f0 = f(base);
      for (int i = 0; i < n1; ++i) {
        MarkedPoint p1{g.x1[i], 1.0};
        double f1 = f(base.inserted(p1));
        for (int j = 0; j < m2; ++j) {
          MarkedPoint p2{g.x2[i][j], 1.0};
          double f2 = f(base.inserted(p2));
          std::array<MarkedPoint, 2> both{p1, p2};
          double f12 = f(base.inserted(std::span<const MarkedPoint>(both)));
          if (std::abs(f12 - f1 - f2 + f0) > kZeroTol) ++h[i][j];
        }
      }
      if (!binomial) break;
    }
  }
  g.psi.assign(n1, std::vector<double>(m2));
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < m2; ++j) {
      double prob = static_cast<double>(hits[i][j]) / mc.inner;
      if (binomial)
        prob = std::max(prob, static_cast<double>(hits_a[i][j]) / mc.inner);
      g.psi[i][j] = std::pow(std::clamp(prob, 0.0, 1.0), exponent);
    }
  return g;
}

PsiIntegrals integrals_from_grid(const PsiGrid& g) {
  PsiIntegrals out;
  std::vector<double> sq;
  std::vector<double> inner_means;
  for (std::size_t i = 0; i < g.psi.size(); ++i) {
    double acc = 0.0, acc_sq = 0.0;
    for (double v : g.psi[i]) {
      sq.push_back(v * v);
      acc += v;
      acc_sq += v * v;
    }
    // unbiased estimate of (int psi dQ)^2 from the m inner points:
    // mean of the off-diagonal products. The naive squared mean carries an
    // O(Var/m) upward bias that does not vanish with the intensity and
    // would dominate the S2 term.
    double m = static_cast<double>(g.psi[i].size());
    inner_means.push_back((acc * acc - acc_sq) / (m * (m - 1.0)));
  }
  Moments m1 = summarize(sq);
  out.psi_sq = {m1.mean, std::sqrt(m1.variance / sq.size())};
  Moments m2 = summarize(inner_means);
  // per-point values may be negative; the integral itself is nonnegative
  out.psi_inner_sq = {std::max(m2.mean, 0.0),
                      std::sqrt(m2.variance / inner_means.size())};
  return out;
}

}  // namespace

PsiIntegrals estimate_psi_integrals(const TotalFn& f, const Space& space,
                                    double s, const McParams& mc) {
  if (mc.outer < 100 || mc.inner < 100)
    throw std::invalid_argument("need outer >= 100 and inner >= 100");
  double expn = mc.p / (16.0 + 4.0 * mc.p);
  return integrals_from_grid(psi_grid(f, space, s, false, mc, expn));
}

double psi_at(const TotalFn& f, const Space& space, double s, const Point& x1,
              const Point& x2, const McParams& mc) {
  RandomStream rng(mc.seed, 307);
  MarkDistribution marks;
  MarkedPoint p1{x1, 1.0}, p2{x2, 1.0};
  int hits = 0;
  for (int r = 0; r < mc.inner; ++r) {
    Configuration m = sample_poisson(space, s, marks, rng);
    std::array<MarkedPoint, 2> both{p1, p2};
    double d2 = f(m.inserted(std::span<const MarkedPoint>(both))) -
                f(m.inserted(p1)) - f(m.inserted(p2)) + f(m);
    if (std::abs(d2) > kZeroTol) ++hits;
  }
  double expn = mc.p / (16.0 + 4.0 * mc.p);
  return std::pow(static_cast<double>(hits) / mc.inner, expn);
}

double assemble_poisson_bound(SteinEstimate& est, double s, double variance,
                              double user_constant) {
  if (variance <= 0) throw std::invalid_argument("variance must be positive");
  double v = variance;
  est.s1 = s * std::sqrt(est.psi_sq_integral) / v;
  est.s2 = std::pow(s, 1.5) * std::sqrt(est.psi_inner_sq_integral) / v;
  double g = est.gamma_term;
  est.s3 = std::sqrt(g) / v + 2.0 * g / std::pow(v, 1.5) +
           (std::pow(g, 1.25) + 2.0 * std::pow(g, 1.5)) / (v * v);
  est.bound = user_constant * (est.s1 + est.s2 + est.s3);
  return est.bound;
}

double assemble_binomial_bound(const TotalFn& f, const Space& space,
                               std::size_t n, double variance,
                               const McParams& mc, SteinEstimate* out,
                               double user_constant) {
  if (n < 3) throw std::invalid_argument("need n >= 3");
  if (variance <= 0) throw std::invalid_argument("variance must be positive");
  // Gamma' over samples of size n-1
  RandomStream rng(mc.seed, 401);
  MarkDistribution marks;
  std::vector<Point> xs(mc.outer);
  for (auto& x : xs) x = space.sample(rng);
  std::vector<int> hits(mc.outer, 0);
  for (int j = 0; j < mc.inner; ++j) {
    Configuration m = sample_binomial(space, n - 1, marks, rng);
    double f0 = f(m);
    for (int i = 0; i < mc.outer; ++i) {
      if (std::abs(f(m.inserted({xs[i], 1.0})) - f0) > kZeroTol) ++hits[i];
    }
  }
  double expn = mc.p / (8.0 + 2.0 * mc.p);
  std::vector<double> terms(mc.outer);
  for (int i = 0; i < mc.outer; ++i)
    terms[i] = std::pow(static_cast<double>(hits[i]) / mc.inner, expn);
  Moments mo = summarize(terms);
  double gamma_prime = n * mo.mean;

  PsiIntegrals pi = integrals_from_grid(
      psi_grid(f, space, static_cast<double>(n), true, mc, expn));
  // S1' uses the plain first power of psi'
  std::vector<double> firsts;
  {
    PsiGrid g = psi_grid(f, space, static_cast<double>(n), true, mc, expn);
    for (const auto& row : g.psi)
      for (double v : row) firsts.push_back(v);
  }
  Moments mfirst = summarize(firsts);
  double v = variance;
  double s1 = n * std::sqrt(mfirst.mean) / v;
  double s2 = std::pow(static_cast<double>(n), 1.5) *
              std::sqrt(pi.psi_inner_sq.value) / v;
  double s3 = std::sqrt(gamma_prime) / v + gamma_prime / std::pow(v, 1.5) +
              (std::pow(gamma_prime, 1.5) + gamma_prime) / (v * v);
  if (out) {
    out->gamma_term = gamma_prime;
    out->gamma_se = n * std::sqrt(mo.variance / mc.outer);
    out->psi_sq_integral = mfirst.mean;  // first power for the binomial S1'
    out->psi_sq_se = std::sqrt(mfirst.variance / firsts.size());
    out->psi_inner_sq_integral = pi.psi_inner_sq.value;
    out->psi_inner_sq_se = pi.psi_inner_sq.std_error;
    out->s1 = s1;
    out->s2 = s2;
    out->s3 = s3;
    out->mc = mc;
    out->bound = user_constant * (s1 + s2 + s3);
  }
  return user_constant * (s1 + s2 + s3);
}

double closed_form_bound_rhs(double i_ks_value, double variance, double user_constant,
                     bool binomial) {
  if (variance <= 0) throw std::invalid_argument("variance must be positive");
  double I = i_ks_value;
  double v = variance;
  double last = binomial ? I : std::pow(I, 1.25);
  return user_constant * (std::sqrt(I) / v + I / std::pow(v, 1.5) +
                          (last + std::pow(I, 1.5)) / (v * v));
}

FourthMomentReport efron_stein_4th_check(const TotalFn& f, const Space& space,
                                         std::size_t n, int reps,
                                         std::uint64_t seed) {
  if (reps < 100) throw std::invalid_argument("need reps >= 100");
  RandomStream rng(seed, 503);
  MarkDistribution marks;

  std::vector<double> vals(reps);
  for (int r = 0; r < reps; ++r)
    vals[r] = f(sample_binomial(space, n, marks, rng));
  Moments mo = summarize(vals);
  if (mo.variance <= 0) throw std::invalid_argument("degenerate variance");
  double var = mo.variance;

  FourthMomentReport rep;
  rep.lhs = mo.central4 / (var * var);
  // rough SE of the standardized fourth moment
  std::vector<double> fourth(reps);
  double sd = std::sqrt(var);
  for (int r = 0; r < reps; ++r)
    fourth[r] = std::pow((vals[r] - mo.mean) / sd, 4.0);
  Moments mo4 = summarize(fourth);
  rep.lhs_se = std::sqrt(mo4.variance / reps);

  // term A: (32 n int sqrt(E (D_x f(X_{n-1}))^4) dQ)^2 for f scaled to
  // unit variance
  int nx = 100, ni = 100;
  double acc = 0.0;
  for (int i = 0; i < nx; ++i) {
    Point x = space.sample(rng);
    double m4 = 0.0;
    for (int j = 0; j < ni; ++j) {
      Configuration m = sample_binomial(space, n - 1, marks, rng);
      double d = f(m.inserted({x, 1.0})) - f(m);
      m4 += std::pow(d, 4.0);
    }
    acc += std::sqrt(m4 / ni);
  }
  double term_a = 32.0 * n * (acc / nx) / var;  // sqrt(E D^4)/sigma^2
  term_a *= term_a;

  // term B: 4 n E (D_1 f(X_n))^4 + 1
  double m4b = 0.0;
  int nb = std::min(reps, 2000);
  for (int r = 0; r < nb; ++r) {
    Configuration m = sample_binomial(space, n, marks, rng);
    double d = f(m) - f(m.erased(0));
    m4b += std::pow(d, 4.0);
  }
  double term_b = 4.0 * n * (m4b / nb) / (var * var) + 1.0;

  rep.rhs = 9.0 * std::max(term_a, term_b);
  rep.pass = rep.lhs <= rep.rhs + 3.0 * rep.lhs_se;
  return rep;
}

}  // namespace stabsim
