#include "stabsim/stabilization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stabsim/stats.hpp"

namespace stabsim {

double diff1(const TotalFn& f, const Configuration& config,
             const MarkedPoint& x) {
  return f(config.inserted(x)) - f(config);
}

double diff2(const TotalFn& f, const Configuration& config,
             const MarkedPoint& x1, const MarkedPoint& x2) {
  std::array<MarkedPoint, 2> both{x1, x2};
  return f(config.inserted(std::span<const MarkedPoint>(both))) -
         f(config.inserted(x1)) - f(config.inserted(x2)) + f(config);
}

namespace {

std::size_t find_index(const Configuration& c, const MarkedPoint& p) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i].pt == p.pt && c[i].mark == p.mark) return i;
  throw std::logic_error("point not found in configuration");
}

double rel_residual(double lhs, double rhs) {
  return std::abs(lhs - rhs) /
         std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace

IdentityReport score_sum_identity_check(const ScoreFunctional& fam,
                                        const Space& space, int trials,
                                        std::uint64_t seed,
                                        const MarkDistribution& marks) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  IdentityReport rep;
  rep.trials = trials;
  RandomStream rng(seed, 17);
  for (int t = 0; t < trials; ++t) {
    std::size_t n = 5 + rng.below(26);  // 5..30
    Configuration m = sample_binomial(space, n, marks, rng);
    MarkedPoint y1{space.sample(rng), marks.sample(rng)};
    MarkedPoint y2{space.sample(rng), marks.sample(rng)};

    Configuration m1 = m.inserted(y1);
    Configuration m2 = m.inserted(y2);
    std::array<MarkedPoint, 2> both{y1, y2};
    Configuration m12 = m.inserted(std::span<const MarkedPoint>(both));

    // first order at y1
    double lhs1 = fam.total(m1) - fam.total(m);
    double rhs1 = fam.score(find_index(m1, y1), m1);
    for (std::size_t i = 0; i < m.size(); ++i)
      rhs1 += fam.score(find_index(m1, m[i]), m1) - fam.score(i, m);
    rep.max_rel_residual_first =
        std::max(rep.max_rel_residual_first, rel_residual(lhs1, rhs1));

    // second order at (y1, y2)
    double lhs2 =
        fam.total(m12) - fam.total(m1) - fam.total(m2) + fam.total(m);
    double rhs2 =
        fam.score(find_index(m12, y2), m12) - fam.score(find_index(m2, y2), m2);
    rhs2 +=
        fam.score(find_index(m12, y1), m12) - fam.score(find_index(m1, y1), m1);
    for (std::size_t i = 0; i < m.size(); ++i) {
      rhs2 += fam.score(find_index(m12, m[i]), m12) -
              fam.score(find_index(m1, m[i]), m1) -
              fam.score(find_index(m2, m[i]), m2) + fam.score(i, m);
    }
    rep.max_rel_residual_second =
        std::max(rep.max_rel_residual_second, rel_residual(lhs2, rhs2));
  }
  rep.pass = rep.max_rel_residual_first <= 1e-9 &&
             rep.max_rel_residual_second <= 1e-9;
  return rep;
}

double knn_radius(const Space& space, const Configuration& config,
                  std::size_t i, int k) {
  NeighborIndex idx(space, config);
  auto nb = idx.knn(i, k);
  return 3.0 * nb.back().dist;
}

double knn_radius_at(const Space& space, const Configuration& others,
                     const Point& x, int k) {
  NeighborIndex idx(space, others);
  auto nb = idx.knn_of_point(x, k);
  return 3.0 * nb.back().dist;
}

namespace {

inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x * b.y - a.y * b.x;
}

bool in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  double d1 = cross2({b.x - a.x, b.y - a.y}, {p.x - a.x, p.y - a.y});
  double d2 = cross2({c.x - b.x, c.y - b.y}, {p.x - b.x, p.y - b.y});
  double d3 = cross2({a.x - c.x, a.y - c.y}, {p.x - c.x, p.y - c.y});
  bool neg = d1 < 0 || d2 < 0 || d3 < 0;
  bool pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(neg && pos);
}

// membership in the stabilization template set around x for the unit disk,
// sandwich constants c_lower = 1/sqrt(2), c_upper = 1
bool in_axr(const Vec2& x, double r, const Vec2& y) {
  double e = std::hypot(x.x, x.y);
  double delta = 1.0 - e;  // dist(x, complement)
  Vec2 xhat{x.x / e, x.y / e};
  Vec2 that{-xhat.y, xhat.x};
  if (r <= std::sqrt(delta)) {
    // cap cone: triangle between the tangent chord and the lifted apex
    Vec2 v1{x.x - r * that.x, x.y - r * that.y};
    Vec2 v2{x.x + r * that.x, x.y + r * that.y};
    Vec2 apex{x.x + r * r * xhat.x, x.y + r * r * xhat.y};
    return in_triangle(y, v1, v2, apex);
  }
  double rho = r * std::sqrt(2.0);
  if (rho >= 1.0 + e) return !(y.x == x.x && y.y == x.y);  // everything but x
  double a = (1.0 + e * e - rho * rho) / (2.0 * e);
  double h = std::sqrt(std::max(0.0, 1.0 - a * a));
  Vec2 q1{a * xhat.x + h * that.x, a * xhat.y + h * that.y};
  Vec2 q2{a * xhat.x - h * that.x, a * xhat.y - h * that.y};
  if (y.x * xhat.x + y.y * xhat.y < a) return false;  // far cap removed
  return !in_triangle(y, x, q1, q2);
}

}  // namespace

double hull_radius_2d(const Space& dmax_space, const Configuration& others,
                      const Point& x, double rho0, double c_max,
                      int grid_steps, double r_min, double r_max) {
  (void)dmax_space;
  Vec2 xv = to_vec2(x);
  double e = std::hypot(xv.x, xv.y);
  if (1.0 - e > rho0) return 0.0;  // outside the near-boundary shell

  // shell candidates split by the two half-planes around the ray through x
  std::vector<Vec2> side1, side2;
  for (std::size_t i = 0; i < others.size(); ++i) {
    Vec2 y = to_vec2(others[i].pt);
    if (1.0 - std::hypot(y.x, y.y) > rho0) continue;
    double cr = cross2(xv, y);
    if (cr >= 0) side1.push_back(y);
    if (cr <= 0) side2.push_back(y);
  }
  if (side1.empty() || side2.empty())
    return std::numeric_limits<double>::infinity();

  double ratio = std::pow(r_max / r_min, 1.0 / (grid_steps - 1));
  double r = r_min;
  for (int j = 0; j < grid_steps; ++j, r *= ratio) {
    bool hit1 = false, hit2 = false;
    for (const Vec2& y : side1)
      if (in_axr(xv, r, y)) {
        hit1 = true;
        break;
      }
    if (hit1) {
      for (const Vec2& y : side2)
        if (in_axr(xv, r, y)) {
          hit2 = true;
          break;
        }
    }
    if (hit1 && hit2) return c_max * r;
  }
  return std::numeric_limits<double>::infinity();
}

VanishingReport vanishing_check(const PointScoreFn& score,
                                const RadiusFn& radius, const Space& space,
                                int trials, double s, std::uint64_t seed,
                                int max_extras, const MarkDistribution& marks) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  VanishingReport rep;
  rep.trials = trials;
  RandomStream rng(seed, 23);
  const double tol = 1e-12;
  for (int t = 0; t < trials; ++t) {
    Configuration m = sample_poisson(space, s, marks, rng);
    MarkedPoint xm{space.sample(rng), marks.sample(rng)};
    double r = radius(xm.pt, m);
    if (!std::isfinite(r)) {
      ++rep.skipped;
      continue;
    }
    Configuration with_x = m.inserted(xm);
    double base = score(xm.pt, with_x);

    // extras strictly outside the semimetric ball B(x, r)
    int want = static_cast<int>(rng.below(max_extras + 1));
    std::vector<MarkedPoint> extras;
    int attempts = 0;
    while (static_cast<int>(extras.size()) < want && attempts < 2000) {
      ++attempts;
      Point y = space.sample(rng);
      if (space.semimetric(xm.pt, y) > r)
        extras.push_back({y, marks.sample(rng)});
    }
    Configuration with_extras = with_x.inserted(
        std::span<const MarkedPoint>(extras.data(), extras.size()));
    double after = score(xm.pt, with_extras);
    Configuration inside =
        with_extras.restricted_to_ball(space, xm.pt, r);
    double restricted = score(xm.pt, inside);
    if (std::abs(after - base) > tol || std::abs(restricted - base) > tol)
      ++rep.violations;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

namespace {

TailFit fit_from_survivals(std::vector<double>& xs, std::vector<double>& ps) {
  TailFit tf;
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ps[i] > 0.0 && ps[i] < 1.0) {
      fx.push_back(std::exp(xs[i]));  // rate_fit takes raw positive data
      fy.push_back(-std::log(ps[i]));
    }
  }
  if (fx.size() < 2)
    throw std::runtime_error("tail grid unfittable: survivals all 0 or 1");
  RateFit f = rate_fit(fx, fy);
  tf.alpha_hat = f.slope;
  tf.c_hat = std::exp(f.intercept);
  tf.C_hat = 1.0;
  tf.residual = 1.0 - f.r2;
  tf.log_scaled_r = std::move(xs);
  tf.survivals = std::move(ps);
  return tf;
}

}  // namespace

TailFit radius_tail_fit(const RadiusFn& radius, const Space& space,
                        const std::vector<double>& s_grid,
                        const std::vector<double>& u_grid,
                        const std::vector<Point>& centers, int reps,
                        std::uint64_t seed) {
  if (reps < 1000) throw std::invalid_argument("need reps >= 1e3");
  if (u_grid.size() < 5) throw std::invalid_argument("need >= 5 grid radii");
  std::vector<double> xs, ps;
  MarkDistribution marks;
  for (double s : s_grid) {
    double scale = std::pow(s, -1.0 / space.gamma());
    for (const Point& x : centers) {
      std::vector<int> exceed(u_grid.size(), 0);
      RandomStream rng(seed, static_cast<std::uint64_t>(s * 131 + 7));
      for (int rep = 0; rep < reps; ++rep) {
        Configuration m = sample_poisson(space, s, marks, rng);
        if (m.empty()) {
          for (auto& e : exceed) ++e;
          continue;
        }
        double r = radius(x, m);
        for (std::size_t j = 0; j < u_grid.size(); ++j)
          if (r >= u_grid[j] * scale) ++exceed[j];
      }
      for (std::size_t j = 0; j < u_grid.size(); ++j) {
        xs.push_back(std::log(u_grid[j]));
        ps.push_back(static_cast<double>(exceed[j]) / reps);
      }
    }
  }
  return fit_from_survivals(xs, ps);
}

TailFit decay_check(const PointScoreFn& score, const Space& space,
                    const std::vector<double>& s_grid,
                    const std::vector<double>& t_grid,
                    const std::function<Point(double)>& x_of_t, int reps,
                    std::uint64_t seed, int max_extras) {
  if (space.k_spec() == KSpec::FullSpace)
    throw std::invalid_argument("decay_check needs K != full space");
  std::vector<double> xs, ps;
  MarkDistribution marks;
  for (double s : s_grid) {
    double sg = std::pow(s, 1.0 / space.gamma());
    for (double t : t_grid) {
      Point x = x_of_t(t);
      RandomStream rng(seed, static_cast<std::uint64_t>(s * 977 + t * 1e6));
      int nonzero = 0;
      for (int rep = 0; rep < reps; ++rep) {
        Configuration m = sample_poisson(space, s, marks, rng);
        int ne = static_cast<int>(rng.below(max_extras + 1));
        std::vector<MarkedPoint> pts;
        pts.reserve(ne + 1);
        pts.push_back({x, marks.sample(rng)});
        for (int a = 0; a < ne; ++a)
          pts.push_back({space.sample(rng), marks.sample(rng)});
        Configuration with_x =
            m.inserted(std::span<const MarkedPoint>(pts.data(), pts.size()));
        if (std::abs(score(x, with_x)) > 1e-12) ++nonzero;
      }
      xs.push_back(std::log(sg * t));
      ps.push_back(static_cast<double>(nonzero) / reps);
    }
  }
  return fit_from_survivals(xs, ps);
}

}  // namespace stabsim
