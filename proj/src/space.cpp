#include "stabsim/space.hpp"

#include <algorithm>
#include <cmath>

namespace stabsim {

namespace {

double unit_ball_volume(int d) {
  // kappa_d for d in 1..5
  static const double k[] = {1.0, 2.0, M_PI, 4.0 * M_PI / 3.0,
                             M_PI * M_PI / 2.0, 8.0 * M_PI * M_PI / 15.0};
  return k[d];
}

void check_dim(const Space& s, const Point& x) {
  if (x.dim() != s.ambient_dim())
    throw std::invalid_argument("point dimension mismatch");
}

}  // namespace

Space Space::unit_cube(int d, KSpec k) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("dim out of range");
  if (k == KSpec::LevelSetF)
    throw std::invalid_argument("LevelSetF needs TriangleUnderF");
  Space s;
  s.kind_ = SpaceKind::UnitCube;
  s.k_spec_ = k;
  s.dim_ = d;
  s.amb_ = d;
  s.gamma_ = d;
  return s;
}

Space Space::ball(int d, double radius, KSpec k) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("dim out of range");
  if (radius <= 0) throw std::invalid_argument("radius must be positive");
  if (k == KSpec::LevelSetF)
    throw std::invalid_argument("LevelSetF needs TriangleUnderF");
  Space s;
  s.kind_ = SpaceKind::Ball;
  s.k_spec_ = k;
  s.dim_ = d;
  s.amb_ = d;
  s.gamma_ = d;
  s.radius_ = radius;
  return s;
}

Space Space::triangle_under_f(int d, std::vector<double> coeffs, KSpec k) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("dim out of range");
  if (static_cast<int>(coeffs.size()) != d)
    throw std::invalid_argument("coefficient count mismatch");
  for (double a : coeffs)
    if (a <= 0) throw std::invalid_argument("coefficients must be positive");
  if (k == KSpec::BoundaryOfBody)
    throw std::invalid_argument("BoundaryOfBody incompatible with TriangleUnderF");
  Space s;
  s.kind_ = SpaceKind::TriangleUnderF;
  s.k_spec_ = k;
  s.dim_ = d;
  s.amb_ = d;
  s.gamma_ = d;
  s.region_.coeffs = std::move(coeffs);
  return s;
}

Space Space::geodesic_sphere(int m) {
  if (m < 1 || m > 2) throw std::invalid_argument("m must be 1 or 2");
  Space s;
  s.kind_ = SpaceKind::GeodesicSphere;
  s.k_spec_ = KSpec::FullSpace;
  s.dim_ = m;
  s.amb_ = m + 1;
  s.gamma_ = m;
  return s;
}

Space Space::convex_body_dmax() {
  Space s;
  s.kind_ = SpaceKind::ConvexBodyDMax;
  s.k_spec_ = KSpec::BoundaryOfBody;
  s.dim_ = 2;
  s.amb_ = 2;
  s.gamma_ = 3.0;  // d + 1 under the d_max semi-metric
  s.radius_ = 1.0;
  return s;
}

bool Space::contains(const Point& x) const {
  if (x.dim() != amb_) return false;
  const double eps = 1e-12;
  switch (kind_) {
    case SpaceKind::UnitCube:
      for (int i = 0; i < amb_; ++i)
        if (x[i] < -eps || x[i] > 1.0 + eps) return false;
      return true;
    case SpaceKind::Ball:
    case SpaceKind::ConvexBodyDMax:
      return norm2(x) <= radius_ + eps;
    case SpaceKind::TriangleUnderF: {
      for (int i = 0; i < amb_; ++i)
        if (x[i] < -eps) return false;
      return region_.eval(x) <= 1.0 + eps;
    }
    case SpaceKind::GeodesicSphere:
      return std::abs(norm2(x) - 1.0) <= 1e-9;
  }
  return false;
}

double Space::semimetric(const Point& x, const Point& y) const {
  check_dim(*this, x);
  check_dim(*this, y);
  switch (kind_) {
    case SpaceKind::UnitCube:
    case SpaceKind::Ball:
    case SpaceKind::TriangleUnderF:
      return euclid(x, y);
    case SpaceKind::GeodesicSphere: {
      double c = std::clamp(dot(x, y), -1.0, 1.0);
      return std::acos(c);
    }
    case SpaceKind::ConvexBodyDMax: {
      double e = euclid(x, y);
      double dd = std::abs(dist_to_complement(x) - dist_to_complement(y));
      return std::max(e, std::sqrt(dd));
    }
  }
  return 0.0;
}

double Space::dist_to_complement(const Point& x) const {
  return radius_ - norm2(x);
}

Point Space::sample(RandomStream& rng) const {
  switch (kind_) {
    case SpaceKind::UnitCube: {
      Point p(amb_);
      for (int i = 0; i < amb_; ++i) p[i] = rng.uniform();
      return p;
    }
    case SpaceKind::Ball:
    case SpaceKind::ConvexBodyDMax: {
      // direction via normals, radius by inverse cdf
      Point p(amb_);
      double n = 0.0;
      do {
        for (int i = 0; i < amb_; ++i) p[i] = rng.normal();
        n = norm2(p);
      } while (n == 0.0);
      double r = radius_ * std::pow(rng.uniform(), 1.0 / amb_);
      for (int i = 0; i < amb_; ++i) p[i] *= r / n;
      return p;
    }
    case SpaceKind::TriangleUnderF: {
      // rejection from the bounding box [0, 1/a_i]
      Point p(amb_);
      for (;;) {
        for (int i = 0; i < amb_; ++i)
          p[i] = rng.uniform() / region_.coeffs[i];
        if (region_.eval(p) <= 1.0) return p;
      }
    }
    case SpaceKind::GeodesicSphere: {
      if (amb_ == 2) {
        double t = 2.0 * M_PI * rng.uniform();
        return Point{std::cos(t), std::sin(t)};
      }
      double z = 2.0 * rng.uniform() - 1.0;
      double t = 2.0 * M_PI * rng.uniform();
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      return Point{r * std::cos(t), r * std::sin(t), z};
    }
  }
  return Point{};
}

double Space::distance_to_k(const Point& x) const {
  check_dim(*this, x);
  if (k_spec_ == KSpec::FullSpace) return 0.0;
  if (k_spec_ == KSpec::BoundaryOfBody) {
    switch (kind_) {
      case SpaceKind::UnitCube: {
        double m = 1e300;
        for (int i = 0; i < amb_; ++i)
          m = std::min({m, x[i], 1.0 - x[i]});
        return std::max(0.0, m);
      }
      case SpaceKind::Ball:
        return std::max(0.0, radius_ - norm2(x));
      case SpaceKind::ConvexBodyDMax:
        // d_max distance from x to the complement of the body
        return std::sqrt(std::max(0.0, dist_to_complement(x)));
      default:
        throw std::invalid_argument("BoundaryOfBody unsupported for this kind");
    }
  }
  // LevelSetF: Euclidean distance to the hyperplane {F = 1}
  if (kind_ != SpaceKind::TriangleUnderF)
    throw std::invalid_argument("LevelSetF unsupported for this kind");
  double na = 0.0;
  for (double a : region_.coeffs) na += a * a;
  return std::max(0.0, (1.0 - region_.eval(x)) / std::sqrt(na));
}

std::string Space::kind_name() const {
  switch (kind_) {
    case SpaceKind::UnitCube: return "unit-cube";
    case SpaceKind::Ball: return "ball";
    case SpaceKind::TriangleUnderF: return "triangle-under-f";
    case SpaceKind::GeodesicSphere: return "geodesic-sphere";
    case SpaceKind::ConvexBodyDMax: return "convex-body-dmax";
  }
  return "?";
}

std::string Space::k_spec_name() const {
  switch (k_spec_) {
    case KSpec::FullSpace: return "full-space";
    case KSpec::BoundaryOfBody: return "boundary-of-body";
    case KSpec::LevelSetF: return "level-set-f";
  }
  return "?";
}

GrowthReport growth_check(const Space& space, int trials,
                          const std::vector<double>& radii,
                          std::uint64_t seed, int inner_samples) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (radii.empty()) throw std::invalid_argument("radius grid empty");

  GrowthReport rep;
  switch (space.kind()) {
    case SpaceKind::UnitCube:
      rep.declared_kappa = unit_ball_volume(space.dim());
      break;
    case SpaceKind::Ball:
      rep.declared_kappa = std::pow(space.radius(), -space.dim());
      break;
    case SpaceKind::TriangleUnderF: {
      double vol = 1.0;
      for (double a : space.region().coeffs) vol /= a;
      for (int i = 2; i <= space.dim(); ++i) vol /= i;
      rep.declared_kappa = unit_ball_volume(space.dim()) / vol;
      break;
    }
    case SpaceKind::GeodesicSphere:
      rep.declared_kappa = space.dim() == 1 ? 1.0 / M_PI : 0.25;
      break;
    case SpaceKind::ConvexBodyDMax:
      rep.declared_kappa = 0.0;  // implicit constant; report empirical only
      break;
  }

  RandomStream rng(seed, 0);
  std::vector<Point> inner(inner_samples);
  std::vector<double> dists(inner_samples);
  double best = 0.0, best_se = 0.0;
  for (int t = 0; t < trials; ++t) {
    Point x = space.sample(rng);
    for (int i = 0; i < inner_samples; ++i) {
      inner[i] = space.sample(rng);
      dists[i] = space.semimetric(x, inner[i]);
    }
    for (double r : radii) {
      int cnt = 0;
      for (double d : dists)
        if (d <= r) ++cnt;
      double p = static_cast<double>(cnt) / inner_samples;
      double denom = std::pow(r, space.gamma());
      double ratio = p / denom;
      if (ratio > best) {
        best = ratio;
        best_se = std::sqrt(std::max(p * (1.0 - p), 1.0 / inner_samples) /
                            inner_samples) /
                  denom;
      }
    }
  }
  rep.max_ratio = best;
  rep.std_error = best_se;
  rep.flagged = rep.declared_kappa > 0.0 &&
                best > rep.declared_kappa + 3.0 * best_se;
  return rep;
}

}  // namespace stabsim
