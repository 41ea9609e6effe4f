#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "stabsim/geometry.hpp"
#include "stabsim/rng.hpp"

namespace stabsim {

enum class SpaceKind { UnitCube, Ball, TriangleUnderF, GeodesicSphere, ConvexBodyDMax };
enum class KSpec { FullSpace, BoundaryOfBody, LevelSetF };

// Linear level function F(x) = sum a_i x_i on [0, inf)^d; region is {F <= 1}.
struct RegionF {
  std::vector<double> coeffs;  // all > 0
  double eval(const Point& x) const {
    double s = 0.0;
    for (int i = 0; i < x.dim(); ++i) s += coeffs[i] * x[i];
    return s;
  }
};

// Immutable sample space (X, d, Q): kind, exponent gamma, K-spec.
// Q is always the uniform probability measure on X.
class Space {
 public:
  static Space unit_cube(int d, KSpec k = KSpec::FullSpace);
  static Space ball(int d, double radius = 1.0, KSpec k = KSpec::FullSpace);
  static Space triangle_under_f(int d, std::vector<double> coeffs,
                                KSpec k = KSpec::LevelSetF);
  static Space geodesic_sphere(int m);
  static Space convex_body_dmax();  // unit disk body, gamma = d+1 = 3

  SpaceKind kind() const { return kind_; }
  KSpec k_spec() const { return k_spec_; }
  int dim() const { return dim_; }          // intrinsic dimension d (or m)
  int ambient_dim() const { return amb_; }  // coordinate count
  double gamma() const { return gamma_; }
  double radius() const { return radius_; }
  const RegionF& region() const { return region_; }

  bool contains(const Point& x) const;
  double semimetric(const Point& x, const Point& y) const;
  Point sample(RandomStream& rng) const;
  double distance_to_k(const Point& x) const;

  // d_max helper: distance from x to the complement of the disk body
  double dist_to_complement(const Point& x) const;

  std::string kind_name() const;
  std::string k_spec_name() const;

 private:
  Space() = default;
  SpaceKind kind_ = SpaceKind::UnitCube;
  KSpec k_spec_ = KSpec::FullSpace;
  int dim_ = 2;
  int amb_ = 2;
  double gamma_ = 2.0;
  double radius_ = 1.0;
  RegionF region_;
};

struct GrowthReport {
  double max_ratio = 0.0;
  double declared_kappa = 0.0;  // 0 if no kappa is declared for this kind
  double std_error = 0.0;
  bool flagged = false;  // max_ratio > kappa + 3 SE
};

// MC estimate of sup_{x,r} Q(B(x,r)) / r^gamma over sampled centers
// and the given radius grid.
GrowthReport growth_check(const Space& space, int trials,
                          const std::vector<double>& radii,
                          std::uint64_t seed = 1, int inner_samples = 20000);

}  // namespace stabsim
