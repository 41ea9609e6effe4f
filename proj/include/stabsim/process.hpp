#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stabsim/space.hpp"

namespace stabsim {

struct MarkedPoint {
  Point pt;
  double mark = 1.0;
};

inline bool marked_less(const MarkedPoint& a, const MarkedPoint& b) {
  if (a.pt < b.pt) return true;
  if (b.pt < a.pt) return false;
  return a.mark < b.mark;
}

// Finite ordered multiset of marked points. Immutable value; iteration
// order is the lexicographic (coords, mark) comparator order.
class Configuration {
 public:
  Configuration() = default;
  static Configuration from_unsorted(std::vector<MarkedPoint> pts);

  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  const MarkedPoint& operator[](std::size_t i) const { return pts_[i]; }
  const std::vector<MarkedPoint>& items() const { return pts_; }

  // returns a new configuration; at most 8 extras per the add-set contract
  Configuration inserted(std::span<const MarkedPoint> extras) const;
  Configuration inserted(const MarkedPoint& extra) const;

  // points of *this within semimetric distance <= radius of center,
  // center itself always kept if present
  Configuration restricted_to_ball(const Space& space, const Point& center,
                                   double radius) const;

  Configuration erased(std::size_t index) const;

 private:
  std::vector<MarkedPoint> pts_;  // always sorted by marked_less
};

enum class MarkKind { Dirac, HalfNormal, Exponentialized };

struct MarkDistribution {
  MarkKind kind = MarkKind::Dirac;
  double sigma = 1.0;  // HalfNormal
  double c1 = 1.0, c2 = 1.0;  // Exponentialized: M = (c1 E)^(1/c2), E ~ Exp(1)
  static MarkDistribution dirac() { return {}; }
  static MarkDistribution half_normal(double sigma);
  static MarkDistribution exponentialized(double c1, double c2);
  double sample(RandomStream& rng) const;
};

Configuration sample_poisson(const Space& space, double s,
                             const MarkDistribution& marks, RandomStream& rng);
Configuration sample_binomial(const Space& space, std::size_t n,
                              const MarkDistribution& marks, RandomStream& rng);

std::string configuration_to_csv(const Configuration& c);
Configuration configuration_from_csv(const std::string& text);

}  // namespace stabsim
