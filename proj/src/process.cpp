#include "stabsim/process.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stabsim {

Configuration Configuration::from_unsorted(std::vector<MarkedPoint> pts) {
  Configuration c;
  std::sort(pts.begin(), pts.end(), marked_less);
  c.pts_ = std::move(pts);
  return c;
}

Configuration Configuration::inserted(std::span<const MarkedPoint> extras) const {
  if (extras.size() > 8)
    throw std::invalid_argument("at most 8 extra points may be inserted");
  std::vector<MarkedPoint> add(extras.begin(), extras.end());
  std::sort(add.begin(), add.end(), marked_less);
  Configuration out;
  out.pts_.resize(pts_.size() + add.size());
  std::merge(pts_.begin(), pts_.end(), add.begin(), add.end(),
             out.pts_.begin(), marked_less);
  return out;
}

Configuration Configuration::inserted(const MarkedPoint& extra) const {
  return inserted(std::span<const MarkedPoint>(&extra, 1));
}

Configuration Configuration::restricted_to_ball(const Space& space,
                                                const Point& center,
                                                double radius) const {
  Configuration out;
  out.pts_.reserve(pts_.size());
  for (const auto& mp : pts_) {
    if (mp.pt == center || space.semimetric(center, mp.pt) <= radius)
      out.pts_.push_back(mp);
  }
  return out;  // order preserved; subsequence of a sorted list
}

Configuration Configuration::erased(std::size_t index) const {
  Configuration out;
  out.pts_ = pts_;
  out.pts_.erase(out.pts_.begin() + index);
  return out;
}

MarkDistribution MarkDistribution::half_normal(double sigma) {
  MarkDistribution m;
  m.kind = MarkKind::HalfNormal;
  m.sigma = sigma;
  return m;
}

MarkDistribution MarkDistribution::exponentialized(double c1, double c2) {
  if (c1 < 1.0 || c2 <= 0.0)
    throw std::invalid_argument("need c1 >= 1 and c2 > 0 for the tail bound");
  MarkDistribution m;
  m.kind = MarkKind::Exponentialized;
  m.c1 = c1;
  m.c2 = c2;
  return m;
}

double MarkDistribution::sample(RandomStream& rng) const {
  switch (kind) {
    case MarkKind::Dirac:
      return 1.0;
    case MarkKind::HalfNormal:
      return sigma * std::abs(rng.normal());
    case MarkKind::Exponentialized:
      // P(M >= r) = exp(-r^c2 / c1) <= c1 exp(-r^c2 / c1) since c1 >= 1
      return std::pow(c1 * rng.exponential(), 1.0 / c2);
  }
  return 1.0;
}

namespace {

std::size_t poisson_count(double mean, RandomStream& rng) {
  if (mean > 1e6) throw std::invalid_argument("poisson mean > 1e6 rejected");
  // count of unit-exponential arrivals before `mean`
  std::size_t n = 0;
  double t = rng.exponential();
  while (t <= mean) {
    ++n;
    t += rng.exponential();
  }
  return n;
}

}  // namespace

Configuration sample_poisson(const Space& space, double s,
                             const MarkDistribution& marks, RandomStream& rng) {
  if (s <= 0) throw std::invalid_argument("intensity must be positive");
  return sample_binomial(space, poisson_count(s, rng), marks, rng);
}

Configuration sample_binomial(const Space& space, std::size_t n,
                              const MarkDistribution& marks, RandomStream& rng) {
  std::vector<MarkedPoint> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i].pt = space.sample(rng);
    pts[i].mark = marks.sample(rng);
  }
  return Configuration::from_unsorted(std::move(pts));
}

std::string configuration_to_csv(const Configuration& c) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& mp = c[i];
    for (int j = 0; j < mp.pt.dim(); ++j) os << mp.pt[j] << ",";
    os << mp.mark << "\n";
  }
  return os.str();
}

Configuration configuration_from_csv(const std::string& text) {
  std::vector<MarkedPoint> pts;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() < 2 || vals.size() > kMaxDim + 1)
      throw std::invalid_argument("bad csv row");
    MarkedPoint mp;
    mp.pt = Point(static_cast<int>(vals.size()) - 1);
    for (std::size_t j = 0; j + 1 < vals.size(); ++j)
      mp.pt[static_cast<int>(j)] = vals[j];
    mp.mark = vals.back();
    pts.push_back(mp);
  }
  return Configuration::from_unsorted(std::move(pts));
}

}  // namespace stabsim
