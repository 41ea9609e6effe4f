#include "stabsim/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stabsim {

namespace {

inline double powq(double d, double q) {
  return q == 0.0 ? 1.0 : std::pow(d, q);
}

double knn_score_impl(std::size_t i, const Configuration& c,
                      const NeighborIndex& idx, int k, double q,
                      bool directed) {
  auto nb = idx.knn(i, k);
  double s = 0.0;
  for (const auto& n : nb) {
    double w = powq(n.dist, q);
    if (!directed && idx.is_neighbor(n.index, i, k)) w *= 0.5;
    s += w;
  }
  return s;
}

}  // namespace

double knn_score(std::size_t i, const Configuration& c, const Space& space,
                 int k, double q, bool directed) {
  if (c.size() < static_cast<std::size_t>(k) + 1)
    throw std::invalid_argument("need at least k+1 points");
  NeighborIndex idx(space, c);
  return knn_score_impl(i, c, idx, k, q, directed);
}

double knn_total(const Configuration& c, const Space& space, int k, double q,
                 bool directed) {
  if (c.size() < static_cast<std::size_t>(k) + 1)
    throw std::invalid_argument("need at least k+1 points");
  NeighborIndex idx(space, c);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    s += knn_score_impl(i, c, idx, k, q, directed);
  return s;
}

double renyi_statistic(const Configuration& c, const Space& space, int k,
                       double q, int m) {
  if (q <= 0.0) throw std::invalid_argument("q must be positive");
  double n = static_cast<double>(c.size());
  return std::pow(n, q / m - 1.0) * knn_total(c, space, k, q, true);
}

// ---- maximal points ----

namespace {

bool dominates(const Point& a, const Point& b) {
  // a dominates b: a >= b coordinatewise and a != b
  bool strict = false;
  for (int j = 0; j < a.dim(); ++j) {
    if (a[j] < b[j]) return false;
    if (a[j] > b[j]) strict = true;
  }
  return strict;
}

}  // namespace

int maximal_score(std::size_t i, const Configuration& c, const Space& space) {
  if (!space.contains(c[i].pt))
    throw std::invalid_argument("point outside region");
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j == i) continue;
    if (dominates(c[j].pt, c[i].pt) || c[j].pt == c[i].pt) return 0;
  }
  return 1;
}

double maximal_total(const Configuration& c, const Space& space) {
  std::size_t n = c.size();
  if (space.ambient_dim() != 2) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += maximal_score(i, c, space);
    return s;
  }
  // d=2 sweep: configuration is sorted lexicographically, walk x descending.
  // A point is maximal iff no point with strictly larger x has y >= its y
  // and no equal-x point above it (within a tie group only the top survives,
  // duplicates kill each other).
  double count = 0.0;
  double maxy = -1e300;
  std::size_t i = n;
  while (i > 0) {
    std::size_t hi = i;  // one past group end
    double x = c[hi - 1].pt[0];
    std::size_t lo = hi;
    while (lo > 0 && c[lo - 1].pt[0] == x) --lo;
    // group [lo, hi): equal x, y ascending; top point is hi-1
    const Point& top = c[hi - 1].pt;
    bool dup = hi - lo >= 2 && c[hi - 2].pt == top;
    if (!dup && top[1] > maxy) count += 1.0;
    maxy = std::max(maxy, top[1]);
    i = lo;
  }
  return count;
}

// ---- marked cliques ----

double clique_effective_radius(const Space& space, double beta, double scale) {
  return beta * std::pow(scale, -1.0 / space.gamma());
}

namespace {

// enumerate all (k+1)-cliques; cb gets the sorted member index list
template <typename Cb>
void enumerate_cliques(const Configuration& c, const Space& space, int k,
                       double r_eff, Cb cb) {
  std::size_t n = c.size();
  if (n < static_cast<std::size_t>(k) + 1) return;
  NeighborIndex idx(space, c);
  // adjacency restricted to higher indices
  std::vector<std::vector<std::size_t>> up(n);
  for (std::size_t i = 0; i < n; ++i) {
    double reach = r_eff * c[i].mark;
    for (std::size_t j : idx.within(c[i].pt, reach, i)) {
      if (j <= i) continue;
      double lim = r_eff * std::min(c[i].mark, c[j].mark);
      if (space.semimetric(c[i].pt, c[j].pt) <= lim) up[i].push_back(j);
    }
  }
  std::vector<std::size_t> cur;
  std::vector<std::size_t> cand;
  auto extend = [&](auto&& self, const std::vector<std::size_t>& cands) -> void {
    if (static_cast<int>(cur.size()) == k + 1) {
      cb(cur);
      return;
    }
    for (std::size_t t = 0; t < cands.size(); ++t) {
      std::size_t v = cands[t];
      // next candidates: cands after t that are adjacent to v
      std::vector<std::size_t> next;
      for (std::size_t u = t + 1; u < cands.size(); ++u) {
        std::size_t w = cands[u];
        if (std::binary_search(up[v].begin(), up[v].end(), w)) next.push_back(w);
      }
      cur.push_back(v);
      self(self, next);
      cur.pop_back();
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    cur.assign(1, i);
    extend(extend, up[i]);
  }
}

// clique owner: member with the largest mark, ties to the largest index
std::size_t clique_owner(const Configuration& c,
                         const std::vector<std::size_t>& members) {
  std::size_t best = members[0];
  for (std::size_t m : members)
    if (c[m].mark > c[best].mark ||
        (c[m].mark == c[best].mark && m > best))
      best = m;
  return best;
}

}  // namespace

double clique_count(const Configuration& c, const Space& space, int k,
                    double beta, double scale) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  double r_eff = clique_effective_radius(space, beta, scale);
  double cnt = 0.0;
  enumerate_cliques(c, space, k, r_eff,
                    [&](const std::vector<std::size_t>&) { cnt += 1.0; });
  return cnt;
}

double clique_score(std::size_t i, const Configuration& c, const Space& space,
                    int k, double beta, double scale) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  double r_eff = clique_effective_radius(space, beta, scale);
  double cnt = 0.0;
  enumerate_cliques(c, space, k, r_eff,
                    [&](const std::vector<std::size_t>& mem) {
                      if (clique_owner(c, mem) == i) cnt += 1.0;
                    });
  return cnt;
}

// ---- ScoreFunctional adapters ----

namespace {

class KnnFunctional final : public ScoreFunctional {
 public:
  KnnFunctional(const Space& space, int k, double q, bool directed)
      : space_(&space), k_(k), qexp_(q), directed_(directed) {
    gamma_ = space.gamma();
  }
  std::string name() const override {
    return directed_ ? "knn-directed" : "knn";
  }
  double q() const override { return qexp_; }
  double total(const Configuration& c) const override {
    return knn_total(c, *space_, k_, qexp_, directed_);
  }
  double score(std::size_t i, const Configuration& c) const override {
    return knn_score(i, c, *space_, k_, qexp_, directed_);
  }

 private:
  const Space* space_;
  int k_;
  double qexp_;
  bool directed_;
};

class MaxPtsFunctional final : public ScoreFunctional {
 public:
  explicit MaxPtsFunctional(const Space& space) : space_(&space) {
    gamma_ = space.gamma();
  }
  std::string name() const override { return "maxpts"; }
  double total(const Configuration& c) const override {
    return maximal_total(c, *space_);
  }
  double score(std::size_t i, const Configuration& c) const override {
    return maximal_score(i, c, *space_);
  }

 private:
  const Space* space_;
};

class CliqueFunctional final : public ScoreFunctional {
 public:
  CliqueFunctional(const Space& space, int k, double beta, double scale)
      : space_(&space), k_(k), beta_(beta), scale_(scale) {
    gamma_ = space.gamma();
  }
  std::string name() const override { return "cliques"; }
  double total(const Configuration& c) const override {
    return clique_count(c, *space_, k_, beta_, scale_);
  }
  double score(std::size_t i, const Configuration& c) const override {
    return clique_score(i, c, *space_, k_, beta_, scale_);
  }

 private:
  const Space* space_;
  int k_;
  double beta_, scale_;
};

enum class VorStat { Vol, SymDiff, Boundary };

class VoronoiFunctional final : public ScoreFunctional {
 public:
  VoronoiFunctional(const Space& space, Polygon body, double scale, VorStat st)
      : body_(std::move(body)), scale_(scale), stat_(st) {
    gamma_ = space.gamma();
    if (space.kind() != SpaceKind::UnitCube || space.dim() != 2)
      throw std::invalid_argument("voronoi needs the planar unit cube");
  }
  std::string name() const override {
    switch (stat_) {
      case VorStat::Vol: return "voronoi-vol";
      case VorStat::SymDiff: return "voronoi-symdiff";
      case VorStat::Boundary: return "voronoi-boundary";
    }
    return "?";
  }
  double total(const Configuration& c) const override {
    VoronoiStats st = voronoi_statistics_2d(c, body_);
    double acc = 0.0;
    const auto& v = raw(st);
    for (double x : v) acc += weight() * x;
    return acc;
  }
  double score(std::size_t i, const Configuration& c) const override {
    VoronoiStats st = voronoi_statistics_2d(c, body_);
    return weight() * raw(st)[i];
  }

 private:
  const std::vector<double>& raw(const VoronoiStats& st) const {
    switch (stat_) {
      case VorStat::Vol: return st.nu_minus;
      case VorStat::SymDiff: return st.nu_plus;
      case VorStat::Boundary: return st.alpha;
    }
    return st.alpha;
  }
  double weight() const {
    // volume scores scale with s, surface scores with s^((d-1)/d)
    return stat_ == VorStat::Boundary ? std::sqrt(scale_) : scale_;
  }
  Polygon body_;
  double scale_;
  VorStat stat_;
};

enum class HullStat { F0, V1, V2 };

class HullFunctional final : public ScoreFunctional {
 public:
  HullFunctional(const Space& space, double body_radius, double scale,
                 HullStat st)
      : body_radius_(body_radius), scale_(scale), stat_(st) {
    gamma_ = space.gamma();
  }
  std::string name() const override {
    switch (stat_) {
      case HullStat::F0: return "hull-f0";
      case HullStat::V1: return "hull-v1";
      case HullStat::V2: return "hull-v2";
    }
    return "?";
  }
  bool has_scores() const override { return stat_ == HullStat::F0; }
  double total(const Configuration& c) const override {
    HullStats st = hull_statistics_2d(c, body_radius_, scale_);
    switch (stat_) {
      case HullStat::F0: return st.hstat_f0;
      case HullStat::V1: return st.hstat_v1;
      case HullStat::V2: return st.hstat_v2;
    }
    return 0.0;
  }
  double score(std::size_t i, const Configuration& c) const override {
    if (stat_ != HullStat::F0)
      throw std::logic_error("intrinsic-volume deficits have no per-point scores");
    Hull2D h = convex_hull_2d(c);
    Vec2 p = to_vec2(c[i].pt);
    for (const Vec2& v : h.vertices)
      if (v.x == p.x && v.y == p.y) return 1.0;
    return 0.0;
  }

 private:
  double body_radius_, scale_;
  HullStat stat_;
};

}  // namespace

std::unique_ptr<ScoreFunctional> make_functional(const std::string& id,
                                                 const FunctionalParams& p,
                                                 const Space& space) {
  if (id == "knn")
    return std::make_unique<KnnFunctional>(space, p.k, p.q, false);
  if (id == "knn-directed")
    return std::make_unique<KnnFunctional>(space, p.k, p.q, true);
  if (id == "maxpts") return std::make_unique<MaxPtsFunctional>(space);
  if (id == "cliques")
    return std::make_unique<CliqueFunctional>(space, p.k, p.beta, p.scale);
  if (id == "voronoi-vol" || id == "voronoi-symdiff" || id == "voronoi-boundary") {
    Polygon body = p.body;
    if (body.empty()) body = make_regular_polygon(0.5, 0.5, 0.25, 64);
    VorStat st = id == "voronoi-vol" ? VorStat::Vol
                 : id == "voronoi-symdiff" ? VorStat::SymDiff
                                           : VorStat::Boundary;
    return std::make_unique<VoronoiFunctional>(space, std::move(body), p.scale, st);
  }
  if (id == "hull-f0" || id == "hull-v1" || id == "hull-v2") {
    HullStat st = id == "hull-f0" ? HullStat::F0
                  : id == "hull-v1" ? HullStat::V1
                                    : HullStat::V2;
    return std::make_unique<HullFunctional>(space, p.body_radius, p.scale, st);
  }
  throw std::invalid_argument("unknown functional id: " + id);
}

}  // namespace stabsim
