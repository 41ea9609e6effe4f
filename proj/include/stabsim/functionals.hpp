#pragma once

#include <memory>
#include <optional>
#include <string>

#include "stabsim/knn.hpp"
#include "stabsim/process.hpp"

namespace stabsim {

// Uniform contract for a score family: per-point scores and the total
// statistic. total(C) == sum of score(i, C) within 1e-9 relative for
// every family that exposes scores.
class ScoreFunctional {
 public:
  virtual ~ScoreFunctional() = default;
  virtual std::string name() const = 0;
  virtual double total(const Configuration& c) const = 0;
  // families computed only as a whole (hull-v1/v2) expose no scores
  virtual bool has_scores() const { return true; }
  virtual double score(std::size_t i, const Configuration& c) const = 0;
  virtual double gamma() const { return gamma_; }
  virtual double q() const { return 0.0; }

 protected:
  double gamma_ = 2.0;
};

struct FunctionalParams {
  int k = 1;
  double q = 0.0;
  bool directed = false;
  double beta = 1.0;
  double scale = 1.0;  // the intensity-like parameter s in scaled statistics
  Polygon body;        // voronoi body A (convex polygon inside the unit square)
  double body_radius = 1.0;  // hull body: disk of this radius at the origin
};

// ids: knn, knn-directed, maxpts, voronoi-vol, voronoi-symdiff,
// voronoi-boundary, hull-f0, hull-v1, hull-v2, cliques
std::unique_ptr<ScoreFunctional> make_functional(const std::string& id,
                                                 const FunctionalParams& params,
                                                 const Space& space);

// ---- knn ----

double knn_score(std::size_t i, const Configuration& c, const Space& space,
                 int k, double q, bool directed);
double knn_total(const Configuration& c, const Space& space, int k, double q,
                 bool directed);

// n^(q/m - 1) times the directed total edge length power sum; q > 0
double renyi_statistic(const Configuration& c, const Space& space, int k,
                       double q, int m);

// ---- maximal points ----

// 1 iff no other point dominates c[i] coordinatewise
int maximal_score(std::size_t i, const Configuration& c, const Space& space);
double maximal_total(const Configuration& c, const Space& space);

// ---- voronoi (d = 2, X = unit square) ----

struct VoronoiCell2D {
  Point generator;
  Polygon polygon;
  // neighbor generator index per polygon edge; -1 for edges on the
  // boundary of the square
  std::vector<long> edge_neighbor;
};

VoronoiCell2D voronoi_cell_2d(std::size_t i, const Configuration& c,
                              const NeighborIndex& index);

struct VoronoiStats {
  double vol = 0.0;          // Vol(A(X))
  double symdiff = 0.0;      // Vol(A delta A(X))
  double boundary_len = 0.0; // H^1 of the boundary of A(X)
  std::vector<double> nu_minus, nu_plus, alpha;  // raw per-point scores
};

VoronoiStats voronoi_statistics_2d(const Configuration& c, const Polygon& body);

// ---- convex hull (d = 2) ----

struct Hull2D {
  Polygon vertices;  // ccw, strictly convex after dedup
  int f0 = 0, f1 = 0;
  double area = 0.0, perimeter = 0.0;
  bool degenerate = false;
};

Hull2D convex_hull_2d(const Configuration& c);

struct HullStats {
  Hull2D hull;
  double hstat_v1 = 0.0;  // scale * (V1(A) - V1(hull)), V1 = perimeter/2
  double hstat_v2 = 0.0;  // scale * (V2(A) - V2(hull)), V2 = area
  double hstat_f0 = 0.0;
  bool flagged = false;  // origin not interior to the hull
};

HullStats hull_statistics_2d(const Configuration& c, double body_radius,
                             double scale);

// ---- marked cliques ----

// count of (k+1)-cliques of the graph with edge iff
// d(x,y) <= beta * scale^(-1/gamma) * min(mark_x, mark_y)
double clique_count(const Configuration& c, const Space& space, int k,
                    double beta, double scale);
// cliques containing i in which i carries the largest mark
// (ties broken by configuration order)
double clique_score(std::size_t i, const Configuration& c, const Space& space,
                    int k, double beta, double scale);

double clique_effective_radius(const Space& space, double beta, double scale);

}  // namespace stabsim
