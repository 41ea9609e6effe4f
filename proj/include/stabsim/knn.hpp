#pragma once

#include <cstddef>
#include <vector>

#include "stabsim/process.hpp"

namespace stabsim {

struct Neighbor {
  double dist = 0.0;
  std::size_t index = 0;
};

// k-nearest-neighbor queries over one configuration. Ties are broken by
// (distance, index); results match the brute-force scan bit for bit.
// Euclidean kinds in d <= 3 use a uniform cell grid; other semimetrics
// fall back to a full scan.
class NeighborIndex {
 public:
  NeighborIndex(const Space& space, const Configuration& config);

  std::size_t size() const { return n_; }

  // k nearest neighbors of config[i], excluding i itself
  std::vector<Neighbor> knn(std::size_t i, int k) const;

  // k nearest neighbors of an arbitrary point (no exclusion)
  std::vector<Neighbor> knn_of_point(const Point& x, int k) const;

  // true iff j is among the k nearest neighbors of i
  bool is_neighbor(std::size_t i, std::size_t j, int k) const;

  // indices j != exclude with semimetric(x, pt_j) <= r, ascending by index
  std::vector<std::size_t> within(const Point& x, double r,
                                  std::size_t exclude = static_cast<std::size_t>(-1)) const;

 private:
  void query(const Point& x, int k, std::size_t exclude,
             std::vector<Neighbor>& out) const;
  void query_brute(const Point& x, int k, std::size_t exclude,
                   std::vector<Neighbor>& out) const;
  void query_grid(const Point& x, int k, std::size_t exclude,
                  std::vector<Neighbor>& out) const;

  const Space* space_;
  const Configuration* config_;
  std::size_t n_ = 0;
  bool use_grid_ = false;
  int dim_ = 0;

  // grid data
  std::array<double, 3> lo_{}, cell_{};
  std::array<int, 3> ncell_{};
  std::vector<int> cell_start_;   // CSR offsets, size ncells+1
  std::vector<std::size_t> cell_pts_;  // point indices grouped by cell
  int cell_of(const Point& x, std::array<int, 3>& cc) const;
};

}  // namespace stabsim
