#include "stabsim/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stabsim {

namespace {

struct Cand {
  double sq;
  std::size_t index;
  bool operator<(const Cand& o) const {
    return sq < o.sq || (sq == o.sq && index < o.index);
  }
};

// insert into a size-capped sorted candidate list
inline void push_cand(std::vector<Cand>& best, int k, const Cand& c) {
  if (static_cast<int>(best.size()) == k && !(c < best.back())) return;
  auto it = std::lower_bound(best.begin(), best.end(), c);
  best.insert(it, c);
  if (static_cast<int>(best.size()) > k) best.pop_back();
}

}  // namespace

NeighborIndex::NeighborIndex(const Space& space, const Configuration& config)
    : space_(&space), config_(&config), n_(config.size()) {
  bool euclidean = space.kind() == SpaceKind::UnitCube ||
                   space.kind() == SpaceKind::Ball ||
                   space.kind() == SpaceKind::TriangleUnderF;
  dim_ = space.ambient_dim();
  use_grid_ = euclidean && dim_ <= 3 && n_ >= 32;
  if (!use_grid_) return;

  std::array<double, 3> hi{};
  for (int a = 0; a < dim_; ++a) {
    lo_[a] = std::numeric_limits<double>::infinity();
    hi[a] = -std::numeric_limits<double>::infinity();
  }
  for (std::size_t i = 0; i < n_; ++i)
    for (int a = 0; a < dim_; ++a) {
      lo_[a] = std::min(lo_[a], config[i].pt[a]);
      hi[a] = std::max(hi[a], config[i].pt[a]);
    }
  int per_axis = std::max(
      1, static_cast<int>(std::floor(std::pow(static_cast<double>(n_),
                                              1.0 / dim_))));
  int ncells = 1;
  for (int a = 0; a < dim_; ++a) {
    ncell_[a] = per_axis;
    double w = hi[a] - lo_[a];
    cell_[a] = w > 0 ? w / per_axis : 1.0;
    ncells *= per_axis;
  }
  std::vector<int> counts(ncells, 0);
  std::vector<int> cidx(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::array<int, 3> cc;
    cidx[i] = cell_of(config[i].pt, cc);
    ++counts[cidx[i]];
  }
  cell_start_.assign(ncells + 1, 0);
  for (int c = 0; c < ncells; ++c) cell_start_[c + 1] = cell_start_[c] + counts[c];
  cell_pts_.resize(n_);
  std::vector<int> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < n_; ++i) cell_pts_[fill[cidx[i]]++] = i;
}

int NeighborIndex::cell_of(const Point& x, std::array<int, 3>& cc) const {
  int id = 0;
  for (int a = 0; a < dim_; ++a) {
    int c = static_cast<int>((x[a] - lo_[a]) / cell_[a]);
    c = std::clamp(c, 0, ncell_[a] - 1);
    cc[a] = c;
    id = id * ncell_[a] + c;
  }
  return id;
}

void NeighborIndex::query_brute(const Point& x, int k, std::size_t exclude,
                                std::vector<Neighbor>& out) const {
  std::vector<Cand> best;
  best.reserve(k + 1);
  const auto& cfg = *config_;
  bool euclidean = use_grid_ || space_->kind() == SpaceKind::UnitCube ||
                   space_->kind() == SpaceKind::Ball ||
                   space_->kind() == SpaceKind::TriangleUnderF;
  for (std::size_t j = 0; j < n_; ++j) {
    if (j == exclude) continue;
    double d = euclidean ? sqdist(x, cfg[j].pt)
                         : space_->semimetric(x, cfg[j].pt);
    push_cand(best, k, {d, j});
  }
  out.resize(best.size());
  for (std::size_t i = 0; i < best.size(); ++i)
    out[i] = {euclidean ? std::sqrt(best[i].sq) : best[i].sq, best[i].index};
}

void NeighborIndex::query_grid(const Point& x, int k, std::size_t exclude,
                               std::vector<Neighbor>& out) const {
  const auto& cfg = *config_;
  std::array<int, 3> cc;
  cell_of(x, cc);
  std::vector<Cand> best;
  best.reserve(k + 1);
  double min_side = cell_[0];
  for (int a = 1; a < dim_; ++a) min_side = std::min(min_side, cell_[a]);

  int max_ring = 0;
  for (int a = 0; a < dim_; ++a) max_ring = std::max(max_ring, ncell_[a]);

  auto scan_cell = [&](const std::array<int, 3>& c) {
    int id = 0;
    for (int a = 0; a < dim_; ++a) {
      if (c[a] < 0 || c[a] >= ncell_[a]) return;
      id = id * ncell_[a] + c[a];
    }
    // prune by distance from x to the cell box
    if (static_cast<int>(best.size()) == k) {
      double bd = 0.0;
      for (int a = 0; a < dim_; ++a) {
        double clo = lo_[a] + c[a] * cell_[a];
        double chi = clo + cell_[a];
        double g = x[a] < clo ? clo - x[a] : (x[a] > chi ? x[a] - chi : 0.0);
        bd += g * g;
      }
      if (bd > best.back().sq) return;
    }
    for (int t = cell_start_[id]; t < cell_start_[id + 1]; ++t) {
      std::size_t j = cell_pts_[t];
      if (j == exclude) continue;
      push_cand(best, k, {sqdist(x, cfg[j].pt), j});
    }
  };

  for (int ring = 0; ring <= max_ring; ++ring) {
    if (static_cast<int>(best.size()) == k && ring > 0) {
      double lb = (ring - 1) * min_side;
      if (lb * lb > best.back().sq) break;
    }
    // all cells at Chebyshev distance == ring from cc
    std::array<int, 3> c{};
    if (dim_ == 1) {
      if (ring == 0) {
        c[0] = cc[0];
        scan_cell(c);
      } else {
        c[0] = cc[0] - ring; scan_cell(c);
        c[0] = cc[0] + ring; scan_cell(c);
      }
    } else if (dim_ == 2) {
      for (int dx = -ring; dx <= ring; ++dx)
        for (int dy = -ring; dy <= ring; ++dy) {
          if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
          c[0] = cc[0] + dx;
          c[1] = cc[1] + dy;
          scan_cell(c);
        }
    } else {
      for (int dx = -ring; dx <= ring; ++dx)
        for (int dy = -ring; dy <= ring; ++dy)
          for (int dz = -ring; dz <= ring; ++dz) {
            if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring)
              continue;
            c[0] = cc[0] + dx;
            c[1] = cc[1] + dy;
            c[2] = cc[2] + dz;
            scan_cell(c);
          }
    }
  }
  out.resize(best.size());
  for (std::size_t i = 0; i < best.size(); ++i)
    out[i] = {std::sqrt(best[i].sq), best[i].index};
}

void NeighborIndex::query(const Point& x, int k, std::size_t exclude,
                          std::vector<Neighbor>& out) const {
  std::size_t avail = n_ - (exclude < n_ ? 1 : 0);
  if (static_cast<std::size_t>(k) > avail)
    throw std::invalid_argument("too few points for k neighbors");
  if (use_grid_)
    query_grid(x, k, exclude, out);
  else
    query_brute(x, k, exclude, out);
}

std::vector<Neighbor> NeighborIndex::knn(std::size_t i, int k) const {
  std::vector<Neighbor> out;
  query((*config_)[i].pt, k, i, out);
  return out;
}

std::vector<Neighbor> NeighborIndex::knn_of_point(const Point& x, int k) const {
  std::vector<Neighbor> out;
  query(x, k, static_cast<std::size_t>(-1), out);
  return out;
}

std::vector<std::size_t> NeighborIndex::within(const Point& x, double r,
                                               std::size_t exclude) const {
  std::vector<std::size_t> out;
  const auto& cfg = *config_;
  if (!use_grid_) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == exclude) continue;
      if (space_->semimetric(x, cfg[j].pt) <= r) out.push_back(j);
    }
    return out;
  }
  double r2 = r * r;
  std::array<int, 3> clo, chi;
  for (int a = 0; a < dim_; ++a) {
    clo[a] = std::clamp(
        static_cast<int>(std::floor((x[a] - r - lo_[a]) / cell_[a])), 0,
        ncell_[a] - 1);
    chi[a] = std::clamp(
        static_cast<int>(std::floor((x[a] + r - lo_[a]) / cell_[a])), 0,
        ncell_[a] - 1);
  }
  std::array<int, 3> c{};
  auto scan = [&](int id) {
    for (int t = cell_start_[id]; t < cell_start_[id + 1]; ++t) {
      std::size_t j = cell_pts_[t];
      if (j == exclude) continue;
      if (sqdist(x, cfg[j].pt) <= r2) out.push_back(j);
    }
  };
  if (dim_ == 1) {
    for (c[0] = clo[0]; c[0] <= chi[0]; ++c[0]) scan(c[0]);
  } else if (dim_ == 2) {
    for (c[0] = clo[0]; c[0] <= chi[0]; ++c[0])
      for (c[1] = clo[1]; c[1] <= chi[1]; ++c[1])
        scan(c[0] * ncell_[1] + c[1]);
  } else {
    for (c[0] = clo[0]; c[0] <= chi[0]; ++c[0])
      for (c[1] = clo[1]; c[1] <= chi[1]; ++c[1])
        for (c[2] = clo[2]; c[2] <= chi[2]; ++c[2])
          scan((c[0] * ncell_[1] + c[1]) * ncell_[2] + c[2]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool NeighborIndex::is_neighbor(std::size_t i, std::size_t j, int k) const {
  auto nb = knn(i, k);
  for (const auto& c : nb)
    if (c.index == j) return true;
  return false;
}

}  // namespace stabsim
