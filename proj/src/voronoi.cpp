#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stabsim/functionals.hpp"

namespace stabsim {

namespace {

// clip `cell` by the bisector halfplane between g and y (keep g side),
// tagging new edges with the neighbor id
struct TaggedPoly {
  Polygon verts;
  std::vector<long> tag;  // edge i = (verts[i], verts[i+1]); -1 = square edge
};

void clip_bisector(TaggedPoly& cell, const Vec2& g, const Vec2& y, long nid) {
  double nx = y.x - g.x;
  double ny = y.y - g.y;
  double cc = nx * 0.5 * (g.x + y.x) + ny * 0.5 * (g.y + y.y);
  std::size_t n = cell.verts.size();
  Polygon nv;
  std::vector<long> nt;
  nv.reserve(n + 1);
  nt.reserve(n + 1);
  long pending_tag = -2;  // tag for the edge that starts at an entry vertex
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = cell.verts[i];
    const Vec2& b = cell.verts[(i + 1) % n];
    double da = nx * a.x + ny * a.y - cc;
    double db = nx * b.x + ny * b.y - cc;
    if (da <= 0) {
      nv.push_back(a);
      nt.push_back(cell.tag[i]);
    }
    if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
      double t = da / (da - db);
      Vec2 p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
      if (da < 0) {
        // exiting: the edge from p runs along the bisector
        nv.push_back(p);
        nt.push_back(nid);
      } else {
        // entering: edge from p continues the original edge
        nv.push_back(p);
        nt.push_back(cell.tag[i]);
      }
    }
  }
  (void)pending_tag;
  cell.verts = std::move(nv);
  cell.tag = std::move(nt);
}

double max_sqdist_to_vertices(const TaggedPoly& cell, const Vec2& g) {
  double m = 0.0;
  for (const Vec2& v : cell.verts) {
    double dx = v.x - g.x, dy = v.y - g.y;
    m = std::max(m, dx * dx + dy * dy);
  }
  return m;
}

}  // namespace

VoronoiCell2D voronoi_cell_2d(std::size_t i, const Configuration& c,
                              const NeighborIndex& index) {
  const Vec2 g = to_vec2(c[i].pt);
  TaggedPoly cell;
  cell.verts = make_rect(0.0, 0.0, 1.0, 1.0);
  cell.tag.assign(4, -1);

  std::size_t n = c.size();
  // candidates in increasing distance; security radius early exit
  int kk = std::min<std::size_t>(8, n - 1);
  std::size_t done = 0;
  while (done < n - 1) {
    auto nb = index.knn(i, kk);
    bool complete = false;
    for (std::size_t t = done; t < nb.size(); ++t) {
      double maxv = max_sqdist_to_vertices(cell, g);
      double half = nb[t].dist * 0.5;
      if (half * half > maxv) {
        complete = true;
        break;
      }
      clip_bisector(cell, g, to_vec2(c[nb[t].index].pt),
                    static_cast<long>(nb[t].index));
    }
    if (complete || static_cast<std::size_t>(kk) >= n - 1) break;
    done = nb.size();
    kk = std::min<std::size_t>(static_cast<std::size_t>(kk) * 2, n - 1);
  }
  VoronoiCell2D out;
  out.generator = c[i].pt;
  out.polygon = std::move(cell.verts);
  out.edge_neighbor = std::move(cell.tag);
  return out;
}

VoronoiStats voronoi_statistics_2d(const Configuration& c, const Polygon& body) {
  if (c.empty()) throw std::invalid_argument("empty configuration");
  for (const Vec2& v : body)
    if (v.x <= 0.0 || v.x >= 1.0 || v.y <= 0.0 || v.y >= 1.0)
      throw std::invalid_argument("body must lie in the open unit square");

  std::size_t n = c.size();
  Space sq = Space::unit_cube(2);
  NeighborIndex index(sq, c);

  std::vector<char> in_a(n);
  for (std::size_t i = 0; i < n; ++i)
    in_a[i] = polygon_contains(body, to_vec2(c[i].pt)) ? 1 : 0;

  VoronoiStats st;
  st.nu_minus.resize(n);
  st.nu_plus.resize(n);
  st.alpha.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    VoronoiCell2D cell = voronoi_cell_2d(i, c, index);
    double cell_area = polygon_area(cell.polygon);
    double in_body = polygon_area(convex_intersect(cell.polygon, body));
    double outside = cell_area - in_body;
    if (in_a[i]) {
      st.nu_minus[i] = outside;
      st.nu_plus[i] = outside;
      st.vol += cell_area;
      // boundary faces: edges whose far side is not in A(X)
      std::size_t m = cell.polygon.size();
      for (std::size_t e = 0; e < m; ++e) {
        long nb = cell.edge_neighbor[e];
        bool bdry = nb < 0 || !in_a[static_cast<std::size_t>(nb)];
        if (bdry) {
          const Vec2& a = cell.polygon[e];
          const Vec2& b = cell.polygon[(e + 1) % m];
          st.alpha[i] += std::hypot(b.x - a.x, b.y - a.y);
        }
      }
      st.boundary_len += st.alpha[i];
    } else {
      st.nu_minus[i] = -in_body;
      st.nu_plus[i] = in_body;
    }
    st.symdiff += st.nu_plus[i];
  }
  return st;
}

}  // namespace stabsim
