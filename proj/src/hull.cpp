#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stabsim/functionals.hpp"

namespace stabsim {

Hull2D convex_hull_2d(const Configuration& c) {
  std::vector<Vec2> pts;
  pts.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) pts.push_back(to_vec2(c[i].pt));
  // configuration order is lexicographic already, but dedup needs equality
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());

  Hull2D h;
  std::size_t n = pts.size();
  if (n <= 2) {
    h.vertices = pts;
    h.f0 = static_cast<int>(n);
    h.f1 = n == 2 ? 1 : 0;
    h.degenerate = true;
    if (n == 2)
      h.perimeter = 2.0 * std::hypot(pts[1].x - pts[0].x, pts[1].y - pts[0].y);
    return h;
  }

  // monotone chain, strict turns only (collinear points dropped)
  std::vector<Vec2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && orientation(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && orientation(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point equals the first

  if (hull.size() < 3) {
    // all points collinear: extremes of the segment
    h.vertices = {pts.front(), pts.back()};
    h.f0 = 2;
    h.f1 = 1;
    h.degenerate = true;
    h.perimeter = 2.0 * std::hypot(pts.back().x - pts.front().x,
                                   pts.back().y - pts.front().y);
    return h;
  }
  h.vertices = std::move(hull);
  h.f0 = static_cast<int>(h.vertices.size());
  h.f1 = h.f0;
  h.area = polygon_area(h.vertices);
  h.perimeter = polygon_perimeter(h.vertices);
  return h;
}

HullStats hull_statistics_2d(const Configuration& c, double body_radius,
                             double scale) {
  HullStats st;
  st.hull = convex_hull_2d(c);
  double v1_body = M_PI * body_radius;  // half of the circumference 2*pi*r
  double v2_body = M_PI * body_radius * body_radius;
  st.hstat_v1 = scale * (v1_body - 0.5 * st.hull.perimeter);
  st.hstat_v2 = scale * (v2_body - st.hull.area);
  st.hstat_f0 = st.hull.f0;
  st.flagged = st.hull.degenerate ||
               !polygon_contains(st.hull.vertices, Vec2{0.0, 0.0}) ||
               polygon_inner_distance(st.hull.vertices, Vec2{0.0, 0.0}) <= 0.0;
  return st;
}

}  // namespace stabsim
