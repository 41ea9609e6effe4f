#include "stabsim/geometry.hpp"

#include <algorithm>
#include <limits>

namespace stabsim {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  double detleft = (a.x - c.x) * (b.y - c.y);
  double detright = (a.y - c.y) * (b.x - c.x);
  double det = detleft - detright;
  double detsum = std::abs(detleft) + std::abs(detright);
  // forward error of the double computation
  double errbound = 8.0 * std::numeric_limits<double>::epsilon() * detsum;
  if (det > errbound) return 1;
  if (det < -errbound) return -1;
  long double dl = (static_cast<long double>(a.x) - c.x) *
                       (static_cast<long double>(b.y) - c.y) -
                   (static_cast<long double>(a.y) - c.y) *
                       (static_cast<long double>(b.x) - c.x);
  if (dl > 0) return 1;
  if (dl < 0) return -1;
  return 0;
}

double polygon_area(const Polygon& p) {
  double s = 0.0;
  std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

double polygon_perimeter(const Polygon& p) {
  double s = 0.0;
  std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % n];
    s += std::hypot(b.x - a.x, b.y - a.y);
  }
  return s;
}

Polygon clip_halfplane(const Polygon& poly, double nx, double ny, double c) {
  Polygon out;
  std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    double da = nx * a.x + ny * a.y - c;
    double db = nx * b.x + ny * b.y - c;
    if (da <= 0) out.push_back(a);
    if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
      double t = da / (da - db);
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

Polygon convex_intersect(const Polygon& a, const Polygon& b) {
  Polygon r = a;
  std::size_t n = b.size();
  for (std::size_t i = 0; i < n && !r.empty(); ++i) {
    const Vec2& p = b[i];
    const Vec2& q = b[(i + 1) % n];
    // inside is to the left of (p,q) for ccw b: normal (qy-py, px-qx)
    double nx = q.y - p.y;
    double ny = p.x - q.x;
    double c = nx * p.x + ny * p.y;
    r = clip_halfplane(r, nx, ny, c);
  }
  return r;
}

double polygon_inner_distance(const Polygon& poly, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    // inward normal of edge (a,b) for a ccw polygon
    double nx = a.y - b.y;
    double ny = b.x - a.x;
    double len = std::hypot(nx, ny);
    double d = (nx * (p.x - a.x) + ny * (p.y - a.y)) / len;
    best = std::min(best, d);
  }
  return best;
}

bool polygon_contains(const Polygon& poly, const Vec2& p) {
  return polygon_inner_distance(poly, p) >= 0.0;
}

Polygon make_rect(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

Polygon make_regular_polygon(double cx, double cy, double r, int nverts) {
  Polygon p;
  p.reserve(nverts);
  for (int i = 0; i < nverts; ++i) {
    double t = 2.0 * M_PI * i / nverts;
    p.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
  }
  return p;
}

}  // namespace stabsim
