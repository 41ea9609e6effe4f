#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace stabsim {

constexpr int kMaxDim = 5;

// Small fixed-capacity point; dim <= 5 by design.
class Point {
 public:
  Point() = default;
  explicit Point(int dim) : dim_(dim) {}
  Point(std::initializer_list<double> cs) {
    dim_ = 0;
    for (double c : cs) c_[dim_++] = c;
  }
  int dim() const { return dim_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  // lexicographic order on coordinates
  friend bool operator<(const Point& a, const Point& b) {
    for (int i = 0; i < a.dim_ && i < b.dim_; ++i) {
      if (a.c_[i] < b.c_[i]) return true;
      if (a.c_[i] > b.c_[i]) return false;
    }
    return a.dim_ < b.dim_;
  }

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

inline double sqdist(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double euclid(const Point& a, const Point& b) {
  return std::sqrt(sqdist(a, b));
}

inline double norm2(const Point& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

inline double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

// 2-D helpers

struct Vec2 {
  double x = 0.0, y = 0.0;
};

inline Vec2 to_vec2(const Point& p) { return {p[0], p[1]}; }
inline Point to_point(const Vec2& v) { return Point{v.x, v.y}; }

inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Orientation of (a,b,c): +1 ccw, -1 cw, 0 collinear.
// Double evaluation with forward error bound; long double fallback
// near the decision boundary keeps degenerate inputs deterministic.
int orientation(const Vec2& a, const Vec2& b, const Vec2& c);

// Convex polygon utilities. Polygons are ccw vertex lists.
using Polygon = std::vector<Vec2>;

double polygon_area(const Polygon& p);
double polygon_perimeter(const Polygon& p);

// Clip polygon by half-plane {v : dot(v, n) <= c}. Result stays convex.
Polygon clip_halfplane(const Polygon& poly, double nx, double ny, double c);

// Intersection of two convex polygons (clips a by every edge of b).
Polygon convex_intersect(const Polygon& a, const Polygon& b);

// Signed distance from point to convex polygon boundary (>0 inside).
double polygon_inner_distance(const Polygon& poly, const Vec2& p);

bool polygon_contains(const Polygon& poly, const Vec2& p);

Polygon make_rect(double x0, double y0, double x1, double y1);
Polygon make_regular_polygon(double cx, double cy, double r, int nverts);

}  // namespace stabsim
