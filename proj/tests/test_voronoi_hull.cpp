#include <doctest.h>

#include <cmath>

#include "stabsim/functionals.hpp"

using namespace stabsim;

namespace {

Configuration config_of(std::vector<Point> pts) {
  std::vector<MarkedPoint> mps;
  for (auto& p : pts) mps.push_back({p, 1.0});
  return Configuration::from_unsorted(std::move(mps));
}

// independent cell oracle: clip the unit square against every bisector,
// no pruning, using only the generic half-plane clipper
Polygon brute_cell(const Configuration& c, std::size_t i) {
  Polygon cell = make_rect(0, 0, 1, 1);
  Vec2 g = to_vec2(c[i].pt);
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j == i) continue;
    Vec2 y = to_vec2(c[j].pt);
    double nx = y.x - g.x, ny = y.y - g.y;
    double cc = nx * 0.5 * (g.x + y.x) + ny * 0.5 * (g.y + y.y);
    cell = clip_halfplane(cell, nx, ny, cc);
  }
  return cell;
}

// independent hull oracle: gift wrapping from the lowest point
Polygon brute_hull(const Configuration& c) {
  std::vector<Vec2> pts;
  for (const auto& mp : c.items()) pts.push_back(to_vec2(mp.pt));
  std::size_t start = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].y < pts[start].y ||
        (pts[i].y == pts[start].y && pts[i].x < pts[start].x))
      start = i;
  Polygon hull;
  std::size_t cur = start;
  do {
    hull.push_back(pts[cur]);
    std::size_t next = (cur + 1) % pts.size();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == cur) continue;
      int o = orientation(pts[cur], pts[next], pts[j]);
      double dn = std::hypot(pts[next].x - pts[cur].x, pts[next].y - pts[cur].y);
      double dj = std::hypot(pts[j].x - pts[cur].x, pts[j].y - pts[cur].y);
      if (o < 0 || (o == 0 && dj > dn)) next = j;
    }
    cur = next;
  } while (cur != start && hull.size() <= pts.size());
  return hull;
}

}  // namespace

TEST_SUITE("voronoi") {

TEST_CASE("single generator covers the square") {
  Polygon body = make_regular_polygon(0.5, 0.5, 0.25, 64);
  double vol_a = polygon_area(body);
  Configuration inside = config_of({Point{0.5, 0.5}});
  VoronoiStats st = voronoi_statistics_2d(inside, body);
  CHECK(st.vol == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(st.symdiff == doctest::Approx(1.0 - vol_a).epsilon(1e-12));

  Configuration outside = config_of({Point{0.05, 0.05}});
  VoronoiStats st2 = voronoi_statistics_2d(outside, body);
  CHECK(st2.vol == 0.0);
  CHECK(st2.symdiff == doctest::Approx(vol_a).epsilon(1e-12));
}

TEST_CASE("two generators split by the bisector") {
  Polygon left = make_rect(0.01, 0.01, 0.5, 0.99);
  Configuration c = config_of({Point{0.25, 0.5}, Point{0.75, 0.5}});
  VoronoiStats st = voronoi_statistics_2d(c, left);
  CHECK(st.vol == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pruned cells equal the all-bisector oracle") {
  Space cube = Space::unit_cube(2);
  RandomStream rng(91, 0);
  MarkDistribution marks;
  for (int trial = 0; trial < 30; ++trial) {
    Configuration c = sample_binomial(cube, 2 + rng.below(80), marks, rng);
    NeighborIndex index(cube, c);
    for (std::size_t i = 0; i < c.size(); i += 3) {
      VoronoiCell2D fast = voronoi_cell_2d(i, c, index);
      Polygon slow = brute_cell(c, i);
      CHECK(polygon_area(fast.polygon) ==
            doctest::Approx(polygon_area(slow)).epsilon(1e-9));
      CHECK(polygon_perimeter(fast.polygon) ==
            doctest::Approx(polygon_perimeter(slow)).epsilon(1e-9));
    }
  }
}

TEST_CASE("cells tile the square and the summation identities hold") {
  Space cube = Space::unit_cube(2);
  Polygon body = make_regular_polygon(0.5, 0.5, 0.25, 64);
  double vol_a = polygon_area(body);
  RandomStream rng(93, 0);
  MarkDistribution marks;
  for (int trial = 0; trial < 50; ++trial) {
    Configuration c = sample_binomial(cube, 1 + rng.below(60), marks, rng);
    NeighborIndex index(cube, c);
    double tiled = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      tiled += polygon_area(voronoi_cell_2d(i, c, index).polygon);
    CHECK(tiled == doctest::Approx(1.0).epsilon(1e-9));

    VoronoiStats st = voronoi_statistics_2d(c, body);
    double nm = 0.0, np = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      nm += st.nu_minus[i];
      np += st.nu_plus[i];
    }
    // vol(A(X)) = sum nu_minus + vol(A); vol(A delta A(X)) = sum nu_plus
    CHECK(st.vol == doctest::Approx(nm + vol_a).epsilon(1e-9));
    CHECK(st.symdiff == doctest::Approx(np).epsilon(1e-9));
  }
}

TEST_CASE("boundary length of the approximation equals the alpha sum") {
  // two generators, one in the body: the approximation is the left
  // half-square, whose boundary has length 4 x ... exactly 2*1 + 2*0.5 = 3
  Polygon body = make_rect(0.2, 0.3, 0.45, 0.7);
  Configuration c = config_of({Point{0.25, 0.5}, Point{0.75, 0.5}});
  VoronoiStats st = voronoi_statistics_2d(c, body);
  CHECK(st.boundary_len == doctest::Approx(3.0).epsilon(1e-12));
  double asum = 0.0;
  for (double a : st.alpha) asum += a;
  CHECK(st.boundary_len == doctest::Approx(asum).epsilon(1e-12));
}

TEST_CASE("body must lie in the open unit square") {
  Configuration c = config_of({Point{0.5, 0.5}});
  CHECK_THROWS_AS(voronoi_statistics_2d(c, make_rect(0.0, 0.0, 0.5, 0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(voronoi_statistics_2d(Configuration(),
                                        make_rect(0.2, 0.2, 0.4, 0.4)),
                  std::invalid_argument);
}

}  // TEST_SUITE

TEST_SUITE("hull") {

TEST_CASE("triangle hand example") {
  Configuration tri =
      config_of({Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.0, 1.0}});
  Hull2D h = convex_hull_2d(tri);
  CHECK(h.f0 == 3);
  CHECK(h.f1 == 3);
  CHECK(h.area == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h.perimeter == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(!h.degenerate);
}

TEST_CASE("interior points are invisible") {
  Configuration c = config_of(
      {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.0, 1.0}, Point{0.1, 0.1}});
  CHECK(convex_hull_2d(c).f0 == 3);
}

TEST_CASE("degenerate input is flagged") {
  Configuration line =
      config_of({Point{0.0, 0.0}, Point{0.5, 0.0}, Point{1.0, 0.0}});
  Hull2D h = convex_hull_2d(line);
  CHECK(h.degenerate);
  CHECK(h.f0 == 2);
  CHECK(h.area == 0.0);
}

TEST_CASE("euler relation and oracle agreement on random samples") {
  Space disk = Space::ball(2, 1.0);
  RandomStream rng(97, 0);
  MarkDistribution marks;
  for (int trial = 0; trial < 100; ++trial) {
    Configuration c = sample_binomial(disk, 3 + rng.below(100), marks, rng);
    Hull2D h = convex_hull_2d(c);
    if (h.degenerate) continue;
    CHECK(h.f0 == h.f1);
    Polygon oracle = brute_hull(c);
    REQUIRE(static_cast<int>(oracle.size()) == h.f0);
    // shoelace + edge-length oracle
    CHECK(h.area == doctest::Approx(polygon_area(oracle)).epsilon(1e-12));
    CHECK(h.perimeter ==
          doctest::Approx(polygon_perimeter(oracle)).epsilon(1e-12));
  }
}

TEST_CASE("intrinsic-volume deficits") {
  Configuration tri =
      config_of({Point{0.9, 0.0}, Point{-0.45, 0.779}, Point{-0.45, -0.779}});
  double s = 10.0;
  HullStats st = hull_statistics_2d(tri, 1.0, s);
  Hull2D h = convex_hull_2d(tri);
  CHECK(st.hstat_v2 == doctest::Approx(s * (M_PI - h.area)).epsilon(1e-12));
  CHECK(st.hstat_v1 ==
        doctest::Approx(s * (M_PI - h.perimeter / 2)).epsilon(1e-12));
  CHECK(st.hstat_f0 == 3.0);
  CHECK(!st.flagged);

  // origin outside the hull: flagged but still computed
  Configuration off =
      config_of({Point{0.5, 0.1}, Point{0.9, 0.2}, Point{0.7, 0.6}});
  CHECK(hull_statistics_2d(off, 1.0, s).flagged);
}

}  // TEST_SUITE
