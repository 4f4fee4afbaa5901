#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "algdom/errors.hpp"
#include "algdom/reeb.hpp"

using namespace algdom;

namespace {

Box sq(double lo, double hi) { return Box{lo, hi, lo, hi}; }

Domain disk_domain() {
  Scene s;
  s.curves = {Poly2::circle(0, 0, 1.5)};
  s.box = sq(-2, 2);
  s.seed = {0, 0};
  return build_domain(s);
}

Domain annulus_domain() {
  Scene s;
  s.curves = {Poly2::circle(0, 0, 1.0), Poly2::circle(0, 0, 2.0)};
  s.box = sq(-3, 3);
  s.seed = {1.5, 0};
  return build_domain(s);
}

Domain chord_domain() {
  Scene s;
  s.curves = {Poly2({{0, 1, 1.0}, {3, 0, -1.0}, {1, 0, 0.5}}),  // y - x^3 + x/2
              Poly2::circle(0, 0, std::sqrt(2.0))};
  s.box = sq(-2, 2);
  s.seed = {0, 0.5};
  return build_domain(s);
}

// Vertex of g at the given height (unique in these fixtures).
int vertex_at(const VDigraph& g, double h, double eps = 1e-6) {
  for (const auto& v : g.vertices)
    if (std::fabs(v.height - h) <= eps) return v.id;
  REQUIRE(false);
  return -1;
}

int edge_count(const VDigraph& g, int from, int to) {
  int n = 0;
  for (const auto& e : g.edges)
    if (e.from == from && e.to == to) ++n;
  return n;
}

}  // namespace

TEST_CASE("disk fibers: interval, tangency point, empty") {
  Domain d = disk_domain();

  Fiber mid = fiber_at(d, Axis::X, 0.0);
  REQUIRE(mid.intervals.size() == 1);
  CHECK(mid.intervals[0].lo == doctest::Approx(-1.5).epsilon(1e-6));
  CHECK(mid.intervals[0].hi == doctest::Approx(1.5).epsilon(1e-6));

  Fiber off = fiber_at(d, Axis::X, 1.2);
  REQUIRE(off.intervals.size() == 1);
  CHECK(off.intervals[0].lo == doctest::Approx(-0.9).epsilon(1e-6));
  CHECK(off.intervals[0].hi == doctest::Approx(0.9).epsilon(1e-6));

  Fiber tangent = fiber_at(d, Axis::X, 1.5);
  REQUIRE(tangent.intervals.size() == 1);
  CHECK(std::fabs(tangent.intervals[0].lo) < 1e-5);
  CHECK(tangent.intervals[0].hi == tangent.intervals[0].lo);

  CHECK(fiber_at(d, Axis::X, 1.6).intervals.empty());
  CHECK(fiber_at(d, Axis::X, -1.7).intervals.empty());

  Fiber ymid = fiber_at(d, Axis::Y, 0.0);
  REQUIRE(ymid.intervals.size() == 1);
  CHECK(ymid.intervals[0].lo == doctest::Approx(-1.5).epsilon(1e-6));
}

TEST_CASE("annulus fibers: two components and the glued tangency fiber") {
  Domain d = annulus_domain();

  Fiber mid = fiber_at(d, Axis::X, 0.0);
  REQUIRE(mid.intervals.size() == 2);
  CHECK(mid.intervals[0].lo == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(mid.intervals[0].hi == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(mid.intervals[1].lo == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mid.intervals[1].hi == doctest::Approx(2.0).epsilon(1e-6));

  // The line x = -1 touches the inner circle: the two halves share that
  // boundary point, so the closed fiber is a single component.
  Fiber glue = fiber_at(d, Axis::X, -1.0);
  REQUIRE(glue.intervals.size() == 1);
  CHECK(glue.intervals[0].lo == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-6));
  CHECK(glue.intervals[0].hi == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
}

TEST_CASE("disk sweep graph: one edge between the two tangency poles") {
  Domain d = disk_domain();
  VDigraph g = poincare_reeb(d, Axis::X);
  REQUIRE(g.vertices.size() == 2);
  REQUIRE(g.edges.size() == 1);
  int a = vertex_at(g, -1.5), b = vertex_at(g, 1.5);
  CHECK(edge_count(g, a, b) == 1);
  CHECK(g.in_degree(a) == 0);
  CHECK(g.out_degree(b) == 0);

  VDigraph expect;
  expect.vertices = {{0, -1.5}, {1, 1.5}};
  expect.edges = {{0, 1}};
  CHECK(vdigraph_isomorphic(g, expect, CompareMode::ExactHeight));
  CHECK(homeomorphic(g, expect, CompareMode::ExactHeight));

  VDigraph gy = poincare_reeb(d, Axis::Y);
  CHECK(vdigraph_isomorphic(gy, expect, CompareMode::ExactHeight));
}

TEST_CASE("annulus sweep graph: split and merge with a double edge") {
  Domain d = annulus_domain();
  VDigraph g = poincare_reeb(d, Axis::X);
  REQUIRE(g.vertices.size() == 4);
  REQUIRE(g.edges.size() == 4);
  int a = vertex_at(g, -2), b = vertex_at(g, -1), c = vertex_at(g, 1), e = vertex_at(g, 2);
  CHECK(edge_count(g, a, b) == 1);
  CHECK(edge_count(g, b, c) == 2);
  CHECK(edge_count(g, c, e) == 1);
  CHECK(g.in_degree(b) == 1);
  CHECK(g.out_degree(b) == 2);
  CHECK(g.in_degree(c) == 2);
  CHECK(g.out_degree(c) == 1);
  // One independent cycle: E - V + 1.
  CHECK(static_cast<int>(g.edges.size()) - static_cast<int>(g.vertices.size()) + 1 == 1);

  VDigraph expect;
  expect.vertices = {{10, -2}, {11, -1}, {12, 1}, {13, 2}};
  expect.edges = {{10, 11}, {11, 12}, {11, 12}, {12, 13}};
  CHECK(vdigraph_isomorphic(g, expect, CompareMode::ExactHeight));
}

TEST_CASE("cubic chord sweeps: pass-through vertices and a merge") {
  Domain d = chord_domain();

  VDigraph gx = poincare_reeb(d, Axis::X);
  REQUIRE(gx.vertices.size() == 3);
  REQUIRE(gx.edges.size() == 2);
  {
    std::vector<double> hs;
    for (const auto& v : gx.vertices) hs.push_back(v.height);
    std::sort(hs.begin(), hs.end());
    CHECK(hs[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-6));
    CHECK(hs[1] == doctest::Approx(-1.12376).epsilon(1e-3));
    CHECK(hs[2] == doctest::Approx(1.12376).epsilon(1e-3));
  }
  VDigraph sx = smoothed(gx);
  CHECK(sx.vertices.size() == 2);
  CHECK(sx.edges.size() == 1);

  VDigraph gy = poincare_reeb(d, Axis::Y);
  REQUIRE(gy.vertices.size() == 5);
  REQUIRE(gy.edges.size() == 4);
  int births = 0, merges = 0, deaths = 0, regular = 0;
  for (const auto& v : gy.vertices) {
    int i = gy.in_degree(v.id), o = gy.out_degree(v.id);
    if (i == 0 && o == 1) ++births;
    if (i == 2 && o == 1) ++merges;
    if (i == 1 && o == 0) ++deaths;
    if (i == 1 && o == 1) ++regular;
  }
  CHECK(births == 2);
  CHECK(merges == 1);
  CHECK(deaths == 1);
  CHECK(regular == 1);
  VDigraph sy = smoothed(gy);
  CHECK(sy.vertices.size() == 4);
  CHECK(sy.edges.size() == 3);

  // The two sweeps of the same domain are genuinely different graphs.
  CHECK(!homeomorphic(gx, gy, CompareMode::HeightOrder));
}

TEST_CASE("isomorphism: labels, heights, parallel edges") {
  VDigraph a;
  a.vertices = {{0, 0.0}, {1, 1.0}, {2, 2.0}};
  a.edges = {{0, 1}, {1, 2}, {0, 2}};

  VDigraph b;  // same shape, permuted ids
  b.vertices = {{7, 1.0}, {3, 0.0}, {5, 2.0}};
  b.edges = {{3, 7}, {7, 5}, {3, 5}};
  CHECK(vdigraph_isomorphic(a, b, CompareMode::ExactHeight));

  VDigraph c = a;  // shifted heights: order kept, values not
  for (auto& v : c.vertices) v.height += 0.5;
  CHECK(!vdigraph_isomorphic(a, c, CompareMode::ExactHeight));
  CHECK(vdigraph_isomorphic(a, c, CompareMode::HeightOrder));

  VDigraph p1, p2;  // double edge vs opposite pair
  p1.vertices = {{0, 0.0}, {1, 1.0}};
  p1.edges = {{0, 1}, {0, 1}};
  p2.vertices = {{0, 0.0}, {1, 1.0}};
  p2.edges = {{0, 1}, {1, 0}};
  CHECK(!vdigraph_isomorphic(p1, p2, CompareMode::HeightOrder));

  VDigraph q;  // path of three vs triangle-ish: different edge counts
  q.vertices = {{0, 0.0}, {1, 1.0}, {2, 2.0}};
  q.edges = {{0, 1}, {1, 2}};
  CHECK(!vdigraph_isomorphic(a, q, CompareMode::HeightOrder));
}

TEST_CASE("smoothing suppresses chains and leaves loops intact") {
  VDigraph chain;
  chain.vertices = {{0, 0.0}, {1, 1.0}, {2, 2.0}, {3, 3.0}};
  chain.edges = {{0, 1}, {1, 2}, {2, 3}};
  VDigraph s = smoothed(chain);
  CHECK(s.vertices.size() == 2);
  REQUIRE(s.edges.size() == 1);
  CHECK(s.edges[0].from == 0);
  CHECK(s.edges[0].to == 3);

  VDigraph cycle;
  cycle.vertices = {{0, 0.0}, {1, 1.0}};
  cycle.edges = {{0, 1}, {1, 0}};
  VDigraph sc = smoothed(cycle);
  CHECK(sc.vertices.size() == 1);
  REQUIRE(sc.edges.size() == 1);
  CHECK(sc.edges[0].from == sc.edges[0].to);

  // Equality after smoothing: a subdivided edge is the same Reeb shape.
  VDigraph plain;
  plain.vertices = {{0, 0.0}, {1, 3.0}};
  plain.edges = {{0, 1}};
  CHECK(homeomorphic(chain, plain, CompareMode::HeightOrder));
}

TEST_CASE("lens sweep: two crossings share one station vertex") {
  // Symmetric lens of two circles: both crossings sit on the line x = 0.
  // The scene is Morse but not G-Morse along X, so the sweep merges the two
  // critical values into a single station whose vertex hosts both crossings.
  Scene s;
  s.curves = {Poly2::circle(-0.8, 0, 1.2), Poly2::circle(0.8, 0, 1.2)};
  s.box = sq(-3, 3);
  s.seed = {0, 0};
  Domain d = build_domain(s);

  MorseFlags mf = classify_morse(d);
  CHECK(mf.morse);
  CHECK(!mf.g_morse);

  VDigraph g = poincare_reeb(d, Axis::X);
  REQUIRE(g.vertices.size() == 3);
  REQUIRE(g.edges.size() == 2);
  int a = vertex_at(g, -0.4), m = vertex_at(g, 0.0), b = vertex_at(g, 0.4);
  CHECK(edge_count(g, a, m) == 1);
  CHECK(edge_count(g, m, b) == 1);
  // The middle vertex carries both crossing points of the lens.
  int mid_pts = 0;
  for (const auto& v : g.vertices)
    if (v.id == m) mid_pts = static_cast<int>(v.points.size());
  CHECK(mid_pts == 2);

  // Along Y the crossings separate into two stations at +-sqrt(0.8)
  // (the circles' own y-extremes lie outside the lens), so that sweep is
  // a plain path whose endpoints each host a single crossing.
  VDigraph gy = poincare_reeb(d, Axis::Y);
  REQUIRE(gy.vertices.size() == 2);
  REQUIRE(gy.edges.size() == 1);
  double rt = std::sqrt(0.8);
  CHECK(vertex_at(gy, -rt, 1e-6) >= 0);
  CHECK(vertex_at(gy, rt, 1e-6) >= 0);
  for (const auto& v : gy.vertices) CHECK(v.points.size() == 1);
}

TEST_CASE("sweep refuses a non-Morse domain") {
  // x = y^4 has a flat vertical tangency at the origin: f_yy vanishes there.
  Scene s;
  s.curves = {Poly2({{1, 0, 1.0}, {0, 4, -1.0}}), Poly2::circle(0, 0, 1.0)};
  s.box = sq(-2, 2);
  s.seed = {0.5, 0};
  Domain d = build_domain(s);
  CHECK(!classify_morse(d).morse);
  CHECK_THROWS_AS(poincare_reeb(d, Axis::X), Error);
}
