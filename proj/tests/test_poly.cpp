#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "algdom/errors.hpp"
#include "algdom/poly.hpp"

using namespace algdom;

namespace {

Poly2 unit_circle() { return Poly2::circle(0.0, 0.0, 1.0); }

// y - x^3
Poly2 cubic_graph() {
  return Poly2({{0, 1, 1.0}, {3, 0, -1.0}});
}

Poly2 random_poly(std::mt19937& rng, int max_deg) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<Poly2::Term> terms;
  for (int i = 0; i <= max_deg; ++i)
    for (int j = 0; i + j <= max_deg; ++j) terms.push_back({i, j, coeff(rng)});
  return Poly2(std::move(terms));
}

}  // namespace

TEST_CASE("eval_poly basics") {
  CHECK(unit_circle().eval(1.0, 0.0) == doctest::Approx(0.0));
  CHECK(Poly2().eval(3.0, 4.0) == 0.0);
  CHECK(cubic_graph().eval(2.0, 1.0) == doctest::Approx(-7.0));
}

TEST_CASE("zero polynomial conventions") {
  Poly2 z;
  CHECK(z.is_zero());
  CHECK(z.degree() == -1);
  Poly2 cancelled({{1, 1, 2.0}, {1, 1, -2.0}});
  CHECK(cancelled.is_zero());
  CHECK(cancelled.degree() == -1);
}

TEST_CASE("differentiate") {
  Poly2 dy = unit_circle().derivative(Axis::Y);
  CHECK(dy.eval(0.3, 0.7) == doctest::Approx(1.4));
  Poly2 d2x = cubic_graph().derivative(Axis::X, 2);
  CHECK(d2x.eval(2.0, 0.0) == doctest::Approx(-12.0));
  Poly2 c5 = Poly2::constant(5.0);
  CHECK(c5.derivative(Axis::X).is_zero());
}

TEST_CASE("restrict_to_segment worked examples") {
  // circle along (-2,0) -> (2,0): (4t-2)^2 - 1 = 16t^2 - 16t + 3
  Poly1 r = unit_circle().restrict_segment({-2.0, 0.0}, {2.0, 0.0});
  REQUIRE(r.degree() == 2);
  CHECK(r.coeffs()[0] == doctest::Approx(3.0));
  CHECK(r.coeffs()[1] == doctest::Approx(-16.0));
  CHECK(r.coeffs()[2] == doctest::Approx(16.0));

  Poly1 c = Poly2::var_y().restrict_segment({0.0, 1.0}, {1.0, 1.0});
  REQUIRE(c.degree() == 0);
  CHECK(c.coeffs()[0] == doctest::Approx(1.0));

  Poly1 t = Poly2::var_x().restrict_segment({0.0, 0.0}, {1.0, 0.0});
  REQUIRE(t.degree() == 1);
  CHECK(t.eval(0.25) == doctest::Approx(0.25));

  CHECK_THROWS_AS(unit_circle().restrict_segment({1.0, 1.0}, {1.0, 1.0}), Error);
}

TEST_CASE("restriction agrees with direct evaluation") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Poly2 p = random_poly(rng, 4);
    Pt a{pos(rng), pos(rng)}, b{pos(rng), pos(rng)};
    if (dist(a, b) < 1e-6) continue;
    Poly1 r = p.restrict_segment(a, b);
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      Pt q = a + (b - a) * t;
      CHECK(r.eval(t) == doctest::Approx(p.eval(q)).epsilon(1e-9));
    }
  }
}

TEST_CASE("derivative consistency vs central differences") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  const double h = 1e-6;
  for (int trial = 0; trial < 10; ++trial) {
    Poly2 p = random_poly(rng, 6);
    Poly2 px = p.dx(), py = p.dy();
    for (int s = 0; s < 5; ++s) {
      double x = pos(rng), y = pos(rng);
      double fdx = (p.eval(x + h, y) - p.eval(x - h, y)) / (2.0 * h);
      double fdy = (p.eval(x, y + h) - p.eval(x, y - h)) / (2.0 * h);
      double ax = px.eval(x, y), ay = py.eval(x, y);
      CHECK(std::fabs(ax - fdx) <= 1e-6 * (1.0 + std::fabs(ax)));
      CHECK(std::fabs(ay - fdy) <= 1e-6 * (1.0 + std::fabs(ay)));
    }
  }
}

TEST_CASE("interval evaluation encloses point values") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> pos(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    Poly2 p = random_poly(rng, 5);
    double x0 = pos(rng), y0 = pos(rng);
    Interval xi(x0 - 0.05, x0 + 0.05), yi(y0 - 0.05, y0 + 0.05);
    Interval box = p.eval_interval(xi, yi);
    for (int s = 0; s < 8; ++s) {
      double x = x0 + 0.1 * (pos(rng) / 3.0), y = y0 + 0.1 * (pos(rng) / 3.0);
      x = std::min(std::max(x, xi.lo), xi.hi);
      y = std::min(std::max(y, yi.lo), yi.hi);
      double v = p.eval(x, y);
      CHECK(v >= box.lo - 1e-12);
      CHECK(v <= box.hi + 1e-12);
    }
  }
}

TEST_CASE("interval exclusion away from the zero set") {
  Poly2 f = unit_circle();
  Interval far = f.eval_interval(Interval(2.0, 3.0), Interval(2.0, 3.0));
  CHECK(!far.contains_zero());
  Interval on = f.eval_interval(Interval(0.9, 1.1), Interval(-0.1, 0.1));
  CHECK(on.contains_zero());
}

TEST_CASE("curvature numerator of a circle is 8(x^2+y^2)") {
  Poly2 n = curvature_numerator(unit_circle());
  CHECK(n.eval(1.0, 2.0) == doctest::Approx(40.0));
  CHECK(n.eval(0.5, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("curvature numerator of quartic graph encodes inflections") {
  // f = y - x^4 + 2x^2: N = 4 - 12 x^2 (f_y = 1), zero at x = +-1/sqrt(3)
  Poly2 f({{0, 1, 1.0}, {4, 0, -1.0}, {2, 0, 2.0}});
  Poly2 n = curvature_numerator(f);
  double x_inf = 1.0 / std::sqrt(3.0);
  CHECK(n.eval(x_inf, 0.0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(n.eval(0.0, 0.0) == doctest::Approx(4.0));
}

TEST_CASE("PolyN lift, eval, arithmetic") {
  // Bitangent-style product: f_x(p) * (q1 - p1) in 4 vars
  Poly2 f = unit_circle();
  PolyN fp = PolyN::lift(f, 4, 0, 1);
  PolyN fq = PolyN::lift(f, 4, 2, 3);
  std::array<double, 4> v{1.0, 0.0, 0.0, 1.0};  // p = (1,0), q = (0,1)
  CHECK(fp.eval(v) == doctest::Approx(0.0));
  CHECK(fq.eval(v) == doctest::Approx(0.0));

  PolyN fx = PolyN::lift(f.dx(), 4, 0, 1);
  PolyN dx = PolyN::variable(4, 2) - PolyN::variable(4, 0);
  PolyN prod = fx * dx;
  // f_x(1,0) = 2, (q1 - p1) = -1
  CHECK(prod.eval(v) == doctest::Approx(-2.0));

  std::array<Interval, 4> iv{Interval(0.9, 1.1), Interval(-0.1, 0.1),
                             Interval(-0.1, 0.1), Interval(0.9, 1.1)};
  CHECK(fp.eval_interval(iv).contains_zero());
}

TEST_CASE("PolyN derivative") {
  PolyN x0 = PolyN::variable(2, 0);
  PolyN x1 = PolyN::variable(2, 1);
  PolyN p = x0 * x0 * x1 + x1 * 3.0;  // x^2 y + 3y
  PolyN px = p.derivative(0);         // 2xy
  PolyN py = p.derivative(1);         // x^2 + 3
  std::array<double, 4> v{2.0, 5.0, 0.0, 0.0};
  CHECK(px.eval(v) == doctest::Approx(20.0));
  CHECK(py.eval(v) == doctest::Approx(7.0));
}
