#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "algdom/domain.hpp"
#include "algdom/errors.hpp"

using namespace algdom;

#define CHECK_THROWS_AS_CODE(expr, code_)                \
  do {                                                   \
    try {                                                \
      expr;                                              \
      CHECK_MESSAGE(false, "expected throw: " #expr);    \
    } catch (const Error& e) {                           \
      CHECK(e.code() == ErrorCode::code_);               \
    }                                                    \
  } while (0)

namespace {

Box sq(double lo, double hi) { return Box{lo, hi, lo, hi}; }

Scene disk_scene() {
  Scene s;
  s.curves = {Poly2::circle(0, 0, 1.5)};
  s.box = sq(-2, 2);
  s.seed = {0, 0};
  return s;
}

size_t arcs_on_curve(const Domain& d, int k) {
  size_t n = 0;
  for (const auto& a : d.arcs)
    if (a.curve == k) ++n;
  return n;
}

bool cs_has(const std::vector<CharPoint>& cs, CharKind kind, double x, double y, double eps) {
  for (const auto& c : cs)
    if (c.kind == kind && std::fabs(c.p.x - x) <= eps && std::fabs(c.p.y - y) <= eps)
      return true;
  return false;
}

}  // namespace

TEST_CASE("mask: circle sign components") {
  auto m = build_mask({Poly2::circle(0, 0, 1.5)}, sq(-2, 2), {0, 0}, 64);
  REQUIRE(m.seed_comp >= 0);
  CHECK(!m.comp_touches_frame[static_cast<size_t>(m.seed_comp)]);
  CHECK(m.inside_seed_comp({0.5, 0.5}));
  CHECK(!m.inside_seed_comp({1.9, 1.9}));
  CHECK(m.decided({1.9, 1.9}));
  int outside = m.comp[static_cast<size_t>(m.cell_index({1.9, 1.9}))];
  CHECK(outside != m.seed_comp);
  CHECK(m.comp_touches_frame[static_cast<size_t>(outside)]);
}

TEST_CASE("disk: single closed boundary arc") {
  Domain d = build_domain(disk_scene());
  CHECK(d.crossings.empty());
  REQUIRE(d.arcs.size() == 1);
  CHECK(d.arcs[0].closed);
  CHECK(d.arcs[0].curve == 0);
  CHECK(d.arcs[0].end_a == -1);
  CHECK(d.arcs[0].end_b == -1);
  // Circle gradient points outward, domain is inside.
  CHECK(d.arcs[0].inside_sign == -1);
  CHECK(d.warnings.empty());
  CHECK(d.inside({0, 0}));
  CHECK(d.inside({1.2, 0.5}));
  CHECK(!d.inside({1.9, 0}));
  CHECK(!d.inside({5, 0}));  // outside the box
}

TEST_CASE("contains_point: certificate and mask paths") {
  Scene s = disk_scene();
  CHECK(contains_point(s, {1.49, 0}));        // segment certificate: no crossings
  CHECK(contains_point(s, {0, -1.49}));
  CHECK(!contains_point(s, {1.52, 0}));       // mask path outside
  CHECK(!contains_point(s, {3, 3}));          // outside the box
  CHECK(!contains_point(s, {1.5, 0}));        // on the curve
  CHECK_THROWS_AS_CODE(contains_point(s, {1.5 + 1e-6, 0}), MembershipUndecided);
}

TEST_CASE("annulus: two loops with opposite inside signs") {
  Scene s;
  s.curves = {Poly2::circle(0, 0, 1.0), Poly2::circle(0, 0, 2.0)};
  s.box = sq(-3, 3);
  s.seed = {1.5, 0};
  Domain d = build_domain(s);
  CHECK(d.crossings.empty());
  REQUIRE(d.arcs.size() == 2);
  CHECK(arcs_on_curve(d, 0) == 1);
  CHECK(arcs_on_curve(d, 1) == 1);
  for (const auto& a : d.arcs) {
    CHECK(a.closed);
    if (a.curve == 0) CHECK(a.inside_sign == 1);   // domain outside the inner circle
    if (a.curve == 1) CHECK(a.inside_sign == -1);  // domain inside the outer circle
  }
  CHECK(d.inside({1.5, 0.3}));
  CHECK(d.inside({-1.2, 0.9}));
  CHECK(!d.inside({0, 0}));
  CHECK(!d.inside({2.5, 0}));

  s.seed = {2.5, 0};  // outside both circles: complement reaches the frame
  CHECK_THROWS_AS_CODE(build_domain(s), UnboundedDomain);
}

TEST_CASE("cubic chord through a circle: crossings, arcs, characteristic sets") {
  Scene s;
  s.curves = {Poly2({{0, 1, 1.0}, {3, 0, -1.0}, {1, 0, 0.5}}),  // y - x^3 + x/2
              Poly2::circle(0, 0, std::sqrt(2.0))};
  s.box = sq(-2, 2);
  s.seed = {0, 0.5};
  Domain d = build_domain(s);

  REQUIRE(d.crossings.size() == 2);
  for (const auto& c : d.crossings) {
    CHECK(c.certified);
    CHECK(std::fabs(s.curves[0].eval(c.p)) < 1e-8);
    CHECK(std::fabs(s.curves[1].eval(c.p)) < 1e-8);
    CHECK(std::fabs(std::fabs(c.p.x) - 1.12376) < 1e-3);
  }
  // One kept piece of each curve, ending at the two crossings.
  REQUIRE(d.arcs.size() == 2);
  CHECK(arcs_on_curve(d, 0) == 1);
  CHECK(arcs_on_curve(d, 1) == 1);
  for (const auto& a : d.arcs) {
    CHECK(a.end_a >= 0);
    CHECK(a.end_b >= 0);
    CHECK(a.end_a != a.end_b);
  }
  CHECK(d.inside({0, 0.5}));
  CHECK(d.inside({-1.0, 0.1}));
  CHECK(!d.inside({0, -0.5}));   // below the cubic
  CHECK(!d.inside({1.39, 0}));   // inside the circle but below the cubic

  const double r = std::sqrt(2.0);
  auto cs_x = characteristic_set(d, Axis::X);
  REQUIRE(cs_x.size() == 3);
  CHECK(cs_has(cs_x, CharKind::Pole, -r, 0.0, 1e-7));
  CHECK(!cs_has(cs_x, CharKind::Pole, r, 0.0, 1e-3));  // pole on the dropped arc
  CHECK(cs_x.front().kind == CharKind::Pole);          // sorted by x

  auto cs_y = characteristic_set(d, Axis::Y);
  REQUIRE(cs_y.size() == 5);
  CHECK(cs_has(cs_y, CharKind::Pole, 0.0, r, 1e-7));
  double xq = 1.0 / std::sqrt(6.0);
  double yq = xq * xq * xq - 0.5 * xq;
  CHECK(cs_has(cs_y, CharKind::Pole, xq, yq, 1e-6));
  CHECK(cs_has(cs_y, CharKind::Pole, -xq, -yq, 1e-6));

  MorseFlags mf = classify_morse(d);
  CHECK(mf.morse);
  CHECK(mf.g_morse);
}

TEST_CASE("validation errors") {
  SUBCASE("seed on a curve") {
    Scene s = disk_scene();
    s.seed = {1.5, 0};
    CHECK_THROWS_AS_CODE(build_domain(s), OnCurve);
  }
  SUBCASE("seed outside the box") {
    Scene s = disk_scene();
    s.seed = {3, 3};
    CHECK_THROWS_AS_CODE(build_domain(s), OutsideBox);
  }
  SUBCASE("tangent circles") {
    Scene s;
    s.curves = {Poly2::circle(0, 0, 1.0), Poly2::circle(2, 0, 1.0)};
    s.box = sq(-4, 4);
    s.seed = {0, 0};
    CHECK_THROWS_AS_CODE(build_domain(s), TangentialCrossing);
  }
  SUBCASE("three lines through one point") {
    Scene s;
    s.curves = {Poly2({{0, 1, 1.0}, {1, 0, -1.0}}),        // y - x
                Poly2({{0, 1, 1.0}, {1, 0, 1.0}}),         // y + x
                Poly2({{0, 1, 1.0}, {1, 0, -2.0}})};       // y - 2x
    s.box = sq(-2, 2);
    s.seed = {0.5, 0.2};
    CHECK_THROWS_AS_CODE(build_domain(s), TriplePoint);
  }
  SUBCASE("curve empty in the box") {
    Scene s;
    s.curves = {Poly2::circle(0, 0, 1.0), Poly2::circle(10, 10, 1.0)};
    s.box = sq(-2, 2);
    s.seed = {0, 0};
    CHECK_THROWS_AS_CODE(build_domain(s), CurveMissesClosure);
  }
  SUBCASE("curve present but not on the closure") {
    Scene s;
    s.curves = {Poly2::circle(0, 0, 1.0), Poly2::circle(0, 0, 0.5)};
    s.box = sq(-2, 2);
    s.seed = {0, 0};
    CHECK_THROWS_AS_CODE(build_domain(s), CurveMissesClosure);
  }
  SUBCASE("singular curve") {
    Scene s;
    s.curves = {Poly2({{2, 0, 1.0}, {0, 2, -1.0}})};  // x^2 - y^2
    s.box = sq(-2, 2);
    s.seed = {0.5, 0};
    CHECK_THROWS_AS_CODE(build_domain(s), SingularCurve);
  }
}

TEST_CASE("characteristic points near the border are excluded with warnings") {
  Scene s;
  s.curves = {Poly2::circle(0, 0, 1.99)};
  s.box = sq(-2, 2);
  s.seed = {0, 0};
  Domain d = build_domain(s);
  auto cs_x = characteristic_set(d, Axis::X);
  CHECK(cs_x.empty());
  CHECK(d.warnings.size() >= 2);  // both x-extreme tangency points dropped
}

TEST_CASE("sweep degeneracy classification") {
  SUBCASE("flat vertical tangency breaks Morse") {
    Scene s;
    s.curves = {Poly2({{1, 0, 1.0}, {0, 4, -1.0}}),  // x - y^4
                Poly2::circle(0, 0, 1.0)};
    s.box = sq(-2, 2);
    s.seed = {0.5, 0};
    Domain d = build_domain(s);
    MorseFlags mf = classify_morse(d);
    CHECK(!mf.morse);
    CHECK(!mf.g_morse);
    REQUIRE(!mf.witnesses.empty());
    // the degenerate tangency of x - y^4 sits at the origin
    bool at_origin = false;
    for (const Witness& w : mf.witnesses)
      if (std::fabs(w.p.x) < 1e-6 && std::fabs(w.p.y) < 1e-6) at_origin = true;
    CHECK(at_origin);
  }
  SUBCASE("two crossings sharing a sweep coordinate break only G-Morse") {
    Scene s;
    s.curves = {Poly2::circle(-0.8, 0, 1.2), Poly2::circle(0.8, 0, 1.2)};
    s.box = sq(-3, 3);
    s.seed = {0, 0};
    Domain d = build_domain(s);
    MorseFlags mf = classify_morse(d);
    CHECK(mf.morse);       // tangencies and crossings are regular
    CHECK(!mf.g_morse);    // both lens crossings project to x = 0
    CHECK(!mf.witnesses.empty());
  }
}

TEST_CASE("boundary genericity flags") {
  SUBCASE("disk is clean") {
    Domain d = build_domain(disk_scene());
    DomainFlags fl = check_flags(d);
    CHECK(fl.nip);
    CHECK(fl.ndtl);
    CHECK(fl.ncv);
    CHECK(fl.witnesses.empty());
  }
  SUBCASE("cubic boundary carries an inflection") {
    Scene s;
    s.curves = {Poly2({{0, 1, 1.0}, {3, 0, -1.0}, {1, 0, 0.5}}),  // y - x^3 + x/2
                Poly2::circle(0, 0, std::sqrt(2.0))};
    s.box = sq(-2, 2);
    s.seed = {0, 0.5};
    Domain d = build_domain(s);
    DomainFlags fl = check_flags(d);
    CHECK(!fl.nip);
    bool origin_witness = false;
    for (const Witness& w : fl.witnesses)
      if (std::fabs(w.p.x) < 1e-6 && std::fabs(w.p.y) < 1e-6) origin_witness = true;
    CHECK(origin_witness);
    CHECK(fl.ndtl);  // a cubic graph has no double tangent line
  }
  SUBCASE("quartic boundary touches its double tangent line") {
    Scene s;
    s.curves = {Poly2({{0, 1, 1.0}, {4, 0, -1.0}, {2, 0, 2.0}}),  // y - x^4 + 2x^2
                Poly2::circle(0, 0.5, 2.3)};
    s.box = sq(-3, 3);
    s.seed = {0, 0.5};
    Domain d = build_domain(s);
    DomainFlags fl = check_flags(d);
    CHECK(!fl.ndtl);
    // witnesses on the line y = -1 near the contacts (±1, −1)
    bool near_contact = false;
    for (const Witness& w : fl.witnesses)
      if (std::fabs(std::fabs(w.p.x) - 1.0) < 1e-3 && std::fabs(w.p.y + 1.0) < 1e-3)
        near_contact = true;
    CHECK(near_contact);
    DomainFlags rl = check_flags(d, true);
    CHECK(!rl.ndtl);  // contacts lie on the quartic itself: relaxed reading agrees
  }
  SUBCASE("ellipse boundary carries four curvature vertices") {
    Scene s;
    s.curves = {Poly2({{2, 0, 0.25}, {0, 2, 1.0}, {0, 0, -1.0}})};  // x^2/4 + y^2 - 1
    s.box = sq(-3, 3);
    s.seed = {0, 0};
    Domain d = build_domain(s);
    DomainFlags fl = check_flags(d);
    CHECK(!fl.ncv);
    int cv_wit = 0;
    for (const Witness& w : fl.witnesses)
      if (w.what.find("curvature vertex") != std::string::npos) ++cv_wit;
    CHECK(cv_wit == 4);
    CHECK(fl.nip);
    CHECK(fl.ndtl);
  }
}
