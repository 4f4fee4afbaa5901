#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "algdom/errors.hpp"
#include "algdom/surgery.hpp"

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

// Chord of a circle cut by a cubic graph; the boundary carries one
// inflection (of the cubic, at the origin) and nothing else non-generic.
Scene chord_scene() {
  Scene s;
  s.curves = {Poly2({{0, 1, 1.0}, {3, 0, -1.0}, {1, 0, 0.5}}),  // y - x^3 + x/2
              Poly2::circle(0, 0, std::sqrt(2.0))};
  s.box = sq(-2, 2);
  s.seed = {0, 0.5};
  return s;
}

// Ellipse x'^2/4 + y'^2 - 1 rotated by `phi`; four curvature vertices at
// the rotated axis ends, no poles there when phi avoids multiples of 90°.
Poly2 rotated_ellipse(double phi, double a, double b) {
  double c = std::cos(phi), s = std::sin(phi);
  double A = c * c / (a * a) + s * s / (b * b);
  double B = 2.0 * c * s * (1.0 / (a * a) - 1.0 / (b * b));
  double C = s * s / (a * a) + c * c / (b * b);
  return Poly2({{2, 0, A}, {1, 1, B}, {0, 2, C}, {0, 0, -1.0}});
}

CharPoint inflection_on(Domain& d) {
  DomainFlags fl = check_flags(d);
  for (const CharPoint& c : fl.defects)
    if (c.kind == CharKind::Inflection) return c;
  REQUIRE(false);
  return {};
}

}  // namespace

TEST_CASE("plan_disk: cap construction at the cubic inflection") {
  Domain d = build_domain(chord_scene());
  CharPoint target = inflection_on(d);
  CHECK(std::fabs(target.p.x) < 1e-6);
  CHECK(std::fabs(target.p.y) < 1e-6);

  SurgeryPlan plan = plan_disk(d, target, SurgeryMode::Nip);
  CHECK(plan.kind == SurgeryCase::SingleCurve);
  CHECK(plan.r1 > 0.0);
  CHECK(plan.r2 > 0.0);
  CHECK(plan.r1 >= plan.r2);
  // Target strictly inside the disk, seed strictly outside.
  CHECK(plan.conic.eval(target.p) < 0.0);
  CHECK(plan.conic.eval(d.scene.seed) > 0.0);
  // Contacts sit on the conic and on the cubic, ordered by x.
  CHECK(plan.p_l.x < plan.p_r.x);
  for (const Pt& q : {plan.p_l, plan.p_r}) {
    CHECK(std::fabs(plan.conic.eval(q)) < 1e-7);
    CHECK(std::fabs(d.scene.curves[0].eval(q)) < 1e-7);
  }
  // The center sits on the outside: the midpoint between target and
  // center must already be outside the domain.
  Pt mid{0.5 * (target.p.x + plan.center.x), 0.5 * (target.p.y + plan.center.y)};
  CHECK(!d.inside(mid));
}

TEST_CASE("apply_plan: carves the inflection and keeps both sweep graphs") {
  Domain d = build_domain(chord_scene());
  VDigraph gx0 = poincare_reeb(d, Axis::X);
  VDigraph gy0 = poincare_reeb(d, Axis::Y);

  CharPoint target = inflection_on(d);
  SurgeryPlan plan = plan_disk(d, target, SurgeryMode::Nip);
  Domain carved = apply_plan(d, plan);

  // One curve was added and the boundary now avoids the defect.
  CHECK(carved.scene.curves.size() == d.scene.curves.size() + 1);
  CHECK(boundary_distance(carved, target.p) > 1e-4);
  CHECK(check_flags(carved).nip);

  VDigraph gx1 = poincare_reeb(carved, Axis::X);
  VDigraph gy1 = poincare_reeb(carved, Axis::Y);
  CHECK(homeomorphic(gx0, gx1, CompareMode::HeightOrder));
  CHECK(homeomorphic(gy0, gy1, CompareMode::HeightOrder));
  // The insertion adds boundary pieces, so the raw graphs differ.
  CHECK(gx1.vertices.size() > gx0.vertices.size());
}

TEST_CASE("apply_plan: refuses to swallow the seed") {
  Domain d = build_domain(chord_scene());
  SurgeryPlan plan;
  plan.target.p = {0, 0.5};
  plan.conic = Poly2::circle(0, 0.5, 0.3);  // contains the seed
  plan.center = {0, 0.5};
  plan.r1 = plan.r2 = 0.3;
  CHECK_THROWS_AS_CODE(apply_plan(d, plan), SeedSwallowed);
}

TEST_CASE("plan_disk: pole targets violate the hypotheses") {
  Scene s;
  s.curves = {Poly2::circle(0, 0, 1.5)};
  s.box = sq(-2, 2);
  s.seed = {0, 0};
  Domain d = build_domain(s);
  CharPoint fake;
  fake.kind = CharKind::Inflection;  // claimed defect at the east pole
  fake.p = {1.5, 0};
  fake.curve = 0;
  CHECK_THROWS_AS_CODE(plan_disk(d, fake, SurgeryMode::Nip), HypothesisViolated);
}

TEST_CASE("plan_disk + apply_plan on a generic boundary point is graph-neutral") {
  Scene s;
  s.curves = {Poly2::circle(0, 0, 1.5)};
  s.box = sq(-2, 2);
  s.seed = {0, 0};
  Domain d = build_domain(s);
  VDigraph gx0 = poincare_reeb(d, Axis::X);

  // A generic (non-pole) boundary point works as a target even though it
  // is not a defect: the construction is purely geometric.
  double c = 1.5 / std::sqrt(2.0);
  CharPoint fake;
  fake.kind = CharKind::Inflection;
  fake.p = {c, c};
  fake.curve = 0;
  SurgeryPlan plan = plan_disk(d, fake, SurgeryMode::Nip);
  Domain carved = apply_plan(d, plan);

  VDigraph gx1 = poincare_reeb(carved, Axis::X);
  VDigraph gy1 = poincare_reeb(carved, Axis::Y);
  VDigraph gy0 = poincare_reeb(d, Axis::Y);
  CHECK(homeomorphic(gx0, gx1, CompareMode::HeightOrder));
  CHECK(homeomorphic(gy0, gy1, CompareMode::HeightOrder));
  CHECK(!carved.inside(fake.p));
}

TEST_CASE("desingularize: no defects means no insertions") {
  Scene s;
  s.curves = {Poly2::circle(0, 0, 1.5)};
  s.box = sq(-2, 2);
  s.seed = {0, 0};
  Domain d = build_domain(s);
  SurgeryResult res = desingularize(d, SurgeryMode::Nip);
  CHECK(res.log.empty());
  CHECK(res.domain.scene.curves.size() == 1);
}

TEST_CASE("desingularize nip: cubic chord becomes inflection-free") {
  Domain d = build_domain(chord_scene());
  CHECK(!check_flags(d).nip);

  SurgeryResult res = desingularize(d, SurgeryMode::Nip);
  CHECK(res.log.size() == 1);
  CHECK(res.log[0].kind == SurgeryCase::SingleCurve);
  CHECK(check_flags(res.domain).nip);
  // Original curves are still the leading entries of the refined scene.
  REQUIRE(res.domain.scene.curves.size() == 3);
  CHECK(res.domain.scene.curves[0].eval({0.3, 0.7}) ==
        d.scene.curves[0].eval({0.3, 0.7}));
  // Spot-check containment: carved interior points stay inside the
  // original domain.
  CHECK(d.inside({0.0, 1.0}));
  CHECK(res.domain.inside({0.0, 1.0}));
}

TEST_CASE("desingularize nip at a crossing: defect and crossing carved together") {
  Scene s;
  s.curves = {Poly2({{0, 1, 1.0}, {3, 0, -1.0}, {1, 0, -0.5}}),  // y - x^3 - x/2
              Poly2::line(1, 2, 0),                              // x + 2y = 0
              Poly2::circle(0, 0, 1.4)};
  s.box = sq(-2, 2);
  s.seed = {0.5, 0.1};
  Domain d = build_domain(s);

  // The cubic's inflection sits exactly on its transversal crossing with
  // the line at the origin.
  DomainFlags fl = check_flags(d);
  bool infl_at_origin = false;
  for (const CharPoint& c : fl.defects)
    if (c.kind == CharKind::Inflection && norm(c.p) < 1e-6) infl_at_origin = true;
  REQUIRE(infl_at_origin);

  SurgeryResult res = desingularize(d, SurgeryMode::Nip);
  bool at_crossing_plan = false;
  for (const SurgeryPlan& p : res.log)
    if (p.kind == SurgeryCase::AtCrossing && norm(p.target.p) < 1e-6) {
      at_crossing_plan = true;
      // The chord between the contacts may not be axis-parallel.
      Pt chord = p.p_r - p.p_l;
      double len = norm(chord);
      CHECK(std::fabs(chord.x) > 0.01 * len);
      CHECK(std::fabs(chord.y) > 0.01 * len);
    }
  CHECK(at_crossing_plan);
  CHECK(check_flags(res.domain).nip);
}

TEST_CASE("desingularize ncv: rotated ellipse needs exactly four caps") {
  Scene s;
  s.curves = {rotated_ellipse(M_PI / 6.0, 2.0, 1.0)};
  s.box = sq(-3, 3);
  s.seed = {0, 0};
  Domain d = build_domain(s);
  DomainFlags fl = check_flags(d);
  CHECK(!fl.ncv);

  SurgeryResult res = desingularize(d, SurgeryMode::Ncv);
  CHECK(res.log.size() == 4);
  DomainFlags fl2 = check_flags(res.domain);
  CHECK(fl2.ncv);
  // The four carved points are the rotated axis ends.
  double c30 = std::cos(M_PI / 6.0), s30 = std::sin(M_PI / 6.0);
  std::vector<Pt> expect = {{2.0 * c30, 2.0 * s30},
                            {-2.0 * c30, -2.0 * s30},
                            {-s30, c30},
                            {s30, -c30}};
  for (const Pt& e : expect) {
    bool found = false;
    for (const SurgeryPlan& p : res.log)
      if (dist(p.target.p, e) < 1e-3) found = true;
    CHECK_MESSAGE(found, "missing cap at an ellipse axis end");
  }
}
