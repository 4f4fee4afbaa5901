#include "algdom/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "algdom/errors.hpp"
#include "algdom/systems.hpp"

namespace algdom {

namespace {

constexpr double kGoldenAngle = 2.399963229728653;

// On-arc tolerance for deciding whether a certified point sits on a kept
// boundary arc: traced polylines deviate from the true curve by at most
// the chord sagitta (~step^2 * curvature / 8), far below the trace step.
double arc_eps_for(const Scene& s) { return std::max(3e-4, 20.0 * s.tol.solver); }

double poly_dist(const Pt& p, const std::vector<Pt>& pts, bool closed) {
  double best = std::numeric_limits<double>::infinity();
  if (pts.size() < 2) return pts.empty() ? best : dist(p, pts[0]);
  size_t nseg = closed ? pts.size() : pts.size() - 1;
  for (size_t k = 0; k < nseg; ++k)
    best = std::min(best, dist_point_segment(p, pts[k], pts[(k + 1) % pts.size()]));
  return best;
}

int nearest_arc(const Domain& d, const Pt& p, int curve) {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < d.arcs.size(); ++i) {
    if (curve >= 0 && d.arcs[i].curve != curve) continue;
    double dd = poly_dist(p, d.arcs[i].pts, d.arcs[i].closed);
    if (dd < bd) {
      bd = dd;
      best = static_cast<int>(i);
    }
  }
  return best;
}

// Unit normal at `p` pointing out of the domain, resolved through the
// side bookkeeping of the nearest boundary arc of `curve`.
Pt outward_normal(const Domain& d, const Pt& p, int curve) {
  int ai = nearest_arc(d, p, curve);
  if (ai < 0) throw Error(ErrorCode::ValidationFailed, "target has no boundary arc on its curve");
  const Poly2& f = d.scene.curves[static_cast<size_t>(curve)];
  Pt grad{f.dx().eval(p), f.dy().eval(p)};
  double g = norm(grad);
  if (g < 1e-12) throw Error(ErrorCode::SingularPoint, "vanishing gradient at surgery target");
  double s = static_cast<double>(d.arcs[static_cast<size_t>(ai)].inside_sign);
  return grad * (-s / g);
}

std::vector<PolyN> pair2(const Poly2& a, const Poly2& b) {
  return {PolyN::lift(a, 2, 0, 1), PolyN::lift(b, 2, 0, 1)};
}

BoxN window2(const Box& scene_box, const Pt& c, double half) {
  BoxN r;
  r.n = 2;
  r.lo = {std::max(scene_box.x_lo, c.x - half), std::max(scene_box.y_lo, c.y - half), 0.0, 0.0};
  r.hi = {std::min(scene_box.x_hi, c.x + half), std::min(scene_box.y_hi, c.y + half), 0.0, 0.0};
  return r;
}

// ((u . t)/a)^2 + ((u . n)/b)^2 - 1 with u = (x, y) - c, n = perp(t);
// equals the unit circle form scaled by 1/r^2 when a == b == r.
Poly2 conic_quadratic(const Pt& c, const Pt& t, double a, double b) {
  Pt n = perp(t);
  double A = t.x * t.x / (a * a) + n.x * n.x / (b * b);
  double B = 2.0 * (t.x * t.y / (a * a) + n.x * n.y / (b * b));
  double C = t.y * t.y / (a * a) + n.y * n.y / (b * b);
  double dx = -c.x, dy = -c.y;
  return Poly2({{2, 0, A},
                {1, 1, B},
                {0, 2, C},
                {1, 0, 2.0 * A * dx + B * dy},
                {0, 1, B * dx + 2.0 * C * dy},
                {0, 0, A * dx * dx + B * dx * dy + C * dy * dy - 1.0}});
}

double wrap_pi(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

// The kept conic arc runs from pl to pr through the point facing the
// domain (the direction of `target` from the center).  It must contain
// no parameter where the conic tangent is axis-parallel: such a point
// would be a projection pole on the new boundary and would spawn extra
// fiber-component events, changing the sweep graphs.
bool kept_arc_avoids_poles(const Pt& center, const Pt& that, double a, double b, const Pt& pl,
                           const Pt& pr, const Pt& target, double margin) {
  Pt nhat = perp(that);
  auto par = [&](const Pt& q) {
    return std::atan2(dot(q - center, nhat) / b, dot(q - center, that) / a);
  };
  double ta = par(target);
  double offl = wrap_pi(par(pl) - ta), offr = wrap_pi(par(pr) - ta);
  double lo = std::min(offl, offr), hi = std::max(offl, offr);
  if (!(lo < -1e-9 && hi > 1e-9)) return false;  // cap does not face the domain
  double bad[4];
  bad[0] = std::atan2(b * nhat.x, a * that.x);  // vertical tangent
  bad[1] = bad[0] + M_PI;
  bad[2] = std::atan2(b * nhat.y, a * that.y);  // horizontal tangent
  bad[3] = bad[2] + M_PI;
  for (double t : bad) {
    double off = wrap_pi(t - ta);
    if (off >= lo - margin && off <= hi + margin) return false;
  }
  return true;
}

struct CharContext {
  std::vector<CharPoint> all;         // both axes
  std::vector<double> stations_x;     // sorted sweep coordinates
  std::vector<double> stations_y;
};

CharContext char_context(Domain& d) {
  CharContext cc;
  for (Axis ax : {Axis::X, Axis::Y}) {
    std::vector<double>& st = ax == Axis::X ? cc.stations_x : cc.stations_y;
    for (const CharPoint& c : characteristic_set(d, ax)) {
      cc.all.push_back(c);
      st.push_back(ax == Axis::X ? c.p.x : c.p.y);
    }
    std::sort(st.begin(), st.end());
  }
  return cc;
}

// Nearest station coordinates strictly below/above `tc`, skipping the
// target's own (possibly shared) station.
std::pair<double, double> slab_around(const std::vector<double>& stations, double tc,
                                      double merge_eps) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (double s : stations) {
    if (s < tc - merge_eps) lo = std::max(lo, s);
    if (s > tc + merge_eps) hi = std::min(hi, s);
  }
  return {lo, hi};
}

struct Candidate {
  Poly2 conic;
  Pt center;
  double a = 0.0, b = 0.0;
  Pt that;  // unit tangent frame axis
  bool is_circle = true;
};

// Margin under which the conic value must stay negative/positive for
// inside/outside decisions, in the conic's own value scale.
double conic_margin(const Candidate& c) { return c.is_circle ? 0.004 * c.a * c.a : 0.004; }

bool validate_candidate(Domain& d, const CharContext& cc, const CharPoint& target,
                        bool at_crossing, const CharPoint& crossing, const Candidate& cand,
                        double loc_eps, SurgeryPlan& out) {
  const Scene& sc = d.scene;
  const double tol = sc.tol.solver;
  const double aeps = arc_eps_for(sc);

  // Target strictly inside, seed strictly outside, disk inside the box.
  if (cand.conic.eval(target.p) > -conic_margin(cand)) return false;
  if (cand.conic.eval(sc.seed) <= conic_margin(cand)) return false;
  if (!sc.box.contains_strict(cand.center, 1.2 * std::max(cand.a, cand.b))) return false;

  // Certified conic-curve intersections on kept arcs: exactly two.
  std::vector<Pt> contacts;
  std::vector<int> contact_curve;
  for (size_t j = 0; j < sc.curves.size(); ++j) {
    SolveOptions opts;
    opts.collect_clusters = true;
    std::vector<CertifiedPoint> sols;
    try {
      sols = solve_system(pair2(sc.curves[j], cand.conic),
                          window2(sc.box, cand.center, 1.4 * std::max(cand.a, cand.b)), tol, opts);
    } catch (const Error&) {
      return false;  // cannot certify the contact pattern
    }
    for (const CertifiedPoint& q : sols) {
      Pt p = q.p2();
      if (boundary_distance(d, p, static_cast<int>(j)) > aeps) continue;
      bool dup = false;
      for (size_t m = 0; m < contacts.size(); ++m)
        if (contact_curve[m] == static_cast<int>(j) &&
            dist(contacts[m], p) <= std::max(1e-6 * cand.a, 20.0 * tol))
          dup = true;
      if (dup) continue;
      contacts.push_back(p);
      contact_curve.push_back(static_cast<int>(j));
    }
  }
  if (contacts.size() != 2) return false;
  if (dist(contacts[0], contacts[1]) < 0.1 * std::min(cand.a, cand.b)) return false;

  // Case bookkeeping: a crossing-co-located defect must be carved with
  // its crossing and contacts one per branch; otherwise both contacts
  // stay on the target's own curve.
  if (at_crossing) {
    bool pair_ok = (contact_curve[0] == crossing.curve && contact_curve[1] == crossing.other_curve) ||
                   (contact_curve[1] == crossing.curve && contact_curve[0] == crossing.other_curve);
    if (!pair_ok) return false;
    Pt chord = contacts[1] - contacts[0];
    double len = norm(chord);
    if (std::fabs(chord.x) < 0.02 * len || std::fabs(chord.y) < 0.02 * len) return false;
  } else {
    if (contact_curve[0] != target.curve || contact_curve[1] != target.curve) return false;
  }

  // Transversality and Morse safety at the contacts.
  Poly2 cdx = cand.conic.dx(), cdy = cand.conic.dy();
  for (size_t m = 0; m < contacts.size(); ++m) {
    const Poly2& f = sc.curves[static_cast<size_t>(contact_curve[m])];
    Pt g1{f.dx().eval(contacts[m]), f.dy().eval(contacts[m])};
    Pt g2{cdx.eval(contacts[m]), cdy.eval(contacts[m])};
    double n1 = norm(g1), n2 = norm(g2);
    if (n1 < 1e-12 || n2 < 1e-12) return false;
    if (std::fabs(cross(g1, g2)) / (n1 * n2) < 1e-3) return false;
    double fs = 1e-7 * std::max(1.0, f.coeff_scale());
    double cs = 1e-7 * std::max(1.0, cand.conic.coeff_scale());
    if (std::fabs(g1.x) < fs || std::fabs(g1.y) < fs) return false;
    if (std::fabs(g2.x) < cs || std::fabs(g2.y) < cs) return false;
  }

  // The kept conic arc must stay monotone in both coordinates.
  if (!kept_arc_avoids_poles(cand.center, cand.that, cand.a, cand.b, contacts[0], contacts[1],
                             target.p, 0.03))
    return false;

  // The discarded part of the conic must stay certifiably outside the
  // domain (sign mismatch against the seed on some curve), so the disk
  // meets the domain only in the lune carved at the target.  A band near
  // each contact is skipped: there the conic legitimately hugs the
  // boundary on its way out.
  {
    Pt nhat = perp(cand.that);
    auto par = [&](const Pt& q) {
      return std::atan2(dot(q - cand.center, nhat) / cand.b,
                        dot(q - cand.center, cand.that) / cand.a);
    };
    double ta = par(target.p);
    double offl = wrap_pi(par(contacts[0]) - ta);
    double offr = wrap_pi(par(contacts[1]) - ta);
    double lo = std::min(offl, offr), hi = std::max(offl, offr);
    double skip = 3.0 * sc.tol.trace_step / std::min(cand.a, cand.b) + 0.05;
    double a0 = hi + skip, a1 = lo - skip + 2.0 * M_PI;
    std::vector<int> seed_sign(sc.curves.size(), 0);
    for (size_t k = 0; k < sc.curves.size(); ++k) {
      Interval v = sc.curves[k].eval_interval(Interval(sc.seed.x, sc.seed.x),
                                              Interval(sc.seed.y, sc.seed.y));
      seed_sign[k] = v.lo > 0.0 ? 1 : v.hi < 0.0 ? -1 : 0;
    }
    const int K = 48;
    for (int k = 0; k <= K && a1 > a0; ++k) {
      double t = ta + a0 + (a1 - a0) * k / K;
      Pt q = cand.center + cand.that * (cand.a * std::cos(t)) + nhat * (cand.b * std::sin(t));
      if (!sc.box.contains(q)) continue;  // outside the box is outside the domain
      bool certified_out = false;
      for (size_t m = 0; m < sc.curves.size() && !certified_out; ++m) {
        if (seed_sign[m] == 0) continue;
        Interval v = sc.curves[m].eval_interval(Interval(q.x, q.x), Interval(q.y, q.y));
        int s = v.lo > 0.0 ? 1 : v.hi < 0.0 ? -1 : 0;
        if (s != 0 && s != seed_sign[m]) certified_out = true;
      }
      if (!certified_out) return false;
    }
  }

  // Other characteristic points stay outside the disk; points co-located
  // with the target are carved along with it.
  for (const CharPoint& c : cc.all) {
    if (dist(c.p, target.p) <= loc_eps) {
      if (cand.conic.eval(c.p) >= -conic_margin(cand)) return false;
    } else {
      if (cand.conic.eval(c.p) <= conic_margin(cand)) return false;
    }
  }

  // New stations (the contacts, in both sweeps) stay strictly inside the
  // target's station slab so vertex height order is preserved.
  double merge_eps = 20.0 * tol;
  for (Axis ax : {Axis::X, Axis::Y}) {
    const std::vector<double>& st = ax == Axis::X ? cc.stations_x : cc.stations_y;
    double tc = ax == Axis::X ? target.p.x : target.p.y;
    auto [lo, hi] = slab_around(st, tc, merge_eps);
    for (const Pt& q : contacts) {
      double qc = ax == Axis::X ? q.x : q.y;
      if (qc <= lo + 1.5 * merge_eps || qc >= hi - 1.5 * merge_eps) return false;
    }
  }

  out.target = target;
  out.conic = cand.conic;
  out.center = cand.center;
  out.r1 = cand.a;
  out.r2 = cand.b;
  bool first_is_left = contacts[0].x < contacts[1].x ||
                       (contacts[0].x == contacts[1].x && contacts[0].y < contacts[1].y);
  out.p_l = first_is_left ? contacts[0] : contacts[1];
  out.p_r = first_is_left ? contacts[1] : contacts[0];
  out.kind = at_crossing ? SurgeryCase::AtCrossing : SurgeryCase::SingleCurve;
  return true;
}

}  // namespace

const char* surgery_mode_name(SurgeryMode mode) {
  switch (mode) {
    case SurgeryMode::Nip: return "nip";
    case SurgeryMode::Ndtl: return "ndtl";
    case SurgeryMode::Ncv: return "ncv";
  }
  return "?";
}

SurgeryPlan plan_disk(Domain& d, const CharPoint& target, SurgeryMode mode, double max_r) {
  (void)mode;  // the construction is identical for all three properties
  const Scene& sc = d.scene;
  const double span = sc.box.span();
  const double loc_eps = std::max(1e-6 * span, 100.0 * sc.tol.solver);

  CharContext cc = char_context(d);

  // Theorem hypotheses exclude defects at projection poles (there the
  // boundary tangent is axis-parallel and no graph-preserving cap
  // orientation exists).
  for (const CharPoint& c : cc.all)
    if (c.kind == CharKind::Pole && dist(c.p, target.p) <= loc_eps)
      throw Error(ErrorCode::HypothesisViolated,
                  "surgery target coincides with a projection pole");

  bool at_crossing = false;
  CharPoint crossing;
  for (const CharPoint& c : cc.all)
    if (c.kind == CharKind::Crossing && dist(c.p, target.p) <= loc_eps) {
      at_crossing = true;
      crossing = c;
      break;
    }

  // Outward direction and tangent frame at the target.
  Pt n_out;
  if (at_crossing) {
    Pt na = outward_normal(d, target.p, crossing.curve);
    Pt nb = outward_normal(d, target.p, crossing.other_curve);
    Pt sum = na + nb;
    n_out = norm(sum) > 1e-9 ? normalized(sum) : na;
  } else {
    n_out = outward_normal(d, target.p, target.curve);
  }
  Pt that = perp(n_out);

  // Starting radius: half the gap to the nearest foreign characteristic
  // point, clamped by the box border.
  double r0 = std::numeric_limits<double>::infinity();
  for (const CharPoint& c : cc.all)
    if (dist(c.p, target.p) > loc_eps) r0 = std::min(r0, 0.5 * dist(c.p, target.p));
  if (!std::isfinite(r0)) r0 = span / 20.0;
  double border = std::min(std::min(target.p.x - sc.box.x_lo, sc.box.x_hi - target.p.x),
                           std::min(target.p.y - sc.box.y_lo, sc.box.y_hi - target.p.y));
  r0 = std::min(r0, 0.4 * border);
  if (max_r > 0.0) r0 = std::min(r0, max_r);
  if (r0 <= 0.0)
    throw Error(ErrorCode::NoValidRadius, "no room for a surgery disk at the target");

  const double offsets[4] = {0.80, 0.90, 0.96, 0.99};
  double r = r0;
  for (int halving = 0; halving <= 40; ++halving, r *= 0.5) {
    for (int shape = 0; shape < 2; ++shape) {
      Candidate cand;
      cand.a = r;
      cand.b = shape == 0 ? r : 0.5 * r;
      cand.that = that;
      cand.is_circle = shape == 0;
      for (double hf : offsets) {
        for (int j = 0; j < 5; ++j) {
          Pt center = target.p + n_out * (cand.b * hf);
          if (j > 0) {
            double ang = j * kGoldenAngle;
            double rad = 0.1 * r * (0.25 + 0.75 * j / 4.0);
            center = center + Pt{std::cos(ang), std::sin(ang)} * rad;
          }
          cand.center = center;
          cand.conic = cand.is_circle ? Poly2::circle(center.x, center.y, r)
                                      : conic_quadratic(center, that, cand.a, cand.b);
          SurgeryPlan plan;
          if (validate_candidate(d, cc, target, at_crossing, crossing, cand, loc_eps, plan))
            return plan;
        }
      }
    }
  }
  throw Error(ErrorCode::NoValidRadius,
              "no conic validated after 40 radius halvings at the surgery target");
}

Domain apply_plan(const Domain& d, const SurgeryPlan& plan) {
  if (plan.conic.eval(d.scene.seed) <= 0.0)
    throw Error(ErrorCode::SeedSwallowed, "scene seed lies inside the inserted disk");
  Scene s2 = d.scene;
  s2.curves.push_back(plan.conic);
  Domain out;
  try {
    out = build_domain(s2);
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationFailed,
                std::string("domain revalidation after disk insertion failed: ") + e.what());
  }
  // The carved point must be strictly off the new boundary (it sits
  // inside the removed disk at a depth we can bound from the conic value).
  Pt g{plan.conic.dx().eval(plan.target.p), plan.conic.dy().eval(plan.target.p)};
  double depth = std::fabs(plan.conic.eval(plan.target.p)) / std::max(norm(g), 1e-12);
  double floor_dist = std::min(arc_eps_for(d.scene), 0.5 * depth);
  if (boundary_distance(out, plan.target.p) <= floor_dist)
    throw Error(ErrorCode::ValidationFailed, "carved defect still lies on the new boundary");
  return out;
}

namespace {

std::vector<CharPoint> mode_defects(Domain& d, SurgeryMode mode, bool same_curve_only,
                                    double loc_eps) {
  DomainFlags fl = check_flags(d, same_curve_only);
  CharKind want = mode == SurgeryMode::Nip    ? CharKind::Inflection
                  : mode == SurgeryMode::Ndtl ? CharKind::BitangentContact
                                              : CharKind::CurvatureVertex;
  std::vector<CharPoint> out;
  for (const CharPoint& c : fl.defects) {
    if (c.kind != want) continue;
    bool dup = false;
    for (const CharPoint& o : out)
      if (dist(o.p, c.p) <= loc_eps) dup = true;
    if (!dup) out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const CharPoint& a, const CharPoint& b) {
    if (a.p.x != b.p.x) return a.p.x < b.p.x;
    if (a.p.y != b.p.y) return a.p.y < b.p.y;
    return a.curve < b.curve;
  });
  return out;
}

}  // namespace

SurgeryResult desingularize(const Domain& d, SurgeryMode mode, bool ndtl_same_curve_only) {
  SurgeryResult res;
  res.domain = d;
  const double loc_eps = std::max(1e-6 * d.scene.box.span(), 100.0 * d.scene.tol.solver);

  Domain before = d;
  VDigraph gx0 = poincare_reeb(before, Axis::X);
  VDigraph gy0 = poincare_reeb(before, Axis::Y);

  std::vector<CharPoint> defects = mode_defects(res.domain, mode, ndtl_same_curve_only, loc_eps);
  const size_t cap = 8 * std::max<size_t>(defects.size(), 1);
  size_t iters = 0;

  while (!defects.empty()) {
    if (++iters > cap) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "%s surgery still reports %zu defects after %zu insertions",
                    surgery_mode_name(mode), defects.size(), iters - 1);
      throw Error(ErrorCode::NotConverged, buf);
    }
    const CharPoint target = defects.front();
    SurgeryPlan plan;
    Domain next;
    double max_r = 0.0;
    for (int attempt = 0;; ++attempt) {
      plan = plan_disk(res.domain, target, mode, max_r);
      if (plan.r1 == plan.r2) {
        // Inserted circles must be differential-geometrically clean.
        const Box& box = d.scene.box;
        double step = d.scene.tol.trace_step, tol = d.scene.tol.solver;
        if (!find_inflections(plan.conic, box, step, tol).empty() ||
            !find_bitangents(plan.conic, box, step, tol).empty() ||
            !find_curvature_vertices(plan.conic, box, step, tol).empty())
          throw Error(ErrorCode::ValidationFailed, "inserted circle fails the cleanliness check");
      }
      try {
        next = apply_plan(res.domain, plan);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ValidationFailed || attempt >= 3) throw;
        max_r = 0.5 * plan.r1;  // retry with a smaller plan
      }
    }
    res.domain = std::move(next);
    res.log.push_back(plan);
    defects = mode_defects(res.domain, mode, ndtl_same_curve_only, loc_eps);
  }

  // Postconditions of the main theorems, asserted: curves kept, sweep
  // graphs preserved up to degree-two vertices, carved domain contained
  // in the original one.
  VDigraph gx1 = poincare_reeb(res.domain, Axis::X);
  VDigraph gy1 = poincare_reeb(res.domain, Axis::Y);
  if (!homeomorphic(gx0, gx1, CompareMode::HeightOrder) ||
      !homeomorphic(gy0, gy1, CompareMode::HeightOrder))
    throw Error(ErrorCode::GraphChanged, "disk insertion changed a sweep graph");
  double step = d.scene.tol.trace_step;
  for (const BoundaryArc& arc : res.domain.arcs)
    for (size_t i = 0; i < arc.pts.size(); i += 7) {
      const Pt& q = arc.pts[i];
      bool in = false;
      try {
        in = d.inside(q);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MembershipUndecided) throw;
        // Undecided cells hug the original boundary; the distance test
        // below settles those points.
      }
      if (!in && boundary_distance(d, q) > 4.0 * step)
        throw Error(ErrorCode::GraphChanged, "carved domain left the original closure");
    }
  return res;
}

}  // namespace algdom
