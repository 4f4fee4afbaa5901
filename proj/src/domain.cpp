#include "algdom/domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <optional>
#include <set>

#include "algdom/errors.hpp"
#include "algdom/interval.hpp"
#include "algdom/roots.hpp"
#include "algdom/systems.hpp"

namespace algdom {

namespace {

double curve_floor(const Poly2& f) { return 1e-10 * std::max(1.0, f.coeff_scale()); }

BoxN box2n(const Box& b) {
  BoxN r;
  r.n = 2;
  r.lo = {b.x_lo, b.y_lo, 0.0, 0.0};
  r.hi = {b.x_hi, b.y_hi, 0.0, 0.0};
  return r;
}

std::vector<PolyN> lift2(const Poly2& a, const Poly2& b) {
  return {PolyN::lift(a, 2, 0, 1), PolyN::lift(b, 2, 0, 1)};
}

// Straight-segment membership certificate from the scene seed: `false`
// when p sits on a curve, `true` when the segment provably crosses no
// curve, nullopt when the segment count is nonzero or uncertifiable.
std::optional<bool> segment_certificate(const Scene& scene, const Pt& p) {
  for (const Poly2& f : scene.curves)
    if (std::fabs(f.eval(p)) <= curve_floor(f)) return false;
  if (dist(p, scene.seed) == 0.0) return true;
  size_t total = 0;
  for (const Poly2& f : scene.curves) {
    try {
      Poly1 r = f.restrict_segment(scene.seed, p);
      auto roots = isolate_univariate_roots(r, 0.0, 1.0, scene.tol.solver, f.coeff_scale());
      total += roots.size();
    } catch (const Error&) {
      return std::nullopt;  // identically-zero restriction or coarse tolerance
    }
  }
  if (total == 0) return true;
  return std::nullopt;
}

double min_dist_to_polyline(const Pt& p, const std::vector<Pt>& pts, bool closed) {
  double best = std::numeric_limits<double>::infinity();
  size_t nseg = closed ? pts.size() : pts.size() - 1;
  for (size_t k = 0; k + 1 <= nseg; ++k)
    best = std::min(best, dist_point_segment(p, pts[k], pts[(k + 1) % pts.size()]));
  return best;
}

}  // namespace

int GridMask::cell_index(const Pt& p) const {
  if (res <= 0 || !box.contains(p)) return -1;
  int i = static_cast<int>((p.x - box.x_lo) / box.width() * res);
  int j = static_cast<int>((p.y - box.y_lo) / box.height() * res);
  i = std::clamp(i, 0, res - 1);
  j = std::clamp(j, 0, res - 1);
  return j * res + i;
}

bool GridMask::decided(const Pt& p) const {
  int idx = cell_index(p);
  return idx >= 0 && definite[static_cast<size_t>(idx)];
}

bool GridMask::inside_seed_comp(const Pt& p) const {
  int idx = cell_index(p);
  return seed_comp >= 0 && idx >= 0 && definite[static_cast<size_t>(idx)] &&
         comp[static_cast<size_t>(idx)] == seed_comp;
}

GridMask build_mask(const std::vector<Poly2>& curves, const Box& box,
                    const Pt& seed, int res) {
  if (curves.size() > 8)
    throw Error(ErrorCode::ParseError, "mask supports at most 8 curves");
  GridMask m;
  m.box = box;
  m.res = res;
  size_t ncell = static_cast<size_t>(res) * res;
  m.comp.assign(ncell, -1);
  m.sign.assign(ncell, 0);
  m.definite.assign(ncell, 0);
  double cw = box.width() / res, ch = box.height() / res;
  // Raw interval evaluation of an expanded polynomial overestimates badly when
  // large terms nearly cancel (a small circle centered far from the origin turns
  // into x^2 + big*x + ..., whose monomials are evaluated independently).  For
  // cells the raw form cannot decide, refine with the mean-value form
  //   f(cell) ⊆ f(center) ± sup_cell|f_x|*w/2 ± sup_cell|f_y|*h/2,
  // which scales with the local gradient instead of the coefficient sizes.
  std::vector<Poly2> dfx, dfy;
  dfx.reserve(curves.size());
  dfy.reserve(curves.size());
  for (const Poly2& f : curves) {
    dfx.push_back(f.dx());
    dfy.push_back(f.dy());
  }
  for (int j = 0; j < res; ++j) {
    Interval yi(box.y_lo + j * ch, box.y_lo + (j + 1) * ch);
    for (int i = 0; i < res; ++i) {
      Interval xi(box.x_lo + i * cw, box.x_lo + (i + 1) * cw);
      unsigned char bits = 0;
      bool def = true;
      for (size_t k = 0; k < curves.size(); ++k) {
        Interval v = curves[k].eval_interval(xi, yi);
        if (!(v.lo > 0.0) && !(v.hi < 0.0)) {
          Interval cx(0.5 * (xi.lo + xi.hi)), cy(0.5 * (yi.lo + yi.hi));
          Interval fc = curves[k].eval_interval(cx, cy);
          Interval gx = dfx[k].eval_interval(xi, yi);
          Interval gy = dfy[k].eval_interval(xi, yi);
          double err = 0.5 * cw * std::max(std::abs(gx.lo), std::abs(gx.hi)) +
                       0.5 * ch * std::max(std::abs(gy.lo), std::abs(gy.hi));
          v = Interval(std::max(v.lo, fc.lo - err), std::min(v.hi, fc.hi + err));
        }
        if (v.lo > 0.0) bits |= static_cast<unsigned char>(1u << k);
        else if (!(v.hi < 0.0)) {
          def = false;
          break;
        }
      }
      size_t at = static_cast<size_t>(j) * res + i;
      m.definite[at] = def ? 1 : 0;
      m.sign[at] = bits;
    }
  }
  // 4-connected flood fill over definite cells with equal sign vectors
  int next_comp = 0;
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i) {
      size_t at = static_cast<size_t>(j) * res + i;
      if (!m.definite[at] || m.comp[at] >= 0) continue;
      int id = next_comp++;
      m.comp_touches_frame.push_back(0);
      std::deque<std::pair<int, int>> q{{i, j}};
      m.comp[at] = id;
      while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop_front();
        if (x == 0 || y == 0 || x == res - 1 || y == res - 1)
          m.comp_touches_frame[static_cast<size_t>(id)] = 1;
        size_t here = static_cast<size_t>(y) * res + x;
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int dir = 0; dir < 4; ++dir) {
          int nx = x + dx[dir], ny = y + dy[dir];
          if (nx < 0 || ny < 0 || nx >= res || ny >= res) continue;
          size_t nat = static_cast<size_t>(ny) * res + nx;
          if (!m.definite[nat] || m.comp[nat] >= 0 || m.sign[nat] != m.sign[here]) continue;
          m.comp[nat] = id;
          q.push_back({nx, ny});
        }
      }
    }
  int sidx = m.cell_index(seed);
  if (sidx >= 0 && m.definite[static_cast<size_t>(sidx)])
    m.seed_comp = m.comp[static_cast<size_t>(sidx)];
  return m;
}

bool contains_point(const Scene& scene, const Pt& p) {
  if (!scene.box.contains(p)) return false;
  auto cert = segment_certificate(scene, p);
  if (cert.has_value()) return *cert;
  for (int res : {256, 512, 1024}) {
    GridMask m = build_mask(scene.curves, scene.box, scene.seed, res);
    if (m.seed_comp < 0) continue;
    if (m.decided(p)) return m.inside_seed_comp(p);
  }
  throw Error(ErrorCode::MembershipUndecided,
              "membership not certifiable at maximum mask resolution");
}

bool Domain::inside(const Pt& p) const {
  if (!scene.box.contains(p)) return false;
  if (mask.decided(p)) return mask.inside_seed_comp(p);
  auto cert = segment_certificate(scene, p);
  if (cert.has_value()) return *cert;
  throw Error(ErrorCode::MembershipUndecided, "membership not certifiable near the boundary");
}

Domain build_domain(const Scene& scene) {
  if (scene.curves.empty()) throw Error(ErrorCode::ParseError, "scene needs at least one curve");
  if (!scene.box.valid()) throw Error(ErrorCode::ParseError, "invalid scene box");
  if (!(scene.tol.solver > 0.0) || !(scene.tol.trace_step > 0.0) || !(scene.tol.fiber > 0.0))
    throw Error(ErrorCode::ParseError, "tolerances must be positive");
  if (!scene.box.contains(scene.seed))
    throw Error(ErrorCode::OutsideBox, "seed outside the scene box");
  const double step = scene.tol.trace_step;
  const double tol = scene.tol.solver;

  for (size_t k = 0; k < scene.curves.size(); ++k) {
    if (std::fabs(scene.curves[k].eval(scene.seed)) <= curve_floor(scene.curves[k])) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "seed lies on curve %zu", k);
      throw Error(ErrorCode::OnCurve, buf);
    }
  }
  for (size_t k = 0; k < scene.curves.size(); ++k) {
    CurveCheck c = check_nonsingular(scene.curves[k], scene.box, tol);
    if (c.status == CurveCheck::Status::SingularAt) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "curve %zu singular near (%.9g, %.9g)", k,
                    c.where.x, c.where.y);
      throw Error(ErrorCode::SingularCurve, buf);
    }
    if (c.status == CurveCheck::Status::EmptyZeroSet) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "curve %zu has no points in the box", k);
      throw Error(ErrorCode::CurveMissesClosure, buf);
    }
  }

  // Pairwise crossings, all certified and transversal.
  std::vector<CharPoint> all_cross;
  for (size_t i = 0; i < scene.curves.size(); ++i)
    for (size_t j = i + 1; j < scene.curves.size(); ++j) {
      std::vector<CertifiedPoint> sols;
      try {
        sols = solve_system(lift2(scene.curves[i], scene.curves[j]), box2n(scene.box), tol);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::SingularCluster) {
          char buf[160];
          std::snprintf(buf, sizeof(buf), "curves %zu and %zu meet tangentially (%s)", i, j,
                        e.what());
          throw Error(ErrorCode::TangentialCrossing, buf);
        }
        throw;
      }
      for (const CertifiedPoint& s : sols) {
        Pt p = s.p2();
        Pt gi = scene.curves[i].gradient(p), gj = scene.curves[j].gradient(p);
        double denom = norm(gi) * norm(gj);
        if (denom < 1e-12 || std::fabs(cross(gi, gj)) / denom < 1e-6) {
          char buf[128];
          std::snprintf(buf, sizeof(buf), "curves %zu and %zu tangent at (%.9g, %.9g)", i, j,
                        p.x, p.y);
          throw Error(ErrorCode::TangentialCrossing, buf);
        }
        CharPoint c;
        c.kind = CharKind::Crossing;
        c.p = p;
        c.curve = static_cast<int>(i);
        c.other_curve = static_cast<int>(j);
        c.radius = s.radius;
        c.residual = s.residual;
        c.certified = s.certified;
        all_cross.push_back(c);
      }
    }
  for (size_t a = 0; a < all_cross.size(); ++a)
    for (size_t b = a + 1; b < all_cross.size(); ++b) {
      if (dist(all_cross[a].p, all_cross[b].p) > 10.0 * tol) continue;
      bool same_pair = all_cross[a].curve == all_cross[b].curve &&
                       all_cross[a].other_curve == all_cross[b].other_curve;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "crossings collide at (%.9g, %.9g)", all_cross[a].p.x,
                    all_cross[a].p.y);
      throw Error(same_pair ? ErrorCode::TangentialCrossing : ErrorCode::TriplePoint, buf);
    }

  // Sign-component mask, escalating resolution until the seed cell is
  // certified.
  GridMask mask;
  bool have_mask = false;
  for (int res : {256, 512, 1024}) {
    mask = build_mask(scene.curves, scene.box, scene.seed, res);
    if (mask.seed_comp >= 0) {
      have_mask = true;
      break;
    }
  }
  if (!have_mask)
    throw Error(ErrorCode::MembershipUndecided, "seed cell never certified sign-definite");
  if (mask.comp_touches_frame[static_cast<size_t>(mask.seed_comp)])
    throw Error(ErrorCode::UnboundedDomain, "seed component reaches the box frame");

  Domain d;
  d.scene = scene;
  d.mask = mask;

  // Trace every curve and split its components at the crossings they
  // carry.
  std::vector<BoundaryArc> candidates;
  for (size_t k = 0; k < scene.curves.size(); ++k) {
    auto comps = trace_curve(scene.curves[k], scene.box, step, tol);
    for (const auto& comp : comps) {
      struct Cut {
        double pos;  // fractional segment index along the polyline
        int cross_id;
      };
      std::vector<Cut> cuts;
      for (size_t c = 0; c < all_cross.size(); ++c) {
        if (all_cross[c].curve != static_cast<int>(k) &&
            all_cross[c].other_curve != static_cast<int>(k))
          continue;
        double best = std::numeric_limits<double>::infinity();
        double best_pos = 0.0;
        size_t nseg = comp.closed ? comp.pts.size() : comp.pts.size() - 1;
        for (size_t s = 0; s < nseg; ++s) {
          const Pt& a = comp.pts[s];
          const Pt& b = comp.pts[(s + 1) % comp.pts.size()];
          double dd = dist_point_segment(all_cross[c].p, a, b);
          if (dd < best) {
            best = dd;
            double seg_len = dist(a, b);
            double t = seg_len > 0 ? std::clamp(dot(Pt{all_cross[c].p.x - a.x, all_cross[c].p.y - a.y},
                                                    Pt{b.x - a.x, b.y - a.y}) /
                                                    (seg_len * seg_len),
                                                0.0, 1.0)
                                   : 0.0;
            best_pos = static_cast<double>(s) + t;
          }
        }
        if (best <= std::max(3.0 * step, 1e-6)) cuts.push_back({best_pos, static_cast<int>(c)});
      }
      std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.pos < b.pos; });

      // to_pos may exceed the point count when the span wraps a closed
      // component; indices are then taken mod n.
      auto slice = [&](double from_pos, double to_pos, int id_a, int id_b, bool wrap) {
        BoundaryArc arc;
        arc.curve = static_cast<int>(k);
        arc.end_a = id_a;
        arc.end_b = id_b;
        if (id_a >= 0) arc.pts.push_back(all_cross[static_cast<size_t>(id_a)].p);
        size_t n = comp.pts.size();
        for (double pos = std::floor(from_pos) + 1.0; pos < to_pos; pos += 1.0) {
          size_t s = static_cast<size_t>(pos);
          if (wrap) s %= n;
          else if (s >= n) break;
          arc.pts.push_back(comp.pts[s]);
        }
        if (id_b >= 0) arc.pts.push_back(all_cross[static_cast<size_t>(id_b)].p);
        if (arc.pts.size() >= 2) candidates.push_back(std::move(arc));
      };

      if (cuts.empty()) {
        BoundaryArc arc;
        arc.curve = static_cast<int>(k);
        arc.pts = comp.pts;
        arc.closed = comp.closed;
        candidates.push_back(std::move(arc));
      } else if (comp.closed) {
        for (size_t c = 0; c < cuts.size(); ++c) {
          size_t c2 = (c + 1) % cuts.size();
          double to = cuts[c2].pos + (c2 == 0 ? static_cast<double>(comp.pts.size()) : 0.0);
          slice(cuts[c].pos, to, cuts[c].cross_id, cuts[c2].cross_id, c2 == 0);
        }
      } else {
        slice(-0.5, cuts.front().pos, -1, cuts.front().cross_id, false);
        for (size_t c = 0; c + 1 < cuts.size(); ++c)
          slice(cuts[c].pos, cuts[c + 1].pos, cuts[c].cross_id, cuts[c + 1].cross_id, false);
        slice(cuts.back().pos, static_cast<double>(comp.pts.size()) + 0.5, cuts.back().cross_id,
              -1, false);
      }
    }
  }

  // Keep the arcs adjacent to the seed component: probe both normal
  // sides of the arc midpoint.
  std::vector<int> seed_sign(scene.curves.size(), 0);
  for (size_t k = 0; k < scene.curves.size(); ++k) {
    Interval v = scene.curves[k].eval_interval(Interval(scene.seed.x, scene.seed.x),
                                               Interval(scene.seed.y, scene.seed.y));
    seed_sign[k] = v.lo > 0.0 ? 1 : v.hi < 0.0 ? -1 : 0;
  }
  for (BoundaryArc& arc : candidates) {
    Pt m;
    if (arc.pts.size() >= 3) {
      m = arc.pts[arc.pts.size() / 2];
    } else {
      // Two-point arc between adjacent crossings: probe away from both
      // endpoints, from the chord midpoint pulled back onto the curve.
      m = Pt{0.5 * (arc.pts[0].x + arc.pts[1].x), 0.5 * (arc.pts[0].y + arc.pts[1].y)};
      const Poly2& f = scene.curves[static_cast<size_t>(arc.curve)];
      for (int it = 0; it < 4; ++it) {
        Pt g = f.gradient(m);
        double g2 = g.x * g.x + g.y * g.y;
        if (g2 < 1e-24) break;
        double v = f.eval(m);
        m.x -= v * g.x / g2;
        m.y -= v * g.y / g2;
      }
    }
    Pt n;
    try {
      n = tangent_at(scene.curves[static_cast<size_t>(arc.curve)], m).normal;
    } catch (const Error&) {
      d.warnings.push_back("arc midpoint gradient degenerate; arc dropped");
      continue;
    }
    // A probe leaving the box is decided: the domain is a bounded
    // in-box component, so outside the box is outside the domain.  A
    // certified sign mismatch against the seed's sign vector is also a
    // decided "out" — the open domain is one face of the arrangement —
    // and unlike the mask it resolves slivers thinner than a grid cell.
    auto probe = [&](const Pt& q, bool& in) {
      if (!scene.box.contains(q)) {
        in = false;
        return true;
      }
      for (size_t k = 0; k < scene.curves.size(); ++k) {
        Interval v = scene.curves[k].eval_interval(Interval(q.x, q.x), Interval(q.y, q.y));
        int s = v.lo > 0.0 ? 1 : v.hi < 0.0 ? -1 : 0;
        if (seed_sign[k] != 0 && s != 0 && s != seed_sign[k]) {
          in = false;
          return true;
        }
      }
      if (!mask.decided(q)) return false;
      in = mask.inside_seed_comp(q);
      return true;
    };
    bool verdict = false, ip = false, im = false;
    for (double mul : {0.5, 1.0, 3.0, 5.0, 8.0, 12.0}) {
      Pt pp{m.x + mul * step * n.x, m.y + mul * step * n.y};
      Pt pm{m.x - mul * step * n.x, m.y - mul * step * n.y};
      if (!probe(pp, ip) || !probe(pm, im)) continue;
      verdict = true;
      break;
    }
    if (!verdict) {
      d.warnings.push_back("arc side probes undecided; arc dropped");
      continue;
    }
    if (ip == im) {
      if (ip) d.warnings.push_back("arc reports the domain on both sides; arc dropped");
      continue;
    }
    arc.inside_sign = ip ? 1 : -1;
    d.arcs.push_back(arc);
  }

  // Renumber the crossings that survive as endpoints of kept arcs.
  std::vector<int> remap(all_cross.size(), -1);
  for (const BoundaryArc& arc : d.arcs)
    for (int e : {arc.end_a, arc.end_b})
      if (e >= 0 && remap[static_cast<size_t>(e)] < 0) {
        remap[static_cast<size_t>(e)] = static_cast<int>(d.crossings.size());
        d.crossings.push_back(all_cross[static_cast<size_t>(e)]);
      }
  for (BoundaryArc& arc : d.arcs) {
    if (arc.end_a >= 0) arc.end_a = remap[static_cast<size_t>(arc.end_a)];
    if (arc.end_b >= 0) arc.end_b = remap[static_cast<size_t>(arc.end_b)];
  }

  for (size_t k = 0; k < scene.curves.size(); ++k) {
    bool covered = false;
    for (const BoundaryArc& arc : d.arcs)
      if (arc.curve == static_cast<int>(k)) covered = true;
    if (!covered) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "curve %zu does not meet the domain closure", k);
      throw Error(ErrorCode::CurveMissesClosure, buf);
    }
  }
  return d;
}

std::vector<CharPoint> characteristic_set(Domain& d, Axis axis) {
  const double step = d.scene.tol.trace_step;
  const Box& box = d.scene.box;
  auto near_border = [&](const Pt& p) {
    return p.x - box.x_lo < 2.0 * step || box.x_hi - p.x < 2.0 * step ||
           p.y - box.y_lo < 2.0 * step || box.y_hi - p.y < 2.0 * step;
  };
  std::vector<CharPoint> out;
  for (const CharPoint& c : d.crossings) {
    if (near_border(c.p)) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "crossing at (%.9g, %.9g) near the box border excluded",
                    c.p.x, c.p.y);
      d.warnings.push_back(buf);
      continue;
    }
    CharPoint cc = c;
    cc.axis = axis;
    out.push_back(cc);
  }
  std::set<int> curves_present;
  for (const BoundaryArc& arc : d.arcs) curves_present.insert(arc.curve);
  for (int k : curves_present) {
    auto poles = find_poles(d.scene.curves[static_cast<size_t>(k)], box, axis,
                            d.scene.tol.solver);
    for (CharPoint& pole : poles) {
      double best = std::numeric_limits<double>::infinity();
      for (const BoundaryArc& arc : d.arcs)
        if (arc.curve == k) best = std::min(best, min_dist_to_polyline(pole.p, arc.pts, arc.closed));
      if (best > std::max(2.0 * step, 1e-6)) continue;  // pole on a dropped piece of the curve
      if (near_border(pole.p)) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "pole at (%.9g, %.9g) near the box border excluded",
                      pole.p.x, pole.p.y);
        d.warnings.push_back(buf);
        continue;
      }
      pole.curve = k;
      out.push_back(pole);
    }
  }
  std::sort(out.begin(), out.end(), [axis](const CharPoint& a, const CharPoint& b) {
    double ka = axis == Axis::X ? a.p.x : a.p.y;
    double kb = axis == Axis::X ? b.p.x : b.p.y;
    if (ka != kb) return ka < kb;
    double oa = axis == Axis::X ? a.p.y : a.p.x;
    double ob = axis == Axis::X ? b.p.y : b.p.x;
    return oa < ob;
  });
  return out;
}

MorseFlags classify_morse(Domain& d) {
  MorseFlags out;
  char buf[192];
  for (Axis axis : {Axis::X, Axis::Y}) {
    auto cs = characteristic_set(d, axis);
    for (const CharPoint& c : cs) {
      if (c.kind == CharKind::Pole) {
        const Poly2& f = d.scene.curves[static_cast<size_t>(c.curve)];
        Poly2 second = axis == Axis::X ? f.derivative(Axis::Y, 2) : f.derivative(Axis::X, 2);
        if (std::fabs(second.eval(c.p)) <= 1e-8 * std::max(1.0, f.coeff_scale())) {
          std::snprintf(buf, sizeof(buf), "degenerate tangency at (%.9g, %.9g)", c.p.x, c.p.y);
          out.morse = false;
          out.witnesses.push_back({c.p, buf});
        }
      } else if (c.kind == CharKind::Crossing && axis == Axis::X) {
        // Crossing regularity covers both fiber directions; check once.
        for (int k : {c.curve, c.other_curve}) {
          const Poly2& f = d.scene.curves[static_cast<size_t>(k)];
          for (const Poly2& dfiber : {f.dy(), f.dx()}) {
            if (std::fabs(dfiber.eval(c.p)) <= 1e-8 * std::max(1.0, f.coeff_scale())) {
              std::snprintf(buf, sizeof(buf),
                            "crossing at (%.9g, %.9g) tangent to a sweep fiber", c.p.x, c.p.y);
              out.morse = false;
              out.witnesses.push_back({c.p, buf});
            }
          }
        }
      }
    }
    for (size_t a = 0; a + 1 < cs.size(); ++a) {
      double ca = axis == Axis::X ? cs[a].p.x : cs[a].p.y;
      double cb = axis == Axis::X ? cs[a + 1].p.x : cs[a + 1].p.y;
      if (cb - ca <= 10.0 * d.scene.tol.solver &&
          dist(cs[a].p, cs[a + 1].p) > 10.0 * d.scene.tol.solver) {
        std::snprintf(buf, sizeof(buf),
                      "distinct characteristic points share the axis-%c coordinate %.9g",
                      axis == Axis::X ? 'x' : 'y', ca);
        out.g_morse = false;
        out.witnesses.push_back({cs[a].p, buf});
      }
    }
  }
  if (!out.morse) out.g_morse = false;
  return out;
}

double boundary_distance(const Domain& d, const Pt& p, int curve) {
  double best = std::numeric_limits<double>::infinity();
  for (const BoundaryArc& arc : d.arcs)
    if (curve < 0 || arc.curve == curve)
      best = std::min(best, min_dist_to_polyline(p, arc.pts, arc.closed));
  return best;
}

DomainFlags check_flags(Domain& d, bool ndtl_same_curve_only) {
  DomainFlags out;
  const Box& box = d.scene.box;
  const double step = d.scene.tol.trace_step;
  const double tol = d.scene.tol.solver;
  // Certified points sit within the trace sagitta (~step^2 * curvature / 8)
  // of the boundary polylines; a membership band much wider than that would
  // adopt points just past an arc endpoint that belong to a removed piece.
  const double arc_eps = std::max(3e-4, 20.0 * tol);
  char buf[192];

  auto on_boundary_of = [&](const Pt& p, int curve) {
    return boundary_distance(d, p, curve) <= arc_eps;
  };

  std::set<int> curves_present;
  for (const BoundaryArc& arc : d.arcs) curves_present.insert(arc.curve);

  for (int k : curves_present) {
    const Poly2& f = d.scene.curves[static_cast<size_t>(k)];
    for (const CharPoint& c : find_inflections(f, box, step, tol))
      if (on_boundary_of(c.p, k)) {
        std::snprintf(buf, sizeof(buf), "inflection of curve %d on the boundary at (%.9g, %.9g)",
                      k, c.p.x, c.p.y);
        out.nip = false;
        out.witnesses.push_back({c.p, buf});
        CharPoint dp = c;
        dp.curve = k;
        out.defects.push_back(dp);
      }
    for (const CharPoint& c : find_curvature_vertices(f, box, step, tol))
      if (on_boundary_of(c.p, k)) {
        std::snprintf(buf, sizeof(buf),
                      "curvature vertex of curve %d on the boundary at (%.9g, %.9g)", k, c.p.x,
                      c.p.y);
        out.ncv = false;
        out.witnesses.push_back({c.p, buf});
        CharPoint dp = c;
        dp.curve = k;
        out.defects.push_back(dp);
      }
    for (const Bitangent& bt : find_bitangents(f, box, step, tol)) {
      Pt dir = bt.b - bt.a;
      double len = norm(dir);
      if (len < 1e-12) continue;
      Pt nrm{-dir.y / len, dir.x / len};
      Poly2 line = Poly2::line(nrm.x, nrm.y, -(nrm.x * bt.a.x + nrm.y * bt.a.y));
      // Points of each boundary curve on the tangent line: the two
      // tangency contacts (for the owning curve) plus certified
      // transversal intersections.  The contacts are double roots of
      // curve ∧ line that interval solving can lose once the
      // reconstructed line is off by the polish residual, so they are
      // seeded directly.
      for (int j : curves_present) {
        if (ndtl_same_curve_only && j != k) continue;
        std::vector<Pt> cand;
        if (j == k) cand = {bt.a, bt.b};
        SolveOptions opts;
        opts.collect_clusters = true;  // near-tangent intersections cluster
        try {
          for (const CertifiedPoint& q : solve_system(
                   lift2(d.scene.curves[static_cast<size_t>(j)], line), box2n(box), tol, opts))
            cand.push_back(q.p2());
        } catch (const Error&) {
          // keep the seeded contacts; transversal extras are best-effort
        }
        std::vector<Pt> reps;
        for (const Pt& q : cand) {
          bool dup = false;
          for (const Pt& r : reps) dup = dup || dist(q, r) <= arc_eps;
          if (dup) continue;
          reps.push_back(q);
          if (!on_boundary_of(q, j)) continue;
          std::snprintf(buf, sizeof(buf),
                        "boundary point (%.9g, %.9g) of curve %d on a double tangent line "
                        "of curve %d",
                        q.x, q.y, j, k);
          out.ndtl = false;
          out.witnesses.push_back({q, buf});
          CharPoint dp;
          dp.kind = CharKind::BitangentContact;
          dp.p = q;
          dp.curve = j;
          dp.other_curve = k;
          dp.certified = true;
          out.defects.push_back(dp);
        }
      }
    }
  }
  return out;
}

}  // namespace algdom
