#include "algdom/curve.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

#include "algdom/errors.hpp"
#include "algdom/interval.hpp"

namespace algdom {

namespace {

// Newton projection onto {f = 0} along the gradient. Convergence is
// step-size driven; the residual check at the end guards against the
// iteration settling somewhere off the curve.
bool project_to_curve(const Poly2& f, Pt& p, int max_iter = 16) {
  Pt q = p;
  for (int it = 0; it < max_iter; ++it) {
    double v = f.eval(q);
    Pt g = f.gradient(q);
    double g2 = dot(g, g);
    if (g2 < 1e-24) return false;
    Pt step{-v * g.x / g2, -v * g.y / g2};
    q = q + step;
    if (norm(step) <= 1e-14 * std::max(1.0, norm(q))) break;
  }
  double floor_v = 1e-8 * std::max(1.0, f.coeff_scale());
  if (std::fabs(f.eval(q)) > floor_v) return false;
  p = q;
  return true;
}

// Unit tangent (-f_y, f_x) oriented to continue in direction `prev`.
bool step_tangent(const Poly2& f, const Pt& p, const Pt& prev, Pt& out) {
  Pt g = f.gradient(p);
  double n = norm(g);
  if (n < 1e-14) return false;
  Pt tau{-g.y / n, g.x / n};
  if (dot(tau, prev) < 0.0) tau = Pt{-tau.x, -tau.y};
  out = tau;
  return true;
}

struct VisitHash {
  double cell;
  Box box;
  std::unordered_set<long long> marked;
  long long key(const Pt& p) const {
    long long i = static_cast<long long>(std::floor((p.x - box.x_lo) / cell));
    long long j = static_cast<long long>(std::floor((p.y - box.y_lo) / cell));
    return i * 2000003LL + j;
  }
  void mark(const Pt& p) {
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di)
        marked.insert(key(Pt{p.x + di * cell, p.y + dj * cell}));
  }
  bool seen(const Pt& p) const { return marked.count(key(p)) > 0; }
};

// March from `start` in direction sign of `dir0`; returns the polyline
// excluding the start point. Sets `closed` when the march returned to
// the start.
std::vector<Pt> march(const Poly2& f, const Box& box, Pt start, Pt dir0,
                      double step, bool& closed) {
  std::vector<Pt> pts;
  closed = false;
  Pt p = start;
  Pt prev_dir = dir0;
  double h = step;
  double travelled = 0.0;
  const double h_min = step / 256.0;
  const long max_pts = 400000;
  while (static_cast<long>(pts.size()) < max_pts) {
    Pt tau;
    if (!step_tangent(f, p, prev_dir, tau)) {
      if (h > h_min) {
        h *= 0.5;
        continue;
      }
      throw Error(ErrorCode::TraceStalled, "gradient vanished along trace");
    }
    Pt cand{p.x + h * tau.x, p.y + h * tau.y};
    bool ok = project_to_curve(f, cand);
    if (ok && dist(cand, p) > 1.75 * h) ok = false;  // jumped to another branch
    if (ok) {
      Pt tau2;
      if (!step_tangent(f, cand, tau, tau2) || dot(tau, tau2) < 0.5)
        ok = false;  // sharp kink: curve turns faster than the step resolves
    }
    if (ok && !box.contains(cand)) {
      if (h > h_min) {
        h *= 0.5;
        continue;
      }
      break;  // leaves the box at the finest step: open end
    }
    if (!ok) {
      if (h > h_min) {
        h *= 0.5;
        continue;
      }
      throw Error(ErrorCode::TraceStalled, "corrector failed at minimum step");
    }
    travelled += dist(cand, p);
    // Closure test on the segment, not the endpoint: a full step can
    // land past the start point without ever entering a fixed ball
    // around it, which would repeat the lap forever.
    if (travelled > 3.0 * step && dist_point_segment(start, p, cand) < 0.35 * h) {
      closed = true;
      break;  // do not append cand: the loop ends at p, next to start
    }
    pts.push_back(cand);
    prev_dir = Pt{cand.x - p.x, cand.y - p.y};
    double nd = norm(prev_dir);
    prev_dir = Pt{prev_dir.x / nd, prev_dir.y / nd};
    p = cand;
    h = std::min(step, h * 1.6);
  }
  return pts;
}

double noise_floor(const Poly2& p) {
  return 1e-10 * std::max(1.0, p.coeff_scale());
}

// Walk k steps of size `step` along the curve from p in direction `dir`
// (sign convention from the caller's tangent). Returns the end point.
bool walk_along(const Poly2& f, Pt p, Pt dir, double step, int k, Pt& out) {
  Pt prev = dir;
  for (int i = 0; i < k; ++i) {
    Pt tau;
    if (!step_tangent(f, p, prev, tau)) return false;
    Pt cand{p.x + step * tau.x, p.y + step * tau.y};
    if (!project_to_curve(f, cand)) return false;
    prev = Pt{cand.x - p.x, cand.y - p.y};
    double n = norm(prev);
    if (n < 1e-300) return false;
    prev = Pt{prev.x / n, prev.y / n};
    p = cand;
  }
  out = p;
  return true;
}

std::vector<PolyN> lift2(const Poly2& a, const Poly2& b) {
  return {PolyN::lift(a, 2, 0, 1), PolyN::lift(b, 2, 0, 1)};
}

BoxN box2n(const Box& b) {
  BoxN r;
  r.n = 2;
  r.lo = {b.x_lo, b.y_lo, 0.0, 0.0};
  r.hi = {b.x_hi, b.y_hi, 0.0, 0.0};
  return r;
}

}  // namespace

CurveCheck check_nonsingular(const Poly2& f, const Box& box, double tol) {
  (void)tol;
  struct Node {
    Box b;
  };
  std::deque<Node> queue{{box}};
  long budget = 4000000;
  double min_size = std::max(1e-10, 1e-9 * box.span());
  bool any_curve = false;
  while (!queue.empty()) {
    if (--budget < 0) throw Error(ErrorCode::BudgetExceeded, "singularity scan budget exhausted");
    Box b = queue.front().b;
    queue.pop_front();
    Interval xi(b.x_lo, b.x_hi), yi(b.y_lo, b.y_hi);
    if (!f.eval_interval(xi, yi).contains_zero()) continue;
    bool gx = f.dx().eval_interval(xi, yi).contains_zero();
    bool gy = f.dy().eval_interval(xi, yi).contains_zero();
    if (!gx || !gy) {
      any_curve = true;  // curve may pass here, gradient provably nonzero
      continue;
    }
    if (std::max(b.width(), b.height()) < min_size) {
      CurveCheck c;
      c.status = CurveCheck::Status::SingularAt;
      c.where = Pt{0.5 * (b.x_lo + b.x_hi), 0.5 * (b.y_lo + b.y_hi)};
      return c;
    }
    Box lohalf = b, hihalf = b;
    if (b.width() >= b.height()) {
      double m = 0.5 * (b.x_lo + b.x_hi);
      lohalf.x_hi = m;
      hihalf.x_lo = m;
    } else {
      double m = 0.5 * (b.y_lo + b.y_hi);
      lohalf.y_hi = m;
      hihalf.y_lo = m;
    }
    queue.push_back({lohalf});
    queue.push_back({hihalf});
  }
  CurveCheck c;
  c.status = any_curve ? CurveCheck::Status::NonSingular : CurveCheck::Status::EmptyZeroSet;
  return c;
}

std::vector<TracedComponent> trace_curve(const Poly2& f, const Box& box,
                                         double step, double tol) {
  (void)tol;
  if (!(step > 0.0)) throw Error(ErrorCode::ParseError, "trace step must be positive");
  std::vector<TracedComponent> out;
  double span = std::max(box.width(), box.height());
  int n = std::clamp(static_cast<int>(std::ceil(span / step / 2.0)), 32, 700);
  std::vector<double> vals(static_cast<size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      double x = box.x_lo + box.width() * i / n;
      double y = box.y_lo + box.height() * j / n;
      vals[static_cast<size_t>(j) * (n + 1) + i] = f.eval(x, y);
    }
  auto neg = [](double v) { return v < 0.0; };

  VisitHash visited{0.5 * step, box, {}};
  auto try_seed = [&](double x0, double y0, double x1, double y1, double v0, double v1) {
    if (neg(v0) == neg(v1)) return;
    // bisect the grid edge for a starting point
    double t0 = 0.0, t1 = 1.0;
    for (int it = 0; it < 40; ++it) {
      double tm = 0.5 * (t0 + t1);
      double vm = f.eval(x0 + tm * (x1 - x0), y0 + tm * (y1 - y0));
      if (neg(vm) == neg(v0)) t0 = tm;
      else t1 = tm;
    }
    double tm = 0.5 * (t0 + t1);
    Pt seed{x0 + tm * (x1 - x0), y0 + tm * (y1 - y0)};
    if (!project_to_curve(f, seed)) return;
    if (!box.contains(seed) || visited.seen(seed)) return;
    Pt g = f.gradient(seed);
    double gn = norm(g);
    if (gn < 1e-12) return;
    Pt tau{-g.y / gn, g.x / gn};
    bool closed = false;
    std::vector<Pt> fwd = march(f, box, seed, tau, step, closed);
    TracedComponent comp;
    if (closed) {
      comp.closed = true;
      comp.pts.push_back(seed);
      comp.pts.insert(comp.pts.end(), fwd.begin(), fwd.end());
    } else {
      bool closed_b = false;
      std::vector<Pt> bwd = march(f, box, seed, Pt{-tau.x, -tau.y}, step, closed_b);
      comp.closed = closed_b;  // only possible for degenerate tiny loops
      comp.pts.assign(bwd.rbegin(), bwd.rend());
      comp.pts.push_back(seed);
      comp.pts.insert(comp.pts.end(), fwd.begin(), fwd.end());
    }
    if (comp.pts.size() < 3) return;
    for (const Pt& p : comp.pts) visited.mark(p);
    out.push_back(std::move(comp));
  };

  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      double x = box.x_lo + box.width() * i / n;
      double y = box.y_lo + box.height() * j / n;
      double v = vals[static_cast<size_t>(j) * (n + 1) + i];
      if (i < n) {
        double x2 = box.x_lo + box.width() * (i + 1) / n;
        try_seed(x, y, x2, y, v, vals[static_cast<size_t>(j) * (n + 1) + i + 1]);
      }
      if (j < n) {
        double y2 = box.y_lo + box.height() * (j + 1) / n;
        try_seed(x, y, x, y2, v, vals[static_cast<size_t>(j + 1) * (n + 1) + i]);
      }
    }
  return out;
}

TangentLine tangent_at(const Poly2& f, Pt p) {
  Pt g = f.gradient(p);
  double n = norm(g);
  if (n < 1e-12 * std::max(1.0, f.coeff_scale()))
    throw Error(ErrorCode::SingularPoint, "gradient vanishes at working precision");
  TangentLine t;
  t.point = p;
  t.dir = Pt{-g.y / n, g.x / n};
  t.normal = Pt{g.x / n, g.y / n};
  return t;
}

double curvature_at(const Poly2& f, Pt p) {
  Pt g = f.gradient(p);
  double n = norm(g);
  if (n < 1e-12 * std::max(1.0, f.coeff_scale()))
    throw Error(ErrorCode::SingularPoint, "curvature undefined where gradient vanishes");
  return curvature_numerator(f).eval(p) / (n * n * n);
}

std::vector<CharPoint> find_poles(const Poly2& f, const Box& box, Axis axis,
                                  double tol) {
  Poly2 d = axis == Axis::X ? f.dy() : f.dx();
  SolveOptions opts;
  opts.collect_clusters = true;  // degenerate tangencies (flat poles) are
                                 // reported uncertified, not thrown
  auto sols = solve_system(lift2(f, d), box2n(box), tol, opts);
  std::vector<CharPoint> out;
  for (const CertifiedPoint& s : sols) {
    CharPoint c;
    c.kind = CharKind::Pole;
    c.p = s.p2();
    c.axis = axis;
    c.radius = s.radius;
    c.residual = s.residual;
    c.certified = s.certified;
    out.push_back(c);
  }
  return out;
}

std::vector<CharPoint> find_inflections(const Poly2& f, const Box& box,
                                        double trace_step, double tol) {
  if (f.degree() <= 1) return {};  // straight lines carry no isolated inflection
  Poly2 N = curvature_numerator(f);
  if (N.is_zero()) return {};  // zero curvature everywhere: nothing isolated
  SolveOptions opts;
  opts.collect_clusters = true;  // undulation points have singular Jacobians
  auto sols = solve_system(lift2(f, N), box2n(box), tol, opts);
  double n_floor = noise_floor(N);
  std::vector<CharPoint> out;
  for (const CertifiedPoint& s : sols) {
    Pt p = s.p2();
    TangentLine t;
    try {
      t = tangent_at(f, p);
    } catch (const Error&) {
      continue;  // singular curve point, not an inflection
    }
    Pt fwd, bwd;
    if (!walk_along(f, p, t.dir, trace_step, 5, fwd) ||
        !walk_along(f, p, Pt{-t.dir.x, -t.dir.y}, trace_step, 5, bwd))
      continue;
    double vf = N.eval(fwd), vb = N.eval(bwd);
    if (std::fabs(vf) <= n_floor && std::fabs(vb) <= n_floor)
      throw Error(ErrorCode::SignUndetermined,
                  "curvature numerator sign indeterminate beside candidate inflection");
    if (vf * vb < 0.0) {
      CharPoint c;
      c.kind = CharKind::Inflection;
      c.p = p;
      c.radius = s.radius;
      c.residual = s.residual;
      c.certified = s.certified;
      out.push_back(c);
    }
  }
  return out;
}

std::vector<Bitangent> find_bitangents(const Poly2& f, const Box& box,
                                       double trace_step, double tol) {
  // A line meets a curve of degree <= 2 with total multiplicity <= 2, so
  // two tangential contacts (multiplicity 4) cannot occur.
  if (f.degree() <= 2) return {};
  auto comps = trace_curve(f, box, trace_step, tol);
  struct Sample {
    Pt p;
    Pt tan;
  };
  std::vector<Sample> samples;
  size_t total_pts = 0;
  for (const auto& c : comps) total_pts += c.pts.size();
  size_t stride = std::max<size_t>(1, total_pts / 360);
  for (const auto& c : comps)
    for (size_t k = 0; k < c.pts.size(); k += stride) {
      try {
        TangentLine t = tangent_at(f, c.pts[k]);
        samples.push_back({c.pts[k], t.dir});
      } catch (const Error&) {
      }
    }

  // 4D tangency system on pairs (p, q): both on the curve, chord parallel
  // to both tangents.
  PolyN fp = PolyN::lift(f, 4, 0, 1);
  PolyN fq = PolyN::lift(f, 4, 2, 3);
  PolyN x1 = PolyN::variable(4, 0), y1 = PolyN::variable(4, 1);
  PolyN x2 = PolyN::variable(4, 2), y2 = PolyN::variable(4, 3);
  PolyN gx_p = PolyN::lift(f.dx(), 4, 0, 1), gy_p = PolyN::lift(f.dy(), 4, 0, 1);
  PolyN gx_q = PolyN::lift(f.dx(), 4, 2, 3), gy_q = PolyN::lift(f.dy(), 4, 2, 3);
  PolyN chord_x = x2 - x1, chord_y = y2 - y1;
  std::vector<PolyN> eqs{fp, fq, gx_p * chord_x + gy_p * chord_y,
                         gx_q * chord_x + gy_q * chord_y};

  double sep_min = std::max(10.0 * tol, trace_step);
  double merge_eps = std::max(100.0 * tol, 1e-7);
  std::vector<Bitangent> out;
  for (size_t i = 0; i < samples.size(); ++i)
    for (size_t j = i + 1; j < samples.size(); ++j) {
      Pt d{samples[j].p.x - samples[i].p.x, samples[j].p.y - samples[i].p.y};
      double L = norm(d);
      if (L < std::max(20.0 * tol, 4.0 * trace_step)) continue;
      if (std::fabs(cross(samples[i].tan, d)) > 0.15 * L) continue;
      if (std::fabs(cross(samples[j].tan, d)) > 0.15 * L) continue;
      CertifiedPoint cp;
      try {
        cp = polish_newton(eqs, {samples[i].p.x, samples[i].p.y, samples[j].p.x, samples[j].p.y}, tol);
      } catch (const Error&) {
        continue;
      }
      Pt a{cp.x[0], cp.x[1]}, b{cp.x[2], cp.x[3]};
      if (dist(a, b) < sep_min) continue;
      if (!box.contains(a) || !box.contains(b)) continue;
      if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
      bool dup = false;
      for (const Bitangent& t : out)
        if (dist(t.a, a) < merge_eps && dist(t.b, b) < merge_eps) dup = true;
      if (dup) continue;
      // Certify by an independent tiny-box solve around the polished pair.
      Bitangent bt;
      bt.a = a;
      bt.b = b;
      bt.residual = cp.residual;
      bt.certified = false;
      double r = std::max(1e-6, 10.0 * tol);
      BoxN tiny;
      tiny.n = 4;
      tiny.lo = {a.x - r, a.y - r, b.x - r, b.y - r};
      tiny.hi = {a.x + r, a.y + r, b.x + r, b.y + r};
      try {
        auto verify = solve_system(eqs, tiny, tol);
        if (verify.size() == 1 && verify[0].certified) {
          bt.a = Pt{verify[0].x[0], verify[0].x[1]};
          bt.b = Pt{verify[0].x[2], verify[0].x[3]};
          bt.residual = verify[0].residual;
          bt.certified = true;
        }
      } catch (const Error&) {
      }
      out.push_back(bt);
    }
  std::sort(out.begin(), out.end(), [](const Bitangent& u, const Bitangent& v) {
    if (u.a.x != v.a.x) return u.a.x < v.a.x;
    if (u.a.y != v.a.y) return u.a.y < v.a.y;
    if (u.b.x != v.b.x) return u.b.x < v.b.x;
    return u.b.y < v.b.y;
  });
  return out;
}

std::vector<CharPoint> find_curvature_vertices(const Poly2& f, const Box& box,
                                               double trace_step, double tol) {
  Poly2 M = curvature_derivative_numerator(f);
  double m_floor = noise_floor(M);
  auto comps = trace_curve(f, box, trace_step, tol);
  std::vector<CharPoint> out;
  double merge_eps = std::max(100.0 * tol, 0.5 * trace_step);
  for (const auto& comp : comps) {
    size_t npts = comp.pts.size();
    if (npts < 3) continue;
    std::vector<double> vals(npts);
    for (size_t k = 0; k < npts; ++k) vals[k] = M.eval(comp.pts[k]);
    size_t nseg = comp.closed ? npts : npts - 1;
    for (size_t k = 0; k < nseg; ++k) {
      size_t k2 = (k + 1) % npts;
      double v0 = vals[k], v1 = vals[k2];
      // plateau guard: a constant-curvature arc has M below noise all along
      if (std::fabs(v0) <= m_floor || std::fabs(v1) <= m_floor) continue;
      if (v0 * v1 >= 0.0) continue;
      // bisect along the chord, re-projected onto the curve
      Pt a = comp.pts[k], b = comp.pts[k2];
      double va = v0;
      Pt mid = a;
      for (int it = 0; it < 30; ++it) {
        mid = Pt{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
        if (!project_to_curve(f, mid)) break;
        double vm = M.eval(mid);
        if (vm * va >= 0.0) {
          a = mid;
          va = vm;
        } else {
          b = mid;
        }
        if (dist(a, b) < tol) break;
      }
      CertifiedPoint cp;
      try {
        cp = polish_newton({PolyN::lift(f, 2, 0, 1), PolyN::lift(M, 2, 0, 1)},
                           {mid.x, mid.y, 0.0, 0.0}, tol);
      } catch (const Error&) {
        continue;
      }
      Pt p = cp.p2();
      if (!box.contains(p)) continue;
      bool dup = false;
      for (const CharPoint& c : out)
        if (dist(c.p, p) < merge_eps) dup = true;
      if (dup) continue;
      CharPoint c;
      c.kind = CharKind::CurvatureVertex;
      c.p = p;
      c.radius = cp.radius;
      c.residual = cp.residual;
      c.certified = true;
      out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end(), [](const CharPoint& u, const CharPoint& v) {
    if (u.p.x != v.p.x) return u.p.x < v.p.x;
    return u.p.y < v.p.y;
  });
  return out;
}

}  // namespace algdom
