#include "algdom/reeb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "algdom/errors.hpp"
#include "algdom/interval.hpp"
#include "algdom/roots.hpp"

namespace algdom {

namespace {

// Sign of f at p certified by a point-interval evaluation; 0 when the
// enclosure straddles zero.
int certified_sign(const Poly2& f, const Pt& p) {
  Interval v = f.eval_interval(Interval(p.x, p.x), Interval(p.y, p.y));
  if (v.lo > 0.0) return 1;
  if (v.hi < 0.0) return -1;
  return 0;
}

bool point_on_kept_arcs(const Domain& d, const Pt& p, const std::set<int>& curves,
                        double eps) {
  for (const BoundaryArc& arc : d.arcs) {
    if (!curves.count(arc.curve)) continue;
    size_t nseg = arc.closed ? arc.pts.size() : arc.pts.size() - 1;
    for (size_t s = 0; s < nseg; ++s)
      if (dist_point_segment(p, arc.pts[s], arc.pts[(s + 1) % arc.pts.size()]) <= eps)
        return true;
  }
  return false;
}

}  // namespace

int VDigraph::in_degree(int id) const {
  int n = 0;
  for (const VEdge& e : edges)
    if (e.to == id) ++n;
  return n;
}

int VDigraph::out_degree(int id) const {
  int n = 0;
  for (const VEdge& e : edges)
    if (e.from == id) ++n;
  return n;
}

Fiber fiber_at(const Domain& d, Axis axis, double c) {
  const Box& box = d.scene.box;
  Pt a, b;
  if (axis == Axis::X) {
    a = {c, box.y_lo};
    b = {c, box.y_hi};
  } else {
    a = {box.x_lo, c};
    b = {box.x_hi, c};
  }
  const double len = dist(a, b);
  const double t_tol = d.scene.tol.fiber / len;

  // Breakpoints: certified roots of every curve along the line.
  struct Bp {
    double t;
    int curve;
  };
  std::vector<Bp> raw;
  for (size_t k = 0; k < d.scene.curves.size(); ++k) {
    Poly1 r = d.scene.curves[k].restrict_segment(a, b);
    auto roots = isolate_univariate_roots(r, 0.0, 1.0, t_tol,
                                          d.scene.curves[k].coeff_scale());
    for (const RootInterval& ri : roots)
      raw.push_back({0.5 * (ri.lo + ri.hi), static_cast<int>(k)});
  }
  std::sort(raw.begin(), raw.end(), [](const Bp& x, const Bp& y) { return x.t < y.t; });

  // Merge breakpoints closer than the solver scale: a crossing on the
  // line is hit by both curves at the same geometric point.
  const double merge_t = 10.0 * std::max(d.scene.tol.solver, d.scene.tol.fiber) / len;
  struct Break {
    double t;
    std::set<int> curves;
  };
  std::vector<Break> bps;
  for (const Bp& r : raw) {
    if (!bps.empty() && r.t - bps.back().t <= merge_t) {
      bps.back().curves.insert(r.curve);
      // keep t as the first representative; merged mates are within merge_t
    } else {
      bps.push_back({r.t, {r.curve}});
    }
  }

  auto to_pt = [&](double t) { return Pt{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; };
  auto fiber_coord = [&](double t) {
    return axis == Axis::X ? a.y + t * (b.y - a.y) : a.x + t * (b.x - a.x);
  };

  // Seed sign vector: the open domain lies strictly inside one sign cell
  // of the arrangement, so a certified sign mismatch is a certified "out".
  std::vector<int> seed_sign(d.scene.curves.size());
  for (size_t k = 0; k < d.scene.curves.size(); ++k)
    seed_sign[k] = certified_sign(d.scene.curves[k], d.scene.seed);

  // No curve crosses the line inside a gap, so membership is constant
  // across it: any probe point that can be decided answers for the whole
  // gap. The midpoint can sit pathologically close to a curve (a merge
  // tangency reached at an inexact station coordinate), so retreat to
  // other quantiles before giving up.
  auto gap_inside = [&](double t0, double t1) {
    for (double q : {0.5, 0.25, 0.75, 0.125, 0.875, 0.0625, 0.9375}) {
      Pt probe = to_pt(t0 + q * (t1 - t0));
      bool sign_ok = true;
      for (size_t k = 0; k < d.scene.curves.size(); ++k) {
        int s = certified_sign(d.scene.curves[k], probe);
        if (s != 0 && s != seed_sign[k]) return false;  // certified outside
        if (s == 0) sign_ok = false;                    // too close to a curve
      }
      if (!sign_ok) continue;
      try {
        return d.inside(probe);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MembershipUndecided) throw;
      }
    }
    throw Error(ErrorCode::MembershipUndecided,
                "fiber gap membership not certifiable at any probe point");
  };

  // Gap g ranges over [t_{g-1}, t_g] with virtual endpoints 0 and 1.
  //
  // Stations sit at certified-but-inexact coordinates, so a fiber
  // through a tangency can carry a sliver of width ~sqrt(span * tol)
  // instead of the exact touch point. Slivers are too thin for a
  // midpoint membership test; their closure status comes from their
  // bounding breakpoints instead (squeezed against the boundary, the
  // gap is in the closed domain iff its walls are).
  // Certified touch points sit within the trace sagitta of the kept
  // polylines; a wider band would adopt curve points just past a kept
  // arc's endpoint (on a piece removed from the boundary) and synthesize
  // phantom degenerate components next to crossings.
  const double arc_eps = std::max(3e-4, 20.0 * d.scene.tol.solver);
  const double w_thin =
      std::sqrt(8.0 * box.span() * std::max(d.scene.tol.solver, d.scene.tol.fiber)) / len;
  size_t ngap = bps.size() + 1;
  std::vector<char> in(ngap, 0);
  for (size_t g = 0; g < ngap; ++g) {
    double t0 = g == 0 ? 0.0 : bps[g - 1].t;
    double t1 = g == bps.size() ? 1.0 : bps[g].t;
    if (t1 - t0 <= 2.0 * merge_t) continue;  // sliver between merged twins
    if (t1 - t0 < w_thin) {
      if (g == 0 || g == bps.size()) continue;  // thin strip against the box border
      in[g] = (point_on_kept_arcs(d, to_pt(t0), bps[g - 1].curves, arc_eps) &&
               point_on_kept_arcs(d, to_pt(t1), bps[g].curves, arc_eps))
                  ? 1
                  : 0;
      continue;
    }
    in[g] = gap_inside(t0, t1) ? 1 : 0;
  }

  Fiber out;
  out.axis = axis;
  out.coord = c;
  size_t g = 0;
  while (g < ngap) {
    if (in[g]) {
      size_t e = g;
      while (e + 1 < ngap && in[e + 1]) ++e;  // glue runs across shared breakpoints
      double lo_t = g == 0 ? 0.0 : bps[g - 1].t;
      double hi_t = e == bps.size() ? 1.0 : bps[e].t;
      out.intervals.push_back({fiber_coord(lo_t), fiber_coord(hi_t)});
      g = e + 1;
      continue;
    }
    ++g;
  }
  // Degenerate point components: breakpoints with both flanking gaps
  // outside, sitting on a kept boundary arc.
  for (size_t i = 0; i < bps.size(); ++i) {
    if (in[i] || in[i + 1]) continue;
    Pt p = to_pt(bps[i].t);
    if (point_on_kept_arcs(d, p, bps[i].curves, arc_eps))
      out.intervals.push_back({fiber_coord(bps[i].t), fiber_coord(bps[i].t)});
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const FiberInterval& x, const FiberInterval& y) { return x.lo < y.lo; });
  return out;
}

namespace {

struct StationComp {
  FiberInterval iv;
  int vertex = -1;  // id when this component carries a characteristic point
};

bool overlaps(const FiberInterval& a, const FiberInterval& b, double eps) {
  return a.lo - eps <= b.hi && b.lo - eps <= a.hi;
}

}  // namespace

VDigraph poincare_reeb(Domain& d, Axis axis) {
  MorseFlags mf = classify_morse(d);
  if (!mf.morse) {
    std::string why = "sweep requires a Morse domain";
    for (const Witness& w : mf.witnesses) {
      why += "; ";
      why += w.what;
    }
    throw Error(ErrorCode::NotMorse, why);
  }
  auto cs = characteristic_set(d, axis);
  const double tol = d.scene.tol.solver;
  const Box& box = d.scene.box;
  const double span = box.span();
  const double eps = std::max(1e-8 * span, 10.0 * tol);

  auto sweep_of = [&](const Pt& p) { return axis == Axis::X ? p.x : p.y; };
  auto fiber_of = [&](const Pt& p) { return axis == Axis::X ? p.y : p.x; };

  // Stations: characteristic coordinates, merged at the G-separation
  // scale (distinct characteristic points are farther apart by the Morse
  // check; twins of one geometric point collapse together).
  std::vector<double> stations;
  for (const CharPoint& c : cs) stations.push_back(sweep_of(c.p));
  std::sort(stations.begin(), stations.end());
  stations.erase(std::unique(stations.begin(), stations.end(),
                             [&](double a, double b) { return b - a <= 10.0 * tol; }),
                 stations.end());
  if (stations.empty())
    throw Error(ErrorCode::SweepMatchingAmbiguous, "no characteristic stations in the sweep");

  VDigraph g;
  int next_id = 0;

  // Station fibers with vertex marks.
  std::vector<std::vector<StationComp>> scomps(stations.size());
  for (size_t i = 0; i < stations.size(); ++i) {
    Fiber f = fiber_at(d, axis, stations[i]);
    for (const FiberInterval& iv : f.intervals) scomps[i].push_back({iv, -1});
    for (const CharPoint& c : cs) {
      if (std::fabs(sweep_of(c.p) - stations[i]) > 10.0 * tol) continue;
      double fc = fiber_of(c.p);
      int hit = -1;
      double best = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < scomps[i].size(); ++j) {
        double gap = std::max({scomps[i][j].iv.lo - fc, fc - scomps[i][j].iv.hi, 0.0});
        if (gap < best) {
          best = gap;
          hit = static_cast<int>(j);
        }
      }
      if (hit < 0 || best > eps) {
        // The inexact station coordinate can land on the empty side of a
        // tangency. The characteristic point itself is certified on the
        // domain closure, so its degenerate fiber component is real:
        // supply it.
        scomps[i].push_back({{fc, fc}, -1});
        hit = static_cast<int>(scomps[i].size() - 1);
      }
      if (scomps[i][static_cast<size_t>(hit)].vertex < 0) {
        scomps[i][static_cast<size_t>(hit)].vertex = next_id;
        g.vertices.push_back({next_id, stations[i], {}});
        ++next_id;
        if (next_id > 64) throw Error(ErrorCode::TooLarge, "sweep digraph exceeds 64 vertices");
      }
      int vid = scomps[i][static_cast<size_t>(hit)].vertex;
      for (VVertex& v : g.vertices)
        if (v.id == vid) v.points.push_back(c);
    }
  }

  // Sweep left to right. `origin[k]` is the vertex that the k-th open
  // slab component descends from.
  std::vector<FiberInterval> slab;
  std::vector<int> origin;
  for (size_t i = 0; i < stations.size(); ++i) {
    // Attach the incoming slab components to this station's components.
    std::vector<std::vector<int>> incoming(scomps[i].size());
    for (size_t k = 0; k < slab.size(); ++k) {
      int hit = -1;
      for (size_t j = 0; j < scomps[i].size(); ++j)
        if (overlaps(slab[k], scomps[i][j].iv, eps)) {
          if (hit >= 0)
            throw Error(ErrorCode::SweepMatchingAmbiguous,
                        "slab component overlaps two station components");
          hit = static_cast<int>(j);
        }
      if (hit < 0)
        throw Error(ErrorCode::SweepMatchingAmbiguous,
                    "slab component dies away from any characteristic point");
      incoming[static_cast<size_t>(hit)].push_back(static_cast<int>(k));
    }
    // Outgoing slab: the fiber just right of the station.
    std::vector<FiberInterval> right;
    if (i + 1 < stations.size()) {
      Fiber f = fiber_at(d, axis, 0.5 * (stations[i] + stations[i + 1]));
      right = f.intervals;
    }
    std::vector<std::vector<int>> outgoing(scomps[i].size());
    for (size_t k = 0; k < right.size(); ++k) {
      int hit = -1;
      for (size_t j = 0; j < scomps[i].size(); ++j)
        if (overlaps(right[k], scomps[i][j].iv, eps)) {
          if (hit >= 0)
            throw Error(ErrorCode::SweepMatchingAmbiguous,
                        "slab component overlaps two station components");
          hit = static_cast<int>(j);
        }
      if (hit < 0)
        throw Error(ErrorCode::SweepMatchingAmbiguous,
                    "slab component born away from any characteristic point");
      outgoing[static_cast<size_t>(hit)].push_back(static_cast<int>(k));
    }
    std::vector<int> next_origin(right.size(), -1);
    for (size_t j = 0; j < scomps[i].size(); ++j) {
      int v = scomps[i][j].vertex;
      if (v >= 0) {
        for (int k : incoming[j]) g.edges.push_back({origin[static_cast<size_t>(k)], v});
        for (int k : outgoing[j]) next_origin[static_cast<size_t>(k)] = v;
      } else {
        // Regular station component: exactly one thread passes through.
        if (incoming[j].size() != 1 || outgoing[j].size() != 1)
          throw Error(ErrorCode::SweepMatchingAmbiguous,
                      "fiber component changes multiplicity away from a characteristic point");
        next_origin[static_cast<size_t>(outgoing[j][0])] =
            origin[static_cast<size_t>(incoming[j][0])];
      }
    }
    slab = std::move(right);
    origin = std::move(next_origin);
  }
  if (!slab.empty())
    throw Error(ErrorCode::SweepMatchingAmbiguous,
                "fiber components persist past the last characteristic station");
  return g;
}

namespace {

// Height rank classes: vertices clustered by height at `tol`, labeled by
// ascending cluster index.
std::vector<int> height_ranks(const VDigraph& g, double tol) {
  std::vector<int> idx(g.vertices.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return g.vertices[static_cast<size_t>(a)].height < g.vertices[static_cast<size_t>(b)].height;
  });
  std::vector<int> rank(g.vertices.size(), 0);
  int r = 0;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i > 0 && g.vertices[static_cast<size_t>(idx[i])].height -
                         g.vertices[static_cast<size_t>(idx[i - 1])].height >
                     tol)
      ++r;
    rank[static_cast<size_t>(idx[i])] = r;
  }
  return rank;
}

struct IsoProblem {
  size_t n = 0;
  std::vector<int> a_rank, b_rank;
  std::vector<double> a_h, b_h;
  std::vector<std::vector<int>> a_adj, b_adj;  // edge multiplicity matrices
  CompareMode mode = CompareMode::ExactHeight;
  double height_tol = 1e-6;

  bool compatible(size_t va, size_t vb) const {
    switch (mode) {
      case CompareMode::Orientation: return true;
      case CompareMode::ExactHeight: return std::fabs(a_h[va] - b_h[vb]) <= height_tol;
      case CompareMode::HeightOrder: return a_rank[va] == b_rank[vb];
    }
    return false;
  }
};

bool extend(const IsoProblem& pr, std::vector<int>& map, std::vector<char>& used, size_t at) {
  if (at == pr.n) return true;
  for (size_t vb = 0; vb < pr.n; ++vb) {
    if (used[vb] || !pr.compatible(at, vb)) continue;
    bool ok = true;
    for (size_t prev = 0; prev < at && ok; ++prev) {
      int pb = map[prev];
      if (pr.a_adj[at][prev] != pr.b_adj[vb][static_cast<size_t>(pb)]) ok = false;
      if (pr.a_adj[prev][at] != pr.b_adj[static_cast<size_t>(pb)][vb]) ok = false;
    }
    if (pr.a_adj[at][at] != pr.b_adj[vb][vb]) ok = false;
    if (!ok) continue;
    used[vb] = 1;
    map[at] = static_cast<int>(vb);
    if (extend(pr, map, used, at + 1)) return true;
    used[vb] = 0;
  }
  return false;
}

// Dense ids 0..n-1 and adjacency multiplicity matrix.
bool build_side(const VDigraph& g, std::vector<std::vector<int>>& adj, std::vector<double>& h) {
  std::map<int, size_t> dense;
  for (const VVertex& v : g.vertices) {
    if (dense.count(v.id)) return false;
    dense[v.id] = dense.size();
  }
  size_t n = g.vertices.size();
  adj.assign(n, std::vector<int>(n, 0));
  h.assign(n, 0.0);
  for (const VVertex& v : g.vertices) h[dense[v.id]] = v.height;
  for (const VEdge& e : g.edges) {
    auto fi = dense.find(e.from), ti = dense.find(e.to);
    if (fi == dense.end() || ti == dense.end()) return false;
    ++adj[fi->second][ti->second];
  }
  return true;
}

}  // namespace

bool vdigraph_isomorphic(const VDigraph& a, const VDigraph& b, CompareMode mode,
                         double height_tol) {
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) return false;
  IsoProblem pr;
  pr.n = a.vertices.size();
  pr.mode = mode;
  pr.height_tol = height_tol;
  if (!build_side(a, pr.a_adj, pr.a_h) || !build_side(b, pr.b_adj, pr.b_h)) return false;
  // heights in pr follow dense (insertion) order; ranks from them
  {
    VDigraph tmp;
    tmp.vertices.resize(pr.n);
    for (size_t i = 0; i < pr.n; ++i) tmp.vertices[i] = {static_cast<int>(i), pr.a_h[i], {}};
    pr.a_rank = height_ranks(tmp, height_tol);
    for (size_t i = 0; i < pr.n; ++i) tmp.vertices[i] = {static_cast<int>(i), pr.b_h[i], {}};
    pr.b_rank = height_ranks(tmp, height_tol);
  }
  if (mode == CompareMode::HeightOrder) {
    // Same multiset of rank labels is necessary.
    auto ra = pr.a_rank, rb = pr.b_rank;
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    if (ra != rb) return false;
  }
  if (pr.n == 0) return true;
  std::vector<int> map(pr.n, -1);
  std::vector<char> used(pr.n, 0);
  return extend(pr, map, used, 0);
}

VDigraph smoothed(const VDigraph& g) {
  VDigraph out = g;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const VVertex& v : out.vertices) {
      int in_at = -1, out_at = -1, ins = 0, outs = 0;
      for (size_t e = 0; e < out.edges.size(); ++e) {
        if (out.edges[e].to == v.id) {
          ++ins;
          in_at = static_cast<int>(e);
        }
        if (out.edges[e].from == v.id) {
          ++outs;
          out_at = static_cast<int>(e);
        }
      }
      if (ins != 1 || outs != 1) continue;
      if (in_at == out_at) continue;  // self loop
      VEdge merged{out.edges[static_cast<size_t>(in_at)].from,
                   out.edges[static_cast<size_t>(out_at)].to};
      size_t hi = static_cast<size_t>(std::max(in_at, out_at));
      size_t lo = static_cast<size_t>(std::min(in_at, out_at));
      out.edges.erase(out.edges.begin() + static_cast<long>(hi));
      out.edges.erase(out.edges.begin() + static_cast<long>(lo));
      out.edges.push_back(merged);
      out.vertices.erase(std::remove_if(out.vertices.begin(), out.vertices.end(),
                                        [&](const VVertex& w) { return w.id == v.id; }),
                         out.vertices.end());
      changed = true;
      break;
    }
  }
  return out;
}

bool homeomorphic(const VDigraph& a, const VDigraph& b, CompareMode mode, double height_tol) {
  return vdigraph_isomorphic(smoothed(a), smoothed(b), mode, height_tol);
}

}  // namespace algdom
