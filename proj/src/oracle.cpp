#include "algdom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "algdom/errors.hpp"

namespace algdom {

namespace {

// ---------------------------------------------------------------------
// grid_reeb
// ---------------------------------------------------------------------

struct DomainCells {
  int res = 0;
  Box box;
  std::vector<char> in;  // res*res, 1 for seed-component cells

  double center_x(int i) const { return box.x_lo + (i + 0.5) * box.width() / res; }
  double center_y(int j) const { return box.y_lo + (j + 0.5) * box.height() / res; }
  bool at(int i, int j) const {
    return i >= 0 && j >= 0 && i < res && j < res && in[static_cast<size_t>(j) * res + i];
  }
};

DomainCells sample_domain(const Scene& scene, int res) {
  if (scene.curves.size() > 8)
    throw Error(ErrorCode::ParseError, "oracle supports at most 8 curves");
  DomainCells g;
  g.res = res;
  g.box = scene.box;
  size_t ncell = static_cast<size_t>(res) * res;
  std::vector<unsigned char> sig(ncell, 0);
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i) {
      double x = g.center_x(i), y = g.center_y(j);
      unsigned char bits = 0;
      for (size_t k = 0; k < scene.curves.size(); ++k)
        if (scene.curves[k].eval(x, y) > 0.0) bits |= static_cast<unsigned char>(1u << k);
      sig[static_cast<size_t>(j) * res + i] = bits;
    }
  int si = static_cast<int>((scene.seed.x - g.box.x_lo) / g.box.width() * res);
  int sj = static_cast<int>((scene.seed.y - g.box.y_lo) / g.box.height() * res);
  si = std::clamp(si, 0, res - 1);
  sj = std::clamp(sj, 0, res - 1);
  unsigned char want = sig[static_cast<size_t>(sj) * res + si];
  g.in.assign(ncell, 0);
  std::deque<std::pair<int, int>> q{{si, sj}};
  g.in[static_cast<size_t>(sj) * res + si] = 1;
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    for (int dir = 0; dir < 4; ++dir) {
      int nx = x + dx[dir], ny = y + dy[dir];
      if (nx < 0 || ny < 0 || nx >= res || ny >= res) continue;
      size_t at = static_cast<size_t>(ny) * res + nx;
      if (g.in[at] || sig[at] != want) continue;
      g.in[at] = 1;
      q.push_back({nx, ny});
    }
  }
  return g;
}

struct GridCrossing {
  Pt p;
  int sweep_cell = 0;  // cell index along the sweep axis
  int fiber_cell = 0;
};

// Crossings of curve pairs: corner-sign scan, then plain Newton.
std::vector<GridCrossing> find_grid_crossings(const Scene& scene, const DomainCells& g,
                                              Axis axis) {
  int res = g.res;
  std::vector<GridCrossing> out;
  if (scene.curves.size() < 2) return out;
  double cw = g.box.width() / res, ch = g.box.height() / res;
  auto corner = [&](const Poly2& f, int i, int j) {
    return f.eval(g.box.x_lo + i * cw, g.box.y_lo + j * ch);
  };
  for (size_t a = 0; a < scene.curves.size(); ++a)
    for (size_t b = a + 1; b < scene.curves.size(); ++b) {
      const Poly2& fa = scene.curves[a];
      const Poly2& fb = scene.curves[b];
      std::vector<Pt> found;
      for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i) {
          double a00 = corner(fa, i, j), a10 = corner(fa, i + 1, j);
          double a01 = corner(fa, i, j + 1), a11 = corner(fa, i + 1, j + 1);
          bool achg = !((a00 > 0) == (a10 > 0) && (a00 > 0) == (a01 > 0) &&
                        (a00 > 0) == (a11 > 0));
          if (!achg) continue;
          double b00 = corner(fb, i, j), b10 = corner(fb, i + 1, j);
          double b01 = corner(fb, i, j + 1), b11 = corner(fb, i + 1, j + 1);
          bool bchg = !((b00 > 0) == (b10 > 0) && (b00 > 0) == (b01 > 0) &&
                        (b00 > 0) == (b11 > 0));
          if (!bchg) continue;
          // Newton on the pair from the cell center.
          Pt p{g.center_x(i), g.center_y(j)};
          bool conv = false;
          for (int it = 0; it < 60; ++it) {
            double va = fa.eval(p), vb = fb.eval(p);
            Pt ga = fa.gradient(p), gb = fb.gradient(p);
            double det = ga.x * gb.y - ga.y * gb.x;
            if (std::fabs(det) < 1e-14) break;
            double dx = (va * gb.y - vb * ga.y) / det;
            double dy = (vb * ga.x - va * gb.x) / det;
            p.x -= dx;
            p.y -= dy;
            if (std::hypot(dx, dy) < 1e-13) {
              conv = true;
              break;
            }
          }
          if (!conv || !g.box.contains(p)) continue;
          double scale = std::max({1.0, fa.coeff_scale(), fb.coeff_scale()});
          if (std::fabs(fa.eval(p)) > 1e-8 * scale || std::fabs(fb.eval(p)) > 1e-8 * scale)
            continue;
          // keep crossings adjacent to the sampled domain
          int ci = static_cast<int>((p.x - g.box.x_lo) / cw);
          int cj = static_cast<int>((p.y - g.box.y_lo) / ch);
          bool adj = false;
          for (int v = -2; v <= 2 && !adj; ++v)
            for (int u = -2; u <= 2 && !adj; ++u)
              if (g.at(ci + u, cj + v)) adj = true;
          if (!adj) continue;
          found.push_back(p);
        }
      // dedupe: the same crossing is found from several cells
      double merge = 2.0 * std::max(cw, ch);
      for (const Pt& p : found) {
        bool dup = false;
        for (const GridCrossing& c : out)
          if (dist(c.p, p) <= merge) {
            dup = true;
            break;
          }
        if (dup) continue;
        GridCrossing c;
        c.p = p;
        if (axis == Axis::X) {
          c.sweep_cell = std::clamp(static_cast<int>((p.x - g.box.x_lo) / cw), 0, res - 1);
          c.fiber_cell = std::clamp(static_cast<int>((p.y - g.box.y_lo) / ch), 0, res - 1);
        } else {
          c.sweep_cell = std::clamp(static_cast<int>((p.y - g.box.y_lo) / ch), 0, res - 1);
          c.fiber_cell = std::clamp(static_cast<int>((p.x - g.box.x_lo) / cw), 0, res - 1);
        }
        out.push_back(c);
      }
    }
  return out;
}

struct Run {
  int t0 = 0, t1 = 0;  // inclusive fiber-cell range
  int origin = -1;     // vertex the open thread descends from
};

bool runs_overlap(const Run& a, const Run& b) { return a.t0 <= b.t1 && b.t0 <= a.t1; }

}  // namespace

VDigraph grid_reeb(const Scene& scene, Axis axis, int res) {
  DomainCells g = sample_domain(scene, res);
  const int n = res;
  auto cell_in = [&](int s, int t) {
    return axis == Axis::X ? g.at(s, t) : g.at(t, s);
  };
  auto sweep_center = [&](int s) {
    return axis == Axis::X ? g.center_x(s) : g.center_y(s);
  };

  std::vector<std::vector<Run>> cols(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    int t = 0;
    while (t < n) {
      if (!cell_in(s, t)) {
        ++t;
        continue;
      }
      Run r;
      r.t0 = t;
      while (t + 1 < n && cell_in(s, t + 1)) ++t;
      r.t1 = t;
      cols[static_cast<size_t>(s)].push_back(r);
      ++t;
    }
  }

  auto crossings = find_grid_crossings(scene, g, axis);
  std::sort(crossings.begin(), crossings.end(), [&](const GridCrossing& a, const GridCrossing& b) {
    return (axis == Axis::X ? a.p.x : a.p.y) < (axis == Axis::X ? b.p.x : b.p.y);
  });

  VDigraph out;
  int next_id = 0;
  auto new_vertex = [&](double h) {
    if (next_id >= 64) throw Error(ErrorCode::TooLarge, "grid sweep exceeds 64 vertices");
    out.vertices.push_back({next_id, h, {}});
    return next_id++;
  };

  // Births in the first populated column.
  for (Run& r : cols[0]) r.origin = new_vertex(sweep_center(0));

  size_t cross_at = 0;
  for (int s = 0; s + 1 < n; ++s) {
    auto& cur = cols[static_cast<size_t>(s)];
    auto& nxt = cols[static_cast<size_t>(s + 1)];
    std::vector<std::vector<int>> children(cur.size()), parents(nxt.size());
    for (size_t a = 0; a < cur.size(); ++a)
      for (size_t b = 0; b < nxt.size(); ++b)
        if (runs_overlap(cur[a], nxt[b])) {
          children[a].push_back(static_cast<int>(b));
          parents[b].push_back(static_cast<int>(a));
        }

    // Crossing insertions on pass-through runs in this slot.
    double lo_c = sweep_center(s), hi_c = sweep_center(s + 1);
    while (cross_at < crossings.size()) {
      double sc = axis == Axis::X ? crossings[cross_at].p.x : crossings[cross_at].p.y;
      if (sc >= hi_c) break;
      if (sc < lo_c) {
        ++cross_at;  // before the first populated slot
        continue;
      }
      int tc = crossings[cross_at].fiber_cell;
      for (size_t a = 0; a < cur.size(); ++a) {
        if (tc < cur[a].t0 - 1 || tc > cur[a].t1 + 1) continue;
        if (children[a].size() != 1) break;  // an event vertex stands in
        if (parents[static_cast<size_t>(children[a][0])].size() != 1) break;
        int v = new_vertex(sc);
        out.edges.push_back({cur[a].origin, v});
        cur[a].origin = v;
        break;
      }
      ++cross_at;
    }

    // Deaths and splits resolve on the current column.
    std::vector<int> handoff(cur.size(), -1);
    for (size_t a = 0; a < cur.size(); ++a) {
      if (children[a].empty()) {
        int v = new_vertex(sweep_center(s));
        out.edges.push_back({cur[a].origin, v});
      } else if (children[a].size() >= 2) {
        int v = new_vertex(sweep_center(s));
        out.edges.push_back({cur[a].origin, v});
        handoff[a] = v;
      } else {
        handoff[a] = cur[a].origin;
      }
    }
    // Births and merges resolve on the next column.
    for (size_t b = 0; b < nxt.size(); ++b) {
      if (parents[b].empty()) {
        nxt[b].origin = new_vertex(sweep_center(s + 1));
      } else if (parents[b].size() >= 2) {
        int v = new_vertex(sweep_center(s + 1));
        for (int a : parents[b]) out.edges.push_back({handoff[static_cast<size_t>(a)], v});
        nxt[b].origin = v;
      } else {
        nxt[b].origin = handoff[static_cast<size_t>(parents[b][0])];
      }
    }
  }
  for (Run& r : cols[static_cast<size_t>(n - 1)]) {
    int v = new_vertex(sweep_center(n - 1));
    out.edges.push_back({r.origin, v});
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------
// sampled_diffgeo_scan
// ---------------------------------------------------------------------

// Marching-squares polylines of the zero set, chained through shared
// cell-edge ids.
std::vector<std::vector<Pt>> marching_polylines(const Poly2& f, const Box& box, int res) {
  std::vector<double> corner(static_cast<size_t>(res + 1) * (res + 1));
  double cw = box.width() / res, ch = box.height() / res;
  for (int j = 0; j <= res; ++j)
    for (int i = 0; i <= res; ++i)
      corner[static_cast<size_t>(j) * (res + 1) + i] =
          f.eval(box.x_lo + i * cw, box.y_lo + j * ch);
  auto val = [&](int i, int j) { return corner[static_cast<size_t>(j) * (res + 1) + i]; };
  auto neg = [&](double v) { return v < 0.0; };

  // Edge ids: horizontal (i,j)-(i+1,j) and vertical (i,j)-(i,j+1).
  auto h_edge = [&](int i, int j) { return (static_cast<long>(j) * (res + 1) + i) * 2; };
  auto v_edge = [&](int i, int j) { return (static_cast<long>(j) * (res + 1) + i) * 2 + 1; };
  std::map<long, Pt> pt_of;
  auto cut_h = [&](int i, int j) -> bool {
    double a = val(i, j), b = val(i + 1, j);
    if (neg(a) == neg(b)) return false;
    double t = a / (a - b);
    pt_of[h_edge(i, j)] = {box.x_lo + (i + t) * cw, box.y_lo + j * ch};
    return true;
  };
  auto cut_v = [&](int i, int j) -> bool {
    double a = val(i, j), b = val(i, j + 1);
    if (neg(a) == neg(b)) return false;
    double t = a / (a - b);
    pt_of[v_edge(i, j)] = {box.x_lo + i * cw, box.y_lo + (j + t) * ch};
    return true;
  };

  std::multimap<long, long> link;  // edge id -> connected edge id
  auto add_seg = [&](long e1, long e2) {
    link.insert({e1, e2});
    link.insert({e2, e1});
  };
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i) {
      long cuts[4];
      int ncut = 0;
      if (cut_h(i, j)) cuts[ncut++] = h_edge(i, j);
      if (cut_h(i, j + 1)) cuts[ncut++] = h_edge(i, j + 1);
      if (cut_v(i, j)) cuts[ncut++] = v_edge(i, j);
      if (cut_v(i + 1, j)) cuts[ncut++] = v_edge(i + 1, j);
      if (ncut == 2) {
        add_seg(cuts[0], cuts[1]);
      } else if (ncut == 4) {
        // saddle cell: split by the center sign to keep branches apart
        double c = f.eval(box.x_lo + (i + 0.5) * cw, box.y_lo + (j + 0.5) * ch);
        bool c_like_00 = neg(c) == neg(val(i, j));
        // cuts order: bottom, top, left, right
        if (c_like_00) {
          add_seg(cuts[0], cuts[3]);  // bottom-right
          add_seg(cuts[1], cuts[2]);  // top-left
        } else {
          add_seg(cuts[0], cuts[2]);  // bottom-left
          add_seg(cuts[1], cuts[3]);  // top-right
        }
      }
    }

  std::vector<std::vector<Pt>> polys;
  std::set<long> used;
  auto degree = [&](long e) { return link.count(e); };
  auto walk = [&](long start) {
    std::vector<Pt> poly;
    long prev = -1, cur = start;
    while (true) {
      used.insert(cur);
      poly.push_back(pt_of[cur]);
      long nxt = -1;
      auto range = link.equal_range(cur);
      for (auto it = range.first; it != range.second; ++it)
        if (it->second != prev && !used.count(it->second)) {
          nxt = it->second;
          break;
        }
      if (nxt < 0) break;
      prev = cur;
      cur = nxt;
    }
    return poly;
  };
  // open chains first (ends have degree 1), then loops
  for (const auto& [e, _] : link) {
    if (used.count(e) || degree(e) != 1) continue;
    auto poly = walk(e);
    if (poly.size() >= 8) polys.push_back(std::move(poly));
  }
  for (const auto& [e, _] : link) {
    if (used.count(e)) continue;
    auto poly = walk(e);
    if (poly.size() >= 8) polys.push_back(std::move(poly));
  }
  return polys;
}

}  // namespace

DiffgeoScan sampled_diffgeo_scan(const Poly2& f, const Box& box, int res) {
  DiffgeoScan scan;
  auto polys = marching_polylines(f, box, res);
  const double span = box.span();

  struct BitCand {
    Pt mid;
    double angle;
  };
  std::vector<BitCand> bit_cands;

  for (const auto& poly : polys) {
    const long n = static_cast<long>(poly.size());
    bool closed = dist(poly.front(), poly.back()) < 3.0 * span / res;
    // Wide-stencil discrete curvature: the turn between the chords
    // [k-S,k] and [k,k+S]. The stencil tames the O(cell) jitter of
    // single-step turn angles.
    const long S = std::max<long>(2, n / 150);
    std::vector<double> kappa;
    std::vector<long> kidx;  // polyline vertex behind each kappa sample
    long lo = closed ? 0 : S, hi = closed ? n : n - S;
    auto at = [&](long i) -> const Pt& {
      return poly[static_cast<size_t>(((i % n) + n) % n)];
    };
    for (long k = lo; k < hi; ++k) {
      Pt d1 = at(k) - at(k - S), d2 = at(k + S) - at(k);
      double l1 = norm(d1), l2 = norm(d2);
      if (l1 < 1e-12 || l2 < 1e-12) continue;
      double turn = std::atan2(cross(d1, d2), dot(d1, d2));
      kappa.push_back(turn / (0.5 * (l1 + l2)));
      kidx.push_back(k);
    }
    const long m = static_cast<long>(kappa.size());
    if (m < 16) continue;
    // moving-average smoothing
    std::vector<double> sk(static_cast<size_t>(m), 0.0);
    const int w = 4;
    for (long k = 0; k < m; ++k) {
      double acc = 0.0;
      int cnt = 0;
      for (long o = -w; o <= w; ++o) {
        long idx = k + o;
        if (closed) idx = ((idx % m) + m) % m;
        else if (idx < 0 || idx >= m) continue;
        acc += kappa[static_cast<size_t>(idx)];
        ++cnt;
      }
      sk[static_cast<size_t>(k)] = acc / cnt;
    }
    double kmax = *std::max_element(sk.begin(), sk.end());
    double kmin = *std::min_element(sk.begin(), sk.end());
    double krange = kmax - kmin;
    double kscale = std::max(std::fabs(kmax), std::fabs(kmin));
    // A constant-curvature arc shows only stencil noise; features need
    // relative variation well above that noise.
    bool flat = kscale < 1e-9 || krange <= 0.12 * kscale;

    // Counts a hysteresis state machine's sign flips over `vals`; closed
    // curves scan two laps so the wrap-straddling flip is not lost.
    auto flips = [&](const std::vector<double>& vals, double band) {
      long total = 0;
      int state = 0;
      long passes = closed ? 2 * m : m;
      for (long k = 0; k < passes; ++k) {
        double v = vals[static_cast<size_t>(k % m)];
        int s = v > band ? 1 : (v < -band ? -1 : 0);
        if (s == 0) continue;
        if (state != 0 && s != state) ++total;
        state = s;
      }
      return closed ? (total + 1) / 2 : total;
    };

    // inflections: sign changes of curvature
    if (kscale > 1e-9 && kmin < 0.0 && kmax > 0.0)
      scan.inflections += static_cast<int>(flips(sk, 0.1 * kscale));

    // curvature vertices: sign changes of the curvature derivative
    if (!flat) {
      std::vector<double> dk(static_cast<size_t>(m), 0.0);
      double dmax = 0.0;
      for (long k = 0; k < m; ++k) {
        long a = k - 1, b = k + 1;
        if (closed) {
          a = ((a % m) + m) % m;
          b = b % m;
        } else {
          a = std::max<long>(a, 0);
          b = std::min<long>(b, m - 1);
        }
        dk[static_cast<size_t>(k)] =
            sk[static_cast<size_t>(b)] - sk[static_cast<size_t>(a)];
        dmax = std::max(dmax, std::fabs(dk[static_cast<size_t>(k)]));
      }
      if (dmax > 0.0)
        scan.curvature_vertices += static_cast<int>(flips(dk, 0.05 * dmax));
    }

    // Bitangent candidates: chords that locally SUPPORT the curve at both
    // endpoints. Testing one-sidedness over a vertex window instead of
    // tangent alignment makes detection robust to the sampling offset
    // between a sample and the true contact point. A curvature floor
    // stops a near-straight stretch from pairing with itself along its
    // own chord.
    const double kappa_floor = 0.5 / span;
    const double tol_side = 0.002 * span;  // allowed dip past the chord
    const double bow_min = 0.006 * span;   // required bend away from it
    const long Wn = 3 * S;                 // support window, in vertices
    const long stride = std::max<long>(1, m / 256);
    // Returns the side the curve bows to near the sample (+1 along nrm,
    // -1 against it, 0 if the chord is not a local support line). A
    // genuine double tangent supports the curve on the SAME side at both
    // contacts; inflection-straddling secants bow opposite ways.
    auto supports = [&](long kap_idx, const Pt& origin, const Pt& nrm) {
      long c = kidx[static_cast<size_t>(kap_idx)];
      double lo_dev = 0.0, hi_dev = 0.0;
      for (long o = -Wn; o <= Wn; ++o) {
        long v = c + o;
        if (!closed && (v < 0 || v >= n)) return 0;
        double s = dot(at(v) - origin, nrm);
        lo_dev = std::min(lo_dev, s);
        hi_dev = std::max(hi_dev, s);
      }
      if (lo_dev >= -tol_side && hi_dev >= bow_min) return 1;
      if (hi_dev <= tol_side && lo_dev <= -bow_min) return -1;
      return 0;
    };
    for (long a = 0; a < m; a += stride) {
      if (std::fabs(sk[static_cast<size_t>(a)]) < kappa_floor) continue;
      Pt pa = poly[static_cast<size_t>(kidx[static_cast<size_t>(a)])];
      for (long b = a + stride; b < m; b += stride) {
        if (std::fabs(sk[static_cast<size_t>(b)]) < kappa_floor) continue;
        Pt pb = poly[static_cast<size_t>(kidx[static_cast<size_t>(b)])];
        Pt chord = pb - pa;
        double cl = norm(chord);
        if (cl < 0.12 * span) continue;
        Pt nrm{-chord.y / cl, chord.x / cl};
        int sa = supports(a, pa, nrm);
        if (sa == 0 || sa != supports(b, pa, nrm)) continue;
        Pt mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
        bit_cands.push_back({mid, std::atan2(chord.y, chord.x)});
      }
    }
  }
  // cluster bitangent candidates by midpoint and direction
  std::vector<BitCand> reps;
  for (const BitCand& c : bit_cands) {
    bool dup = false;
    for (const BitCand& r : reps) {
      double da = std::fabs(std::remainder(c.angle - r.angle, 3.14159265358979323846));
      if (dist(c.mid, r.mid) < 0.1 * span && da < 0.2) {
        dup = true;
        break;
      }
    }
    if (!dup) reps.push_back(c);
  }
  scan.bitangents = static_cast<int>(reps.size());
  return scan;
}

}  // namespace algdom
