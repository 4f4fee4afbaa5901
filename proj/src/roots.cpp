#include "algdom/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "algdom/errors.hpp"

namespace algdom {

namespace {

// Sign of p(t) certified by interval evaluation: 0 means the rigorous
// enclosure straddles zero (the point sits in the floating-point noise
// zone, e.g. near a multiple root) and no sign can be claimed.
int sign_certified(const Poly1& p, double t) {
  Interval v = p.eval_interval(Interval(t));
  if (v.lo > 0.0) return 1;
  if (v.hi < 0.0) return -1;
  return 0;
}

// March from `from` toward `toward` in geometrically growing steps until a
// certified sign appears. Returns {position, sign}; sign 0 if the whole
// span stayed uncertain.
struct SignProbe {
  double t;
  int s;
};
SignProbe probe_sign_inward(const Poly1& p, double from, double toward,
                            double first_step, double max_span) {
  double dir = toward > from ? 1.0 : -1.0;
  double off = 0.0;
  double step = first_step;
  while (off <= max_span) {
    double t = from + dir * off;
    int s = sign_certified(p, t);
    if (s != 0) return {t, s};
    off = off == 0.0 ? step : off + step;
    step *= 2.0;
  }
  return {from, 0};
}

// Shrink a certified sign-changing bracket. When the midpoint's sign is
// uncertain, nearby probes are tried; if the whole interior is uncertain
// the noise floor has been reached and the bracket is returned as-is.
RootInterval bisect_bracket(const Poly1& p, double a, double b, double tol,
                            int sa) {
  while (b - a > tol) {
    double w = b - a;
    double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double offs[7] = {0.0, -0.125, 0.125, -0.25, 0.25, -0.375, 0.375};
    double t = m;
    int s = 0;
    for (double o : offs) {
      t = m + o * w;
      if (t <= a || t >= b) continue;
      s = sign_certified(p, t);
      if (s != 0) break;
    }
    if (s == 0) break;  // interior fully inside the noise zone
    if (s == sa) a = t;
    else b = t;
  }
  return {a, b, RootParity::Odd};
}

// `relaxed_width` is set on recursive calls that only need cut positions
// for monotone pieces: a noise-stuck bracket wider than tol is still a
// correct cut and must not abort the outer isolation.
std::vector<RootInterval> isolate_impl(const Poly1& p, double lo, double hi,
                                       double tol, double zero_threshold,
                                       bool relaxed_width) {
  std::vector<RootInterval> out;
  if (lo >= hi) return out;
  if (p.coeff_scale() <= zero_threshold)
    throw Error(ErrorCode::IdenticallyZero, "polynomial vanishes identically at tolerance");
  if (p.degree() == 0) return out;  // nonzero constant

  double eps_floor = 8.0 * std::numeric_limits<double>::epsilon() *
                     std::max({1.0, std::fabs(lo), std::fabs(hi)});
  double tol_eff = std::max(tol, eps_floor);

  // Critical points of p partition [lo, hi] into monotone pieces.
  std::vector<RootInterval> crit;
  Poly1 dp = p.derivative();
  if (dp.degree() >= 1) {
    double inner_tol = std::max(0.25 * tol_eff, eps_floor);
    try {
      crit = isolate_impl(dp, lo, hi, inner_tol, zero_threshold, true);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IdenticallyZero) throw;
    }
  }
  std::sort(crit.begin(), crit.end(),
            [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });

  double floor_val = 1e-12 * std::max(1.0, p.coeff_scale());
  Poly1 ddp = dp.derivative();

  struct Station {
    double c;
    bool is_root;
    // Isolating interval of the derivative root that produced this
    // station: any even-multiplicity root of p near c lies inside it.
    double d_lo, d_hi;
    // Positions flanking c where the sign of p is certified; monotone
    // pieces start from these so station roots are not double-counted.
    double clear_lo, clear_hi;
    int sign_lo, sign_hi;
  };
  std::vector<Station> stations;
  for (size_t ci = 0; ci < crit.size(); ++ci) {
    double c = 0.5 * (crit[ci].lo + crit[ci].hi);
    if (c <= lo + tol_eff || c >= hi - tol_eff) continue;
    double span_l = (ci == 0 ? c - lo : c - 0.5 * (crit[ci - 1].lo + crit[ci - 1].hi));
    double span_r = (ci + 1 == crit.size()
                         ? hi - c
                         : 0.5 * (crit[ci + 1].lo + crit[ci + 1].hi) - c);
    double v = std::fabs(p.eval(c));
    double curv = std::fabs(ddp.is_zero() ? 0.0 : ddp.eval(c));
    double accept = curv * tol_eff * tol_eff + floor_val;
    double ambiguous = curv * (3.0 * tol_eff) * (3.0 * tol_eff) / 8.0 + 2.0 * floor_val;
    Station st{c, false, crit[ci].lo, crit[ci].hi, c - tol_eff, c + tol_eff, 0, 0};
    if (v <= accept) {
      st.is_root = true;
      SignProbe pl = probe_sign_inward(p, c - tol_eff, lo, tol_eff, 0.45 * span_l);
      SignProbe pr = probe_sign_inward(p, c + tol_eff, hi, tol_eff, 0.45 * span_r);
      st.clear_lo = pl.t;
      st.clear_hi = pr.t;
      st.sign_lo = pl.s;
      st.sign_hi = pr.s;
    } else if (v <= ambiguous) {
      throw Error(ErrorCode::ToleranceTooCoarse,
                  "near-root at critical point cannot be certified at tol");
    }
    stations.push_back(st);
  }

  for (const Station& st : stations) {
    if (!st.is_root) continue;
    if (st.sign_lo != 0 && st.sign_hi != 0 && st.sign_lo * st.sign_hi < 0) {
      // Odd root at a critical point (e.g. triple root): certified bracket.
      RootInterval r = bisect_bracket(p, st.clear_lo, st.clear_hi, tol_eff, st.sign_lo);
      if (!relaxed_width && r.hi - r.lo > 1.01 * tol_eff)
        throw Error(ErrorCode::ToleranceTooCoarse,
                    "odd multiple root cannot be located to tol in double precision");
      out.push_back(r);
    } else {
      // The even root (if any) is a root of p' too, so the derivative's
      // isolating interval is a rigorous enclosure; pad to tol width.
      double half = 0.5 * tol_eff;
      double a = std::max(lo, std::min(st.d_lo, st.c - half));
      double b = std::min(hi, std::max(st.d_hi, st.c + half));
      if (!relaxed_width && b - a > 1.01 * tol_eff)
        throw Error(ErrorCode::ToleranceTooCoarse,
                    "even root position cannot be certified to tol");
      out.push_back({a, b, RootParity::EvenOrUnknown});
    }
  }

  // Monotone pieces between consecutive stations (and the segment ends).
  double prev_cut = lo;
  bool prev_is_station = false;
  size_t prev_idx = 0;
  for (size_t k = 0; k <= stations.size(); ++k) {
    double cut = (k < stations.size()) ? stations[k].c : hi;
    double a = prev_cut, b = cut;
    if (prev_is_station) a = stations[prev_idx].clear_hi;
    if (k < stations.size()) b = stations[k].clear_lo;
    prev_cut = cut;
    prev_is_station = k < stations.size();
    prev_idx = k;
    if (a >= b) continue;
    double span = b - a;
    SignProbe pa = probe_sign_inward(p, a, b, tol_eff, 0.4 * span);
    SignProbe pb = probe_sign_inward(p, b, a, tol_eff, 0.4 * span);
    if (pa.s == 0 || pb.s == 0 || pa.t >= pb.t) continue;
    if (pa.s * pb.s < 0) {
      RootInterval r = bisect_bracket(p, pa.t, pb.t, tol_eff, pa.s);
      if (!relaxed_width && r.hi - r.lo > 1.01 * tol_eff)
        throw Error(ErrorCode::ToleranceTooCoarse,
                    "root bracket stuck above tol at the noise floor");
      out.push_back(r);
    }
  }

  std::sort(out.begin(), out.end(),
            [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
  for (size_t k = 0; k + 1 < out.size(); ++k) {
    if (out[k].hi >= out[k + 1].lo) {
      if (relaxed_width) {  // merge: cuts only need approximate positions
        out[k].hi = std::max(out[k].hi, out[k + 1].hi);
        out[k].parity = RootParity::EvenOrUnknown;
        out.erase(out.begin() + static_cast<long>(k + 1));
        --k;
        continue;
      }
      throw Error(ErrorCode::ToleranceTooCoarse, "isolating intervals overlap at tol");
    }
  }
  return out;
}

}  // namespace

std::vector<RootInterval> isolate_univariate_roots(const Poly1& p, double lo,
                                                   double hi, double tol,
                                                   double scale_hint) {
  if (!(tol > 0.0)) throw Error(ErrorCode::ParseError, "tol must be positive");
  if (!(lo < hi)) throw Error(ErrorCode::ParseError, "lo must be < hi");
  double zero_threshold = 1e-13 * std::max(1.0, scale_hint);
  return isolate_impl(p, lo, hi, tol, zero_threshold, false);
}

}  // namespace algdom
