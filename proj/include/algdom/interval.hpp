#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace algdom {

// Closed interval with outward rounding after every arithmetic operation.
// The nextafter nudge makes each operation's result a guaranteed enclosure
// without fiddling with FPU rounding modes; the slight overestimate is
// irrelevant at the tolerances this library works at.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double v) : lo(v), hi(v) {}
  Interval(double l, double h) : lo(l), hi(h) {}

  static Interval hull(double a, double b) {
    return {std::min(a, b), std::max(a, b)};
  }

  bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }

  // Strict containment in the interior of other.
  bool inside_interior(const Interval& other) const {
    return other.lo < lo && hi < other.hi;
  }
  bool disjoint(const Interval& other) const {
    return hi < other.lo || other.hi < lo;
  }
};

inline double round_down(double v) {
  return std::nextafter(v, -std::numeric_limits<double>::infinity());
}
inline double round_up(double v) {
  return std::nextafter(v, std::numeric_limits<double>::infinity());
}

inline Interval operator+(const Interval& a, const Interval& b) {
  return {round_down(a.lo + b.lo), round_up(a.hi + b.hi)};
}
inline Interval operator-(const Interval& a, const Interval& b) {
  return {round_down(a.lo - b.hi), round_up(a.hi - b.lo)};
}
inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval operator*(const Interval& a, const Interval& b) {
  double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  double lo = std::min(std::min(p1, p2), std::min(p3, p4));
  double hi = std::max(std::max(p1, p2), std::max(p3, p4));
  return {round_down(lo), round_up(hi)};
}

inline Interval operator*(double s, const Interval& a) {
  return Interval(s) * a;
}

// a^k with the tightening that even powers of zero-straddling intervals
// have lower bound 0.
inline Interval ipow(const Interval& a, int k) {
  if (k == 0) return Interval(1.0);
  if (k == 1) return a;
  if (k % 2 == 0) {
    double m = a.mag();
    double hi = 1.0;
    for (int i = 0; i < k; ++i) hi = round_up(hi * m);
    double lo;
    if (a.contains_zero()) {
      lo = 0.0;
    } else {
      double small = std::min(std::fabs(a.lo), std::fabs(a.hi));
      lo = 1.0;
      for (int i = 0; i < k; ++i) lo = round_down(lo * small);
    }
    return {lo, hi};
  }
  Interval r = a;
  for (int i = 1; i < k; ++i) r = r * a;
  return r;
}

}  // namespace algdom
