#pragma once

#include <array>
#include <cmath>

#include "algdom/errors.hpp"

namespace algdom {

struct Pt {
  double x = 0.0;
  double y = 0.0;

  Pt() = default;
  Pt(double x_, double y_) : x(x_), y(y_) {}

  Pt operator+(const Pt& o) const { return {x + o.x, y + o.y}; }
  Pt operator-(const Pt& o) const { return {x - o.x, y - o.y}; }
  Pt operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(const Pt& a, const Pt& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Pt& a, const Pt& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Pt& a) { return std::hypot(a.x, a.y); }
inline double dist(const Pt& a, const Pt& b) { return norm(a - b); }

inline Pt normalized(const Pt& a) {
  double n = norm(a);
  if (n == 0.0) throw Error(ErrorCode::SingularPoint, "cannot normalize zero vector");
  return {a.x / n, a.y / n};
}

// Perpendicular (rotate +90 degrees).
inline Pt perp(const Pt& a) { return {-a.y, a.x}; }

// Distance from point q to segment [a, b].
inline double dist_point_segment(const Pt& q, const Pt& a, const Pt& b) {
  Pt ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 == 0.0) return dist(q, a);
  double t = dot(q - a, ab) / len2;
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return dist(q, a + ab * t);
}

struct Box {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;

  Box() = default;
  Box(double xl, double xh, double yl, double yh)
      : x_lo(xl), x_hi(xh), y_lo(yl), y_hi(yh) {}

  bool valid() const { return x_lo < x_hi && y_lo < y_hi; }
  double width() const { return x_hi - x_lo; }
  double height() const { return y_hi - y_lo; }
  double span() const { return std::max(width(), height()); }
  bool contains(const Pt& p) const {
    return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi;
  }
  bool contains_strict(const Pt& p, double margin) const {
    return p.x >= x_lo + margin && p.x <= x_hi - margin && p.y >= y_lo + margin &&
           p.y <= y_hi - margin;
  }
};

// Axis selector for projections pi_{2,1,i}: X sweeps the x-coordinate
// (fibers are vertical lines), Y sweeps the y-coordinate.
enum class Axis { X, Y };

inline const char* axis_name(Axis a) { return a == Axis::X ? "x" : "y"; }

// n-dimensional box for system solving, n <= 4.
struct BoxN {
  int n = 0;
  std::array<double, 4> lo{};
  std::array<double, 4> hi{};

  double widest() const {
    double w = 0.0;
    for (int i = 0; i < n; ++i) w = std::max(w, hi[i] - lo[i]);
    return w;
  }
  int widest_dim() const {
    int d = 0;
    double w = -1.0;
    for (int i = 0; i < n; ++i) {
      if (hi[i] - lo[i] > w) {
        w = hi[i] - lo[i];
        d = i;
      }
    }
    return d;
  }
};

inline BoxN box2(const Box& b) {
  BoxN r;
  r.n = 2;
  r.lo = {b.x_lo, b.y_lo, 0.0, 0.0};
  r.hi = {b.x_hi, b.y_hi, 0.0, 0.0};
  return r;
}

}  // namespace algdom
