#pragma once

#include <vector>

#include "algdom/geom.hpp"
#include "algdom/poly.hpp"
#include "algdom/systems.hpp"

namespace algdom {

// A polyline approximation of one connected component of {f = 0} inside a
// box. Points are spaced roughly one trace step apart; `closed` marks a
// loop (last point joins back to the first).
struct TracedComponent {
  std::vector<Pt> pts;
  bool closed = false;
};

// Verdict of the singularity scan over a box.
struct CurveCheck {
  enum class Status { NonSingular, EmptyZeroSet, SingularAt };
  Status status = Status::NonSingular;
  Pt where{0.0, 0.0};  // meaningful for SingularAt
};

struct TangentLine {
  Pt point;
  Pt dir;     // unit tangent, oriented as (-f_y, f_x)
  Pt normal;  // unit gradient direction
};

enum class CharKind {
  Crossing,
  Pole,
  Inflection,
  BitangentContact,
  CurvatureVertex,
};

// A certified characteristic point on a curve (or a crossing of two).
struct CharPoint {
  CharKind kind = CharKind::Pole;
  Pt p{0.0, 0.0};
  Axis axis = Axis::X;   // for poles: the sweep axis they obstruct
  int curve = -1;        // index of the carrying curve
  int other_curve = -1;  // for crossings: the second curve
  double radius = 0.0;
  double residual = 0.0;
  bool certified = false;
};

// A line tangent to the curve at two distinct points.
struct Bitangent {
  Pt a;
  Pt b;
  double residual = 0.0;
  bool certified = false;
};

// Proves the zero set in `box` is empty or free of critical points of f,
// or reports a spot where singularity could not be excluded.
CurveCheck check_nonsingular(const Poly2& f, const Box& box, double tol);

// Polyline tracing of {f = 0} in `box` by grid seeding plus
// predictor-corrector marching. Throws TraceStalled when the corrector
// cannot follow the curve at any acceptable step.
std::vector<TracedComponent> trace_curve(const Poly2& f, const Box& box,
                                         double step, double tol);

// Tangent data at a point assumed near the curve; throws SingularPoint
// when the gradient vanishes at working precision.
TangentLine tangent_at(const Poly2& f, Pt p);

// Signed curvature of the level line through p, oriented along
// (-f_y, f_x).
double curvature_at(const Poly2& f, Pt p);

// Critical points of the projection along `axis` restricted to the curve
// (axis X: vertical-tangency points {f = 0, f_y = 0}).
std::vector<CharPoint> find_poles(const Poly2& f, const Box& box, Axis axis,
                                  double tol);

// Zeros of curvature on the curve, certified by a sign change of the
// curvature numerator a short arc distance to each side.
std::vector<CharPoint> find_inflections(const Poly2& f, const Box& box,
                                        double trace_step, double tol);

// Lines tangent at two distinct points, found by tangent-aligned pair
// seeding on the traced polyline and Newton polish of the 4D contact
// system.
std::vector<Bitangent> find_bitangents(const Poly2& f, const Box& box,
                                       double trace_step, double tol);

// Local extrema of curvature along the curve (vertices), located by sign
// changes of the arc-length derivative of curvature and polished on
// {f, M} where M is its polynomial numerator.
std::vector<CharPoint> find_curvature_vertices(const Poly2& f, const Box& box,
                                               double trace_step, double tol);

}  // namespace algdom
