#pragma once

#include <string>
#include <vector>

#include "algdom/curve.hpp"
#include "algdom/geom.hpp"
#include "algdom/poly.hpp"

namespace algdom {

struct Tolerances {
  double solver = 1e-9;
  double trace_step = 0.01;
  double fiber = 1e-9;
};

// Input description: the arrangement of curves, the working window, and a
// seed point selecting one bounded complement component.
struct Scene {
  std::vector<Poly2> curves;
  Box box{-1.0, 1.0, -1.0, 1.0};
  Pt seed{0.0, 0.0};
  Tolerances tol;
};

// Sign-vector component mask of the arrangement on a uniform grid.
// Cells where every curve's sign is interval-certified are `definite`;
// components are 4-connected runs of definite cells with equal signs.
struct GridMask {
  Box box;
  int res = 0;
  std::vector<int> comp;            // -1 for indefinite cells
  std::vector<unsigned char> sign;  // bit k = 1 when curve k is positive
  std::vector<unsigned char> definite;
  std::vector<unsigned char> comp_touches_frame;  // indexed by component id
  int seed_comp = -1;

  int cell_index(const Pt& p) const;   // -1 outside the box
  bool inside_seed_comp(const Pt& p) const;
  bool decided(const Pt& p) const;     // cell is definite
};

GridMask build_mask(const std::vector<Poly2>& curves, const Box& box,
                    const Pt& seed, int res);

// A maximal piece of one curve on the domain boundary, between two
// crossings (or a full loop). `end_a`/`end_b` index into
// Domain::crossings, -1 when the end is a box-border exit or the arc is
// a loop. `inside_sign` tells which normal side is the domain: the
// domain lies toward +inside_sign * unit-gradient.
struct BoundaryArc {
  int curve = -1;
  std::vector<Pt> pts;
  bool closed = false;
  int end_a = -1;
  int end_b = -1;
  int inside_sign = 0;
};

struct Domain {
  Scene scene;
  std::vector<BoundaryArc> arcs;     // arcs of the boundary of D
  std::vector<CharPoint> crossings;  // crossings on the boundary of D
  GridMask mask;
  std::vector<std::string> warnings;

  bool inside(const Pt& p) const;  // open-domain membership
};

// Certified membership for a scene: segment certificate from the seed
// when it applies, sign-component mask otherwise. Throws
// MembershipUndecided when no resolution can separate p from the curves.
bool contains_point(const Scene& scene, const Pt& p);

// Assembles the refined domain selected by the scene seed. Throws
// SingularCurve, CurveMissesClosure, TangentialCrossing, TriplePoint,
// UnboundedDomain, OnCurve, or MembershipUndecided on contract breaches.
Domain build_domain(const Scene& scene);

// Characteristic finite set for sweeping along `axis`: boundary
// crossings plus poles of the projection lying on the boundary. Points
// within two trace steps of the box border are dropped and a warning is
// appended to d.warnings.
std::vector<CharPoint> characteristic_set(Domain& d, Axis axis);

// A genericity violation: where it happened and what was wrong.
struct Witness {
  Pt p{0.0, 0.0};
  std::string what;
};

// Sweep-genericity verdict over BOTH axes. `morse` requires
// nondegenerate tangencies at poles and fibers transversal to both
// branches at crossings; `g_morse` additionally requires each axis
// projection to be injective on its characteristic set. Failures are
// reported as witnesses, never thrown.
struct MorseFlags {
  bool morse = true;
  bool g_morse = true;
  std::vector<Witness> witnesses;
};

MorseFlags classify_morse(Domain& d);

// Differential-geometric cleanliness of the boundary. `nip`: no
// inflection of any scene curve lies on the boundary; `ndtl`: no
// boundary point lies on a double tangent line of any scene curve (with
// `ndtl_same_curve_only`, only boundary points of the tangent curve
// itself count); `ncv`: no curvature vertex lies on the boundary.
struct DomainFlags {
  bool nip = true;
  bool ndtl = true;
  bool ncv = true;
  std::vector<Witness> witnesses;
  // The same findings as typed points, one per witness: kind Inflection /
  // BitangentContact / CurvatureVertex, `curve` = the boundary curve the
  // point lies on, `other_curve` = the curve owning the tangent line (for
  // the double-tangent case).
  std::vector<CharPoint> defects;
};

DomainFlags check_flags(Domain& d, bool ndtl_same_curve_only = false);

// Distance from p to the boundary polyline arcs (restricted to arcs of
// one curve when `curve` >= 0).
double boundary_distance(const Domain& d, const Pt& p, int curve = -1);

}  // namespace algdom
