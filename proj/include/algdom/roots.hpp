#pragma once

#include <vector>

#include "algdom/poly.hpp"

namespace algdom {

enum class RootParity { Odd, EvenOrUnknown };

// An isolating interval for one distinct real root. For Odd parity the
// polynomial values at lo and hi have strictly opposite signs (literally
// checkable). EvenOrUnknown marks tangential (even-multiplicity) roots
// detected at critical points of the polynomial.
struct RootInterval {
  double lo = 0.0;
  double hi = 0.0;
  RootParity parity = RootParity::Odd;
};

// Certified isolation of all real roots of p in [lo, hi].
//
// Strategy: recursively isolate the roots of p' to cut [lo, hi] into
// monotone pieces; a sign change inside a piece is bisected to width <= tol
// (Odd); near-zero values at critical points are certified as even-or-
// unknown roots when |p| at the critical point is consistent with a root
// within ~tol (second-derivative scaled test).
//
// Roots lying exactly on lo or hi are not reported (probes nudge inward);
// callers arrange their segment endpoints off the zero set.
//
// Errors: IdenticallyZero when all coefficients are below 1e-13 relative to
// max(1, scale_hint); ToleranceTooCoarse when a near-root at a critical
// point cannot be confirmed or excluded at tol, or isolating intervals
// would overlap.
std::vector<RootInterval> isolate_univariate_roots(const Poly1& p, double lo,
                                                   double hi, double tol,
                                                   double scale_hint = 0.0);

}  // namespace algdom
