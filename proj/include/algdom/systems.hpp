#pragma once

#include <array>
#include <vector>

#include "algdom/geom.hpp"
#include "algdom/poly.hpp"

namespace algdom {

// A solution of a square polynomial system, certified by a Krawczyk
// contraction (certified = true) or reported as an unresolved cluster
// representative (certified = false, only when the caller opts in).
struct CertifiedPoint {
  int n = 2;
  std::array<double, 4> x{};
  double radius = 0.0;    // half-width of the certifying box
  double residual = 0.0;  // max |eq_i| at x
  bool certified = true;

  Pt p2() const { return {x[0], x[1]}; }
};

struct SolveOptions {
  long budget = 2000000;          // subdivision node budget
  double cluster_size = 1e-10;    // boxes below this failing uniqueness are clusters
  bool collect_clusters = false;  // report clusters instead of throwing
};

// Certified solutions of eqs = 0 in the box (n equations, n variables,
// 1 <= n <= 4). Subdivision with interval exclusion and Krawczyk
// inclusion; results Newton-polished, sorted lexicographically,
// deduplicated at tol. Errors: BudgetExceeded, SingularCluster (unless
// collect_clusters).
std::vector<CertifiedPoint> solve_system(const std::vector<PolyN>& eqs,
                                         const BoxN& box, double tol,
                                         const SolveOptions& opts = {});

// Damped Newton iteration from start until max residual <= tol * max(1,
// coefficient scale). Errors: Diverged, SingularJacobian.
CertifiedPoint polish_newton(const std::vector<PolyN>& eqs,
                             const std::array<double, 4>& start, double tol,
                             int max_iter = 60);

}  // namespace algdom
