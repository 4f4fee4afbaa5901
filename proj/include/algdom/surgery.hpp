#pragma once

#include <vector>

#include "algdom/domain.hpp"
#include "algdom/reeb.hpp"

namespace algdom {

// Which boundary-cleanliness property a surgery run restores.
enum class SurgeryMode { Nip, Ndtl, Ncv };

const char* surgery_mode_name(SurgeryMode mode);

// Local shape at the carved point: a plain boundary point of one curve,
// or a defect co-located with a transversal crossing of two curves.
enum class SurgeryCase { SingleCurve, AtCrossing };

// One disk insertion: a conic whose closed disk is removed from the
// domain, carving `target` out of the boundary.  The disk meets the
// boundary transversally in exactly the two contacts, and the kept conic
// arc is monotone in both coordinates, so the sweep graphs only gain
// smoothable pass-through vertices.
struct SurgeryPlan {
  CharPoint target;
  Poly2 conic;
  Pt center{0.0, 0.0};
  double r1 = 0.0;  // semi-axis along the boundary tangent
  double r2 = 0.0;  // semi-axis along the normal (== r1 for a circle)
  Pt p_l{0.0, 0.0};  // boundary contact with the smaller x (or y on ties)
  Pt p_r{0.0, 0.0};
  SurgeryCase kind = SurgeryCase::SingleCurve;
};

// Positions a conic disk around `target` (shrink-and-retry over radii,
// center offsets, and deterministic jitters) so that removing the disk
// carves the defect out of the boundary while both sweep graphs are
// preserved.  `max_r` caps the starting radius (used on revalidation
// retries).  Throws HypothesisViolated when the target sits at a sweep
// pole, NoValidRadius when no candidate validates.
SurgeryPlan plan_disk(Domain& d, const CharPoint& target, SurgeryMode mode,
                      double max_r = 0.0);

// Adds the plan's conic to the scene and rebuilds the domain with the
// closed disk removed.  Throws SeedSwallowed when the seed lies in the
// disk, ValidationFailed when the rebuilt domain breaks the domain
// contract or the defect survived on the new boundary.
Domain apply_plan(const Domain& d, const SurgeryPlan& plan);

struct SurgeryResult {
  Domain domain;
  std::vector<SurgeryPlan> log;
};

// Inserts disks until check_flags reports the mode's property, then
// asserts the postconditions: the input curves are kept, the new domain
// is contained in the old one, and both axis sweep graphs are preserved
// up to degree-two vertices (height-order mode).  Throws
// HypothesisViolated, NoValidRadius, NotConverged (iteration cap of 8x
// the initial defect count), or GraphChanged.
SurgeryResult desingularize(const Domain& d, SurgeryMode mode,
                            bool ndtl_same_curve_only = false);

}  // namespace algdom
