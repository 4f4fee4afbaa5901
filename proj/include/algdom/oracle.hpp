#pragma once

#include "algdom/domain.hpp"
#include "algdom/reeb.hpp"

namespace algdom {

// Discrete cross-checking oracles. These deliberately share no machinery
// with the certified pipeline: plain floating-point samples on uniform
// grids, no interval arithmetic, no certified root isolation.

// Sweep digraph read off a cell grid: sign-vector components at cell
// centers, per-column (or per-row) runs of domain cells, and run linking
// between adjacent columns. Run births, deaths, merges and splits become
// vertices at the cell-center coordinate; boundary crossings found by a
// corner-sign scan plus Newton refinement are inserted as degree-two
// vertices on the runs passing them.
VDigraph grid_reeb(const Scene& scene, Axis axis, int res);

struct DiffgeoScan {
  int inflections = 0;
  int curvature_vertices = 0;
  int bitangents = 0;
};

// Counts of differential-geometry features of the zero set of f in the
// box, estimated from a marching-squares polyline: sign changes of
// discrete curvature, windowed curvature extrema, and sampled
// double-tangent chords.
DiffgeoScan sampled_diffgeo_scan(const Poly2& f, const Box& box, int res);

}  // namespace algdom
