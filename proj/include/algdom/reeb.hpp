#pragma once

#include <utility>
#include <vector>

#include "algdom/domain.hpp"
#include "algdom/geom.hpp"

namespace algdom {

// One connected component of a fiber (a vertical or horizontal line)
// intersected with the closed domain: a closed interval in the fiber
// coordinate, possibly degenerate (a single tangency point).
struct FiberInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Fiber {
  Axis axis = Axis::X;
  double coord = 0.0;  // position of the line along the sweep axis
  std::vector<FiberInterval> intervals;
};

// Fiber of the projection to `axis` at coordinate c: the connected
// components of the line section of the closed domain.
Fiber fiber_at(const Domain& d, Axis axis, double c);

// Vertex of the sweep digraph. `height` is the sweep-axis coordinate of
// the station the vertex came from; `points` are the characteristic
// points hosted there (several when stations merge in a non-G-Morse
// scene; empty for vertices built from a prescribed graph).
struct VVertex {
  int id = 0;
  double height = 0.0;
  std::vector<CharPoint> points;

  VVertex() = default;
  VVertex(int i, double h) : id(i), height(h) {}
  VVertex(int i, double h, std::vector<CharPoint> pts) : id(i), height(h), points(std::move(pts)) {}
};

struct VEdge {
  int from = 0;
  int to = 0;
};

// Directed graph of fiber components swept along an axis; edges point in
// the direction of increasing sweep coordinate.
struct VDigraph {
  std::vector<VVertex> vertices;
  std::vector<VEdge> edges;

  int in_degree(int id) const;
  int out_degree(int id) const;
};

// Mutable domain: Morse classification and the characteristic scan
// append warnings encountered along the sweep.
VDigraph poincare_reeb(Domain& d, Axis axis);

// Orientation: plain directed-graph isomorphism. HeightOrder: the vertex
// bijection must also be monotone in heights (clustered at height_tol).
// ExactHeight: matched vertices' heights must agree within height_tol.
enum class CompareMode { Orientation, HeightOrder, ExactHeight };

bool vdigraph_isomorphic(const VDigraph& a, const VDigraph& b, CompareMode mode,
                         double height_tol = 1e-6);

// Suppresses vertices with one incoming and one outgoing edge (regular
// sweep events), keeping the underlying Reeb shape.
VDigraph smoothed(const VDigraph& g);

// Equality of the underlying Reeb graphs: isomorphism of the smoothed
// digraphs.
bool homeomorphic(const VDigraph& a, const VDigraph& b, CompareMode mode,
                  double height_tol = 1e-6);

}  // namespace algdom
