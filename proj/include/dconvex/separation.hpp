#pragma once

#include "dconvex/dag.hpp"
#include "dconvex/vertex_set.hpp"

namespace dconvex {

// Reachability query: which vertices of `universe` are joined to `source`
// by a path (inside the induced subgraph on the universe) whose intermediate
// conditioning vertices are all colliders. This is the reachability notion
// the close-minimal-separator search needs; it is deliberately weaker than
// d-connection — conditioning vertices pass only as colliders, every other
// intermediate passes freely, and no descendant activation applies.
struct ReachQuery {
  VertexId source = 0;
  VertexSet conditioning;  // W
  VertexSet universe;      // callers typically pass An_G({u,v})
};

// The source is always in the result. Conditioning vertices reached by a
// path are included as blocked terminals but never passed through as
// non-colliders.
VertexSet reachable_set(const Dag& g, const ReachQuery& q);

// Standard d-separation criterion with descendant-activated colliders,
// decided by a directional Bayes-ball traversal in O(|V|+|E|).
// x, y, z must be pairwise disjoint; x and y nonempty.
bool d_separated(const Dag& g, const VertexSet& x, const VertexSet& y,
                 const VertexSet& z);

// Test oracle: enumerates every simple path between x and y and applies the
// two blocking conditions literally. Guarded to small graphs.
bool d_separated_bruteforce(const Dag& g, const VertexSet& x,
                            const VertexSet& y, const VertexSet& z,
                            std::size_t max_vertices = 12);

// Test oracle for the projection theorem: true iff d-separation inside g
// agrees with d-separation inside the induced subgraph on a, for every
// disjoint triple (X, Y, Z) drawn from a. Guarded by |a| <= max_set.
bool independence_projection_equal(const Dag& g, const VertexSet& a,
                                   std::size_t max_set = 7);

}  // namespace dconvex
