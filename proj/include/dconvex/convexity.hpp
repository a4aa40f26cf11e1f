#pragma once

#include <vector>

#include "dconvex/dag.hpp"
#include "dconvex/vertex_set.hpp"

namespace dconvex {

// Unordered non-adjacent vertex pair joined by an inducing path, stored with
// u < v.
struct IPair {
  VertexId u;
  VertexId v;

  friend bool operator==(const IPair& a, const IPair& b) {
    return a.u == b.u && a.v == b.v;
  }
  friend bool operator<(const IPair& a, const IPair& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  }
};

struct AbsorbedSeparator {
  IPair pair;
  VertexSet close_to_u;
  VertexSet close_to_v;
};

struct HullResult {
  VertexSet hull;
  // Outer repeat cycles executed, including the final one that found no
  // i-pairs.
  std::size_t iterations = 0;
  std::vector<AbsorbedSeparator> absorbed;
  double drc = 0.0;
};

// True iff some path connects u and v in the moral graph of the induced
// subgraph on An_G({u,v}) using only intermediates outside r. u and v must
// belong to r and be non-adjacent in g.
bool is_ipair(const Dag& g, VertexId u, VertexId v, const VertexSet& r);

// All i-pairs of r, deduplicated and ordered by (min index, max index).
// Candidates are restricted to non-adjacent pairs drawn from the Markov
// boundary of each d-connected component of G_{An_G(r)} w.r.t. r.
std::vector<IPair> ipairs(const Dag& g, const VertexSet& r);

// True iff ipairs(g, h) is empty.
bool is_d_convex(const Dag& g, const VertexSet& h);

// The unique minimal uv-d-separator close to u: within the induced subgraph
// on An_G({u,v}), intersect the Markov boundary B of u with the set
// reachable from v given B. Returns the empty set when u and v are already
// separated by the empty set.
VertexSet fcmds(const Dag& g, VertexId u, VertexId v);

// Test oracle: s separates u from v and no proper subset of s does.
bool minimal_dsep_verify(const Dag& g, const VertexSet& s, VertexId u,
                         VertexId v);

// Close Minimal D-separator Absorption: grows H from r by absorbing, for
// every i-pair of H found inside the d-connected components of G_{An_G(r)}
// w.r.t. H, the two close minimal separators (close to either endpoint),
// until no i-pairs remain. Returns the d-convex hull of r.
HullResult cmdsa(const Dag& g, const VertexSet& r);

// Test oracle: intersection of every d-convex H with r <= H <= An_G(r),
// where d-convexity is decided by exhaustive Z-enumeration per pair.
// Guarded by |An_G(r)| <= max_closure.
VertexSet hull_bruteforce(const Dag& g, const VertexSet& r,
                          std::size_t max_closure = 14);

// Structural dimension reduction capability, 1 - |hull|/n.
double drc(const Dag& g, const VertexSet& hull);

}  // namespace dconvex
