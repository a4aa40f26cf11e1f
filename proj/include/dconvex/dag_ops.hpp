#pragma once

#include <optional>
#include <vector>

#include "dconvex/dag.hpp"
#include "dconvex/undirected_graph.hpp"
#include "dconvex/vertex_set.hpp"

namespace dconvex {

// An_G(A): A together with every ancestor of a member. Idempotent, monotone.
VertexSet ancestral_closure(const Dag& g, const VertexSet& a);

// an_G(A) = An_G(A) \ A.
VertexSet ancestors(const Dag& g, const VertexSet& a);

// mb_G(A): parents, children and co-parents of members, minus A itself.
VertexSet markov_boundary(const Dag& g, const VertexSet& a);

// Markov boundary computed inside the induced subgraph on `universe`
// without materializing it. A must be a subset of the universe.
VertexSet markov_boundary_in(const Dag& g, const VertexSet& a,
                             const VertexSet& universe);

// G^m: u ~ v iff adjacent in g or sharing a child in g.
UndirectedGraph moralize(const Dag& g);

// G_A with original names; `to_original` maps new indices back.
struct InducedSubgraph {
  Dag dag;
  std::vector<VertexId> to_original;    // sub index -> original index
  std::vector<VertexId> from_original;  // original index -> sub index or kNoVertex

  VertexId original(VertexId sub) const { return to_original.at(sub); }
  std::optional<VertexId> sub_index(VertexId orig) const {
    const VertexId s = from_original.at(orig);
    if (s == kNoVertex) return std::nullopt;
    return s;
  }
};

InducedSubgraph induced_subgraph(const Dag& g, const VertexSet& a);

// Maximal subsets M of V\r such that every pair in M is joined by a path
// whose intermediate r-vertices are all colliders. Computed as connected
// components of the connection graph on V\r with edges (a) u ~ v adjacent
// in g, (b) u, v both parents of some w in r. Ordered by smallest member.
std::vector<VertexSet> d_connected_components(const Dag& g, const VertexSet& r);

// Same, restricted to the induced subgraph on `universe` (r is intersected
// with the universe; vertices outside it do not exist).
std::vector<VertexSet> d_connected_components_in(const Dag& g,
                                                 const VertexSet& r,
                                                 const VertexSet& universe);

}  // namespace dconvex
