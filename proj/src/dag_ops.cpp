#include "dconvex/dag_ops.hpp"

#include <numeric>
#include <stdexcept>

#include "dconvex/errors.hpp"

namespace dconvex {

namespace {

void check_subset_of_graph(const Dag& g, const VertexSet& a) {
  if (a.universe_size() != g.vertex_count()) {
    throw std::out_of_range("vertex set universe does not match graph size");
  }
}

// Disjoint-set forest with path halving; roots are always the smallest
// member so component ordering falls out of the structure.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), VertexId{0});
  }

  VertexId find(VertexId v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<VertexId> parent_;
};

}  // namespace

VertexSet ancestral_closure(const Dag& g, const VertexSet& a) {
  check_subset_of_graph(g, a);
  VertexSet closure = a;
  std::vector<VertexId> frontier = a.to_vector();
  while (!frontier.empty()) {
    const VertexId v = frontier.back();
    frontier.pop_back();
    for (VertexId p : g.parents(v)) {
      if (!closure.contains(p)) {
        closure.insert(p);
        frontier.push_back(p);
      }
    }
  }
  return closure;
}

VertexSet ancestors(const Dag& g, const VertexSet& a) {
  return ancestral_closure(g, a) - a;
}

VertexSet markov_boundary(const Dag& g, const VertexSet& a) {
  return markov_boundary_in(g, a, g.full_set());
}

VertexSet markov_boundary_in(const Dag& g, const VertexSet& a,
                             const VertexSet& universe) {
  check_subset_of_graph(g, a);
  check_subset_of_graph(g, universe);
  if (!a.is_subset_of(universe)) {
    throw MembershipError("set must lie inside the universe");
  }
  VertexSet mb(g.vertex_count());
  a.for_each([&](VertexId v) {
    for (VertexId p : g.parents(v)) {
      if (universe.contains(p)) mb.insert(p);
    }
    for (VertexId c : g.children(v)) {
      if (!universe.contains(c)) continue;
      mb.insert(c);
      for (VertexId cp : g.parents(c)) {
        if (universe.contains(cp)) mb.insert(cp);
      }
    }
  });
  mb -= a;
  return mb;
}

UndirectedGraph moralize(const Dag& g) {
  UndirectedGraph m(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& pa = g.parents(v);
    for (VertexId p : pa) m.add_edge(p, v);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      for (std::size_t j = i + 1; j < pa.size(); ++j) {
        m.add_edge(pa[i], pa[j]);
      }
    }
  }
  m.finish();
  return m;
}

InducedSubgraph induced_subgraph(const Dag& g, const VertexSet& a) {
  check_subset_of_graph(g, a);
  std::vector<VertexId> to_original = a.to_vector();
  std::vector<VertexId> from_original(g.vertex_count(), kNoVertex);
  std::vector<std::string> names;
  names.reserve(to_original.size());
  for (std::size_t i = 0; i < to_original.size(); ++i) {
    from_original[to_original[i]] = static_cast<VertexId>(i);
    names.push_back(g.name(to_original[i]));
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t i = 0; i < to_original.size(); ++i) {
    for (VertexId c : g.children(to_original[i])) {
      if (from_original[c] != kNoVertex) {
        edges.emplace_back(static_cast<VertexId>(i), from_original[c]);
      }
    }
  }
  return InducedSubgraph{Dag(std::move(names), edges), std::move(to_original),
                         std::move(from_original)};
}

std::vector<VertexSet> d_connected_components(const Dag& g,
                                              const VertexSet& r) {
  return d_connected_components_in(g, r, g.full_set());
}

std::vector<VertexSet> d_connected_components_in(const Dag& g,
                                                 const VertexSet& r,
                                                 const VertexSet& universe) {
  check_subset_of_graph(g, r);
  check_subset_of_graph(g, universe);
  const std::size_t n = g.vertex_count();
  UnionFind uf(n);

  auto free_vertex = [&](VertexId v) {
    return universe.contains(v) && !r.contains(v);
  };

  for (VertexId v = 0; v < n; ++v) {
    if (!universe.contains(v)) continue;
    if (free_vertex(v)) {
      // Rule (a): skeleton edges between non-r vertices.
      for (VertexId c : g.children(v)) {
        if (free_vertex(c)) uf.unite(v, c);
      }
    } else if (r.contains(v)) {
      // Rule (b): co-parents of an r-vertex (the collider bridge).
      const auto& pa = g.parents(v);
      VertexId anchor = kNoVertex;
      for (VertexId p : pa) {
        if (!free_vertex(p)) continue;
        if (anchor == kNoVertex) {
          anchor = p;
        } else {
          uf.unite(anchor, p);
        }
      }
    }
  }

  std::vector<VertexSet> components;
  std::vector<std::size_t> slot(n, static_cast<std::size_t>(-1));
  for (VertexId v = 0; v < n; ++v) {
    if (!free_vertex(v)) continue;
    const VertexId root = uf.find(v);
    if (slot[root] == static_cast<std::size_t>(-1)) {
      slot[root] = components.size();
      components.emplace_back(n);
    }
    components[slot[root]].insert(v);
  }
  return components;
}

}  // namespace dconvex
