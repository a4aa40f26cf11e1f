#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dconvex/vertex_set.hpp"

namespace dconvex {

// Immutable directed acyclic graph over dense vertex indices with a name
// table. Acyclicity, absence of self-loops and absence of duplicate edges
// are enforced at construction; a deterministic topological order is
// computed once and cached.
class Dag {
 public:
  // Vertices are 0..names.size()-1; edges reference vertices by index.
  Dag(std::vector<std::string> names,
      const std::vector<std::pair<VertexId, VertexId>>& edges);

  std::size_t vertex_count() const { return names_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const std::string& name(VertexId v) const { return names_.at(v); }
  std::optional<VertexId> index_of(std::string_view name) const;

  // Sorted ascending.
  const std::vector<VertexId>& parents(VertexId v) const {
    return parents_.at(v);
  }
  const std::vector<VertexId>& children(VertexId v) const {
    return children_.at(v);
  }

  bool has_edge(VertexId u, VertexId v) const;  // directed u -> v
  bool adjacent(VertexId u, VertexId v) const {
    return has_edge(u, v) || has_edge(v, u);
  }

  // Every edge (u,v) has u before v; ties broken by ascending index.
  const std::vector<VertexId>& topological_order() const { return topo_; }

  // All edges as (parent, child), sorted.
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  VertexSet full_set() const { return VertexSet::full(vertex_count()); }
  VertexSet empty_set() const { return VertexSet(vertex_count()); }

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.names_ == b.names_ && a.parents_ == b.parents_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<std::vector<VertexId>> parents_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<VertexId> topo_;
  std::size_t edge_count_ = 0;
};

// Builds a Dag from (parent name, child name) pairs; indices are assigned in
// first-appearance order, scanning each pair left to right.
Dag build_dag(const std::vector<std::pair<std::string, std::string>>& edges);

// Spec-level free function; equivalent to g.topological_order().
inline const std::vector<VertexId>& topological_order(const Dag& g) {
  return g.topological_order();
}

}  // namespace dconvex
