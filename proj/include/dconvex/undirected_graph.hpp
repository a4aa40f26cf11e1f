#pragma once

#include <algorithm>
#include <vector>

#include "dconvex/vertex_set.hpp"

namespace dconvex {

// Symmetric adjacency structure used for moral graphs and the auxiliary
// connection graphs of the d-connected-component machinery.
class UndirectedGraph {
 public:
  explicit UndirectedGraph(std::size_t vertex_count) : adj_(vertex_count) {}

  std::size_t vertex_count() const { return adj_.size(); }

  // Self-loops are ignored; duplicates are deduplicated by finish().
  void add_edge(VertexId u, VertexId v) {
    if (u == v) return;
    adj_.at(u).push_back(v);
    adj_.at(v).push_back(u);
  }

  // Sorts and deduplicates the adjacency lists; call once after building.
  void finish() {
    for (auto& nb : adj_) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
  }

  const std::vector<VertexId>& neighbors(VertexId v) const {
    return adj_.at(v);
  }

  bool adjacent(VertexId u, VertexId v) const {
    const auto& nb = adj_.at(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& nb : adj_) total += nb.size();
    return total / 2;
  }

 private:
  std::vector<std::vector<VertexId>> adj_;
};

}  // namespace dconvex
