#include "dconvex/dag.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "dconvex/errors.hpp"

namespace dconvex {

namespace {

// Extracts one directed cycle for the error message. Called only when Kahn's
// algorithm left vertices unprocessed, so a cycle is guaranteed to exist
// among them.
std::string describe_cycle(const std::vector<std::string>& names,
                           const std::vector<std::vector<VertexId>>& children,
                           const std::vector<bool>& in_cycle_region) {
  const std::size_t n = names.size();
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<VertexId> stack;

  for (VertexId start = 0; start < n; ++start) {
    if (!in_cycle_region[start] || state[start] != 0) continue;
    // Iterative DFS keeping the current path.
    std::vector<std::pair<VertexId, std::size_t>> frames{{start, 0}};
    state[start] = 1;
    stack.assign(1, start);
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < children[v].size()) {
        const VertexId c = children[v][next++];
        if (!in_cycle_region[c]) continue;
        if (state[c] == 1) {
          // Found the cycle: suffix of the stack starting at c.
          std::string msg = "cycle detected: ";
          bool in = false;
          for (VertexId w : stack) {
            if (w == c) in = true;
            if (in) msg += names[w] + " -> ";
          }
          return msg + names[c];
        }
        if (state[c] == 0) {
          state[c] = 1;
          stack.push_back(c);
          frames.emplace_back(c, 0);
        }
      } else {
        state[v] = 2;
        stack.pop_back();
        frames.pop_back();
      }
    }
  }
  return "cycle detected";
}

}  // namespace

Dag::Dag(std::vector<std::string> names,
         const std::vector<std::pair<VertexId, VertexId>>& edges)
    : names_(std::move(names)) {
  const std::size_t n = names_.size();
  parents_.resize(n);
  children_.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    auto [it, fresh] = index_.emplace(names_[v], v);
    if (!fresh) {
      throw Error("duplicate vertex name '" + names_[v] + "'");
    }
  }

  std::set<std::pair<VertexId, VertexId>> seen;
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw std::out_of_range("edge endpoint out of range");
    }
    if (u == v) {
      throw SelfLoopError("self-loop at vertex '" + names_[u] + "'");
    }
    if (!seen.insert({u, v}).second) {
      throw DuplicateEdgeError("duplicate edge " + names_[u] + " -> " +
                               names_[v]);
    }
    parents_[v].push_back(u);
    children_[u].push_back(v);
    ++edge_count_;
  }
  for (auto& p : parents_) std::sort(p.begin(), p.end());
  for (auto& c : children_) std::sort(c.begin(), c.end());

  // Kahn's algorithm with a min-heap for deterministic tie-breaking.
  std::vector<std::size_t> indegree(n);
  std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> ready;
  for (VertexId v = 0; v < n; ++v) {
    indegree[v] = parents_[v].size();
    if (indegree[v] == 0) ready.push(v);
  }
  topo_.reserve(n);
  while (!ready.empty()) {
    const VertexId v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (VertexId c : children_[v]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (topo_.size() != n) {
    std::vector<bool> remaining(n, false);
    for (VertexId v = 0; v < n; ++v) remaining[v] = indegree[v] > 0;
    throw CycleError(describe_cycle(names_, children_, remaining));
  }
}

std::optional<VertexId> Dag::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Dag::has_edge(VertexId u, VertexId v) const {
  const auto& ch = children_.at(u);
  return std::binary_search(ch.begin(), ch.end(), v);
}

std::vector<std::pair<VertexId, VertexId>> Dag::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(edge_count_);
  for (VertexId u = 0; u < vertex_count(); ++u) {
    for (VertexId v : children_[u]) out.emplace_back(u, v);
  }
  return out;
}

Dag build_dag(const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<std::string> names;
  std::unordered_map<std::string, VertexId> index;
  auto intern = [&](const std::string& name) {
    auto [it, fresh] = index.emplace(name, static_cast<VertexId>(names.size()));
    if (fresh) names.push_back(name);
    return it->second;
  };
  std::vector<std::pair<VertexId, VertexId>> idx_edges;
  idx_edges.reserve(edges.size());
  for (const auto& [p, c] : edges) {
    const VertexId u = intern(p);
    const VertexId v = intern(c);
    idx_edges.emplace_back(u, v);
  }
  return Dag(std::move(names), idx_edges);
}

}  // namespace dconvex
