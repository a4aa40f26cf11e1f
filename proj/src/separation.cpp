#include "dconvex/separation.hpp"

#include <vector>

#include "dconvex/dag_ops.hpp"
#include "dconvex/errors.hpp"

namespace dconvex {

namespace {

// Arrival modes of the directional traversals. kIn: the last path edge
// points into the current vertex (came from a parent). kOut: the last path
// edge points out of it (came from a child).
enum class Mode : unsigned char { kIn = 0, kOut = 1 };

struct StateSet {
  explicit StateSet(std::size_t n) : bits(2 * n, false) {}
  bool visit(VertexId v, Mode m) {
    const std::size_t i = 2 * v + static_cast<std::size_t>(m);
    if (bits[i]) return false;
    bits[i] = true;
    return true;
  }
  std::vector<bool> bits;
};

}  // namespace

VertexSet reachable_set(const Dag& g, const ReachQuery& q) {
  const std::size_t n = g.vertex_count();
  if (q.universe.universe_size() != n ||
      q.conditioning.universe_size() != n) {
    throw InvalidQueryError("query sets must match the graph's vertex count");
  }
  if (!q.universe.contains(q.source)) {
    throw InvalidQueryError("source must belong to the universe");
  }
  if (q.conditioning.contains(q.source)) {
    throw InvalidQueryError("source must not be conditioned on");
  }
  if (!q.conditioning.is_subset_of(q.universe)) {
    throw InvalidQueryError("conditioning set must lie inside the universe");
  }

  VertexSet reached(n);
  reached.insert(q.source);
  StateSet seen(n);
  std::vector<std::pair<VertexId, Mode>> stack;

  auto push = [&](VertexId v, Mode m) {
    if (!q.universe.contains(v)) return;
    if (seen.visit(v, m)) {
      reached.insert(v);
      stack.emplace_back(v, m);
    }
  };

  // The source is an endpoint: leave along any edge.
  for (VertexId c : g.children(q.source)) push(c, Mode::kIn);
  for (VertexId p : g.parents(q.source)) push(p, Mode::kOut);

  while (!stack.empty()) {
    const auto [v, mode] = stack.back();
    stack.pop_back();
    const bool conditioned = q.conditioning.contains(v);
    if (mode == Mode::kIn) {
      // Continuing to a parent makes v a collider: allowed for everyone.
      for (VertexId p : g.parents(v)) push(p, Mode::kOut);
      // Continuing to a child makes v a chain vertex: blocked when
      // conditioned.
      if (!conditioned) {
        for (VertexId c : g.children(v)) push(c, Mode::kIn);
      }
    } else {
      // Both continuations keep v a non-collider (chain or fork).
      if (!conditioned) {
        for (VertexId p : g.parents(v)) push(p, Mode::kOut);
        for (VertexId c : g.children(v)) push(c, Mode::kIn);
      }
    }
  }
  return reached;
}

bool d_separated(const Dag& g, const VertexSet& x, const VertexSet& y,
                 const VertexSet& z) {
  const std::size_t n = g.vertex_count();
  if (x.universe_size() != n || y.universe_size() != n ||
      z.universe_size() != n) {
    throw std::out_of_range("vertex set universe does not match graph size");
  }
  if (x.empty() || y.empty()) {
    throw InvalidQueryError("x and y must be nonempty");
  }
  if (x.intersects(y) || x.intersects(z) || y.intersects(z)) {
    throw OverlapError("x, y, z must be pairwise disjoint");
  }

  // Descendant activation: a collider passes iff it has itself or a
  // descendant in z, i.e. iff it is an ancestor of z.
  const VertexSet activated = ancestral_closure(g, z);

  StateSet seen(n);
  std::vector<std::pair<VertexId, Mode>> stack;
  bool hit = false;

  auto push = [&](VertexId v, Mode m) {
    if (seen.visit(v, m)) {
      if (y.contains(v)) hit = true;
      stack.emplace_back(v, m);
    }
  };

  x.for_each([&](VertexId s) {
    for (VertexId c : g.children(s)) push(c, Mode::kIn);
    for (VertexId p : g.parents(s)) push(p, Mode::kOut);
  });

  while (!stack.empty() && !hit) {
    const auto [v, mode] = stack.back();
    stack.pop_back();
    const bool conditioned = z.contains(v);
    if (mode == Mode::kIn) {
      if (activated.contains(v)) {
        for (VertexId p : g.parents(v)) push(p, Mode::kOut);
      }
      if (!conditioned) {
        for (VertexId c : g.children(v)) push(c, Mode::kIn);
      }
    } else if (!conditioned) {
      for (VertexId p : g.parents(v)) push(p, Mode::kOut);
      for (VertexId c : g.children(v)) push(c, Mode::kIn);
    }
  }
  return !hit;
}

namespace {

// Literal blocking test for one simple path (as a vertex sequence).
// `z_closure` is An_G(z), precomputed by the caller.
bool path_blocked(const Dag& g, const std::vector<VertexId>& path,
                  const VertexSet& z, const VertexSet& z_closure) {
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const VertexId w = path[i];
    const bool collider =
        g.has_edge(path[i - 1], w) && g.has_edge(path[i + 1], w);
    if (!collider) {
      if (z.contains(w)) return true;  // non-collider in z
    } else if (!z_closure.contains(w)) {
      return true;  // collider with neither itself nor a descendant in z
    }
  }
  return false;
}

// Depth-first enumeration of simple paths from `current` into y. Returns
// true as soon as one unblocked path is found.
bool find_active_path(const Dag& g, VertexId current, const VertexSet& y,
                      const VertexSet& z, const VertexSet& z_closure,
                      std::vector<VertexId>& path, std::vector<bool>& used) {
  if (y.contains(current)) {
    return !path_blocked(g, path, z, z_closure);
  }
  auto explore = [&](VertexId next) {
    if (used[next]) return false;
    used[next] = true;
    path.push_back(next);
    const bool found = find_active_path(g, next, y, z, z_closure, path, used);
    path.pop_back();
    used[next] = false;
    return found;
  };
  for (VertexId c : g.children(current)) {
    if (explore(c)) return true;
  }
  for (VertexId p : g.parents(current)) {
    if (explore(p)) return true;
  }
  return false;
}

}  // namespace

bool d_separated_bruteforce(const Dag& g, const VertexSet& x,
                            const VertexSet& y, const VertexSet& z,
                            std::size_t max_vertices) {
  if (g.vertex_count() > max_vertices) {
    throw SizeGuardError("path enumeration limited to " +
                         std::to_string(max_vertices) + " vertices");
  }
  if (x.empty() || y.empty()) {
    throw InvalidQueryError("x and y must be nonempty");
  }
  if (x.intersects(y) || x.intersects(z) || y.intersects(z)) {
    throw OverlapError("x, y, z must be pairwise disjoint");
  }
  const VertexSet z_closure = ancestral_closure(g, z);
  std::vector<bool> used(g.vertex_count(), false);
  std::vector<VertexId> path;
  bool active = false;
  x.for_each([&](VertexId s) {
    if (active) return;
    used.assign(g.vertex_count(), false);
    used[s] = true;
    path.assign(1, s);
    if (find_active_path(g, s, y, z, z_closure, path, used)) active = true;
  });
  return !active;
}

bool independence_projection_equal(const Dag& g, const VertexSet& a,
                                   std::size_t max_set) {
  if (a.size() > max_set) {
    throw SizeGuardError("projection enumeration limited to sets of size " +
                         std::to_string(max_set));
  }
  const InducedSubgraph sub = induced_subgraph(g, a);
  const std::vector<VertexId> members = a.to_vector();
  const std::size_t k = members.size();
  const std::size_t n = g.vertex_count();

  // Each member is assigned to X, Y, Z or none (base-4 odometer).
  std::vector<unsigned> role(k, 0);
  while (true) {
    VertexSet x(n), y(n), z(n);
    VertexSet xs(k), ys(k), zs(k);
    for (std::size_t i = 0; i < k; ++i) {
      switch (role[i]) {
        case 1:
          x.insert(members[i]);
          xs.insert(static_cast<VertexId>(i));
          break;
        case 2:
          y.insert(members[i]);
          ys.insert(static_cast<VertexId>(i));
          break;
        case 3:
          z.insert(members[i]);
          zs.insert(static_cast<VertexId>(i));
          break;
        default:
          break;
      }
    }
    if (!x.empty() && !y.empty()) {
      if (d_separated(g, x, y, z) != d_separated(sub.dag, xs, ys, zs)) {
        return false;
      }
    }
    std::size_t pos = 0;
    while (pos < k && role[pos] == 3) role[pos++] = 0;
    if (pos == k) break;
    ++role[pos];
  }
  return true;
}

}  // namespace dconvex
