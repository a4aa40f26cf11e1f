#include "dconvex/convexity.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "dconvex/dag_ops.hpp"
#include "dconvex/errors.hpp"
#include "dconvex/separation.hpp"

namespace dconvex {

namespace {

void require_in_graph(const Dag& g, VertexId v) {
  if (v >= g.vertex_count()) {
    throw std::out_of_range("vertex index out of range");
  }
}

void require_non_adjacent(const Dag& g, VertexId u, VertexId v) {
  if (u == v || g.adjacent(u, v)) {
    throw AdjacentPairError("vertices '" + g.name(u) + "' and '" + g.name(v) +
                            "' must be distinct and non-adjacent");
  }
}

// BFS over the moral graph of G_{closure}, starting at u, passing only
// through intermediates in `allowed`, looking for `target`. Moral neighbors
// are expanded on the fly: graph neighbors plus co-parents of shared
// children inside the closure.
bool moral_path_exists(const Dag& g, VertexId u, VertexId target,
                       const VertexSet& closure, const VertexSet& allowed) {
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<VertexId> stack{u};
  seen[u] = true;
  while (!stack.empty()) {
    const VertexId w = stack.back();
    stack.pop_back();
    auto visit = [&](VertexId x) {
      if (!closure.contains(x) || seen[x]) return false;
      if (x == target) return true;
      if (allowed.contains(x)) {
        seen[x] = true;
        stack.push_back(x);
      }
      return false;
    };
    for (VertexId p : g.parents(w)) {
      if (visit(p)) return true;
    }
    for (VertexId c : g.children(w)) {
      if (!closure.contains(c)) continue;
      if (visit(c)) return true;
      for (VertexId cp : g.parents(c)) {
        if (cp != w && visit(cp)) return true;
      }
    }
  }
  return false;
}

bool ipair_check(const Dag& g, VertexId u, VertexId v, const VertexSet& r) {
  VertexSet pair(g.vertex_count());
  pair.insert(u);
  pair.insert(v);
  const VertexSet closure = ancestral_closure(g, pair);
  return moral_path_exists(g, u, v, closure, r.complement());
}

}  // namespace

bool is_ipair(const Dag& g, VertexId u, VertexId v, const VertexSet& r) {
  require_in_graph(g, u);
  require_in_graph(g, v);
  if (!r.contains(u) || !r.contains(v)) {
    throw MembershipError("both endpoints must belong to r");
  }
  require_non_adjacent(g, u, v);
  return ipair_check(g, u, v, r);
}

namespace {

// Shared by ipairs() and cmdsa(): candidate pairs are non-adjacent pairs in
// the Markov boundary (within `universe`) of each d-connected component of
// the universe w.r.t. r. `skip` marks pairs already known not to be i-pairs
// (or already absorbed); confirmed pairs are appended to `out`.
template <class OnPair>
void scan_component_candidates(const Dag& g, const VertexSet& r,
                               const VertexSet& universe, OnPair&& on_pair) {
  const std::vector<VertexSet> components =
      d_connected_components_in(g, r, universe);
  for (const VertexSet& m : components) {
    const VertexSet boundary = markov_boundary_in(g, m, universe) & r;
    const std::vector<VertexId> candidates = boundary.to_vector();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      for (std::size_t j = i + 1; j < candidates.size(); ++j) {
        on_pair(candidates[i], candidates[j]);
      }
    }
  }
}

}  // namespace

std::vector<IPair> ipairs(const Dag& g, const VertexSet& r) {
  if (r.universe_size() != g.vertex_count()) {
    throw std::out_of_range("vertex set universe does not match graph size");
  }
  const VertexSet closure = ancestral_closure(g, r);
  std::vector<IPair> found;
  scan_component_candidates(g, r, closure, [&](VertexId u, VertexId v) {
    if (g.adjacent(u, v)) return;
    if (ipair_check(g, u, v, r)) found.push_back(IPair{u, v});
  });
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

bool is_d_convex(const Dag& g, const VertexSet& h) {
  if (h.universe_size() != g.vertex_count()) {
    throw std::out_of_range("vertex set universe does not match graph size");
  }
  const VertexSet closure = ancestral_closure(g, h);
  bool convex = true;
  scan_component_candidates(g, h, closure, [&](VertexId u, VertexId v) {
    if (!convex || g.adjacent(u, v)) return;
    if (ipair_check(g, u, v, h)) convex = false;
  });
  return convex;
}

VertexSet fcmds(const Dag& g, VertexId u, VertexId v) {
  require_in_graph(g, u);
  require_in_graph(g, v);
  require_non_adjacent(g, u, v);

  VertexSet pair(g.vertex_count());
  pair.insert(u);
  pair.insert(v);
  const VertexSet closure = ancestral_closure(g, pair);

  VertexSet u_only(g.vertex_count());
  u_only.insert(u);
  const VertexSet boundary = markov_boundary_in(g, u_only, closure);

  const VertexSet reached =
      reachable_set(g, ReachQuery{v, boundary, closure});
  return boundary & reached;
}

bool minimal_dsep_verify(const Dag& g, const VertexSet& s, VertexId u,
                         VertexId v) {
  require_in_graph(g, u);
  require_in_graph(g, v);
  require_non_adjacent(g, u, v);
  VertexSet x(g.vertex_count()), y(g.vertex_count());
  x.insert(u);
  y.insert(v);
  if (!d_separated(g, x, y, s)) return false;

  const std::vector<VertexId> members = s.to_vector();
  const std::size_t k = members.size();
  if (k >= 64) {
    throw SizeGuardError("separator too large for subset enumeration");
  }
  for (std::uint64_t mask = 0; mask + 1 < (1ull << k); ++mask) {
    VertexSet sub(g.vertex_count());
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1ull << i)) sub.insert(members[i]);
    }
    if (d_separated(g, x, y, sub)) return false;
  }
  return true;
}

HullResult cmdsa(const Dag& g, const VertexSet& r) {
  if (r.universe_size() != g.vertex_count()) {
    throw std::out_of_range("vertex set universe does not match graph size");
  }
  if (r.empty()) {
    throw EmptyQueryError("query set must be nonempty");
  }

  HullResult result;
  result.hull = r;
  if (r.size() <= 1) {
    result.drc = drc(g, result.hull);
    return result;
  }

  const std::size_t n = g.vertex_count();
  const VertexSet closure = ancestral_closure(g, r);

  // Pairs once found not to be i-pairs stay that way as H grows (growing H
  // only strengthens the inducing-path condition), and absorbed pairs gain
  // an in-H separator; neither kind is ever retested.
  std::vector<bool> settled(n * n, false);
  auto settled_at = [&](VertexId a, VertexId b) -> std::vector<bool>::reference {
    return settled[static_cast<std::size_t>(a) * n + b];
  };

  bool absorbed_any = true;
  while (absorbed_any) {
    absorbed_any = false;
    ++result.iterations;
    std::vector<IPair> queue;
    scan_component_candidates(
        g, result.hull, closure, [&](VertexId a, VertexId b) {
          if (settled_at(a, b) || g.adjacent(a, b)) return;
          if (ipair_check(g, a, b, result.hull)) {
            queue.push_back(IPair{a, b});
          } else {
            settled_at(a, b) = true;
            settled_at(b, a) = true;
          }
        });
    std::sort(queue.begin(), queue.end());
    queue.erase(std::unique(queue.begin(), queue.end()), queue.end());
    for (const IPair& q : queue) {
      AbsorbedSeparator step{q, fcmds(g, q.u, q.v), fcmds(g, q.v, q.u)};
      result.hull |= step.close_to_u;
      result.hull |= step.close_to_v;
      settled_at(q.u, q.v) = true;
      settled_at(q.v, q.u) = true;
      result.absorbed.push_back(std::move(step));
      absorbed_any = true;
    }
  }

  result.drc = drc(g, result.hull);
  return result;
}

namespace {

// i-pair test by exhaustive Z-enumeration: {u,v} is an i-pair of h iff no
// Z inside h \ {u,v} separates them. Memoized per pair as a
// "some-subset-separates" table over the closure members via a
// subset-sum-style sweep.
class BruteConvexityOracle {
 public:
  BruteConvexityOracle(const Dag& g, std::vector<VertexId> members)
      : g_(g), members_(std::move(members)) {}

  // `h_mask` is over members_; u, v are member positions.
  bool is_ipair_of(std::uint32_t h_mask, std::size_t u, std::size_t v) {
    const std::size_t key = pair_key(u, v);
    auto& table = separable_[key];
    if (table.empty()) table = build_separable(u, v);
    const std::uint32_t pool =
        h_mask & ~(1u << u) & ~(1u << v);
    return !table[pool];
  }

 private:
  std::size_t pair_key(std::size_t u, std::size_t v) const {
    return u * members_.size() + v;
  }

  // table[mask] = true iff some Z with member-mask inside `mask` separates.
  std::vector<char> build_separable(std::size_t u, std::size_t v) {
    const std::size_t k = members_.size();
    VertexSet x(g_.vertex_count()), y(g_.vertex_count());
    x.insert(members_[u]);
    y.insert(members_[v]);
    std::vector<char> table(1u << k, 0);
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      if (mask & ((1u << u) | (1u << v))) continue;
      VertexSet z(g_.vertex_count());
      for (std::size_t i = 0; i < k; ++i) {
        if (mask & (1u << i)) z.insert(members_[i]);
      }
      if (d_separated(g_, x, y, z)) table[mask] = 1;
    }
    // Upward closure over supersets: a separating subset stays available.
    for (std::size_t bit = 0; bit < k; ++bit) {
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        if (mask & (1u << bit)) {
          table[mask] = table[mask] | table[mask & ~(1u << bit)];
        }
      }
    }
    return table;
  }

  const Dag& g_;
  std::vector<VertexId> members_;
  std::map<std::size_t, std::vector<char>> separable_;
};

}  // namespace

VertexSet hull_bruteforce(const Dag& g, const VertexSet& r,
                          std::size_t max_closure) {
  if (r.universe_size() != g.vertex_count()) {
    throw std::out_of_range("vertex set universe does not match graph size");
  }
  if (r.empty()) {
    throw EmptyQueryError("query set must be nonempty");
  }
  const VertexSet closure = ancestral_closure(g, r);
  if (closure.size() > max_closure) {
    throw SizeGuardError("ancestral closure of size " +
                         std::to_string(closure.size()) +
                         " exceeds the enumeration limit of " +
                         std::to_string(max_closure));
  }

  const std::vector<VertexId> members = closure.to_vector();
  const std::size_t k = members.size();
  if (k >= 32) {
    throw SizeGuardError("closure too large for mask enumeration");
  }
  std::uint32_t r_mask = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (r.contains(members[i])) r_mask |= 1u << i;
  }

  BruteConvexityOracle oracle(g, members);
  auto convex = [&](std::uint32_t h_mask) {
    for (std::size_t i = 0; i < k; ++i) {
      if (!(h_mask & (1u << i))) continue;
      for (std::size_t j = i + 1; j < k; ++j) {
        if (!(h_mask & (1u << j))) continue;
        if (g.adjacent(members[i], members[j])) continue;
        if (oracle.is_ipair_of(h_mask, i, j)) return false;
      }
    }
    return true;
  };

  // Intersection of all d-convex supersets of r inside the closure. The
  // closure itself is d-convex, so the intersection starts from it.
  std::uint32_t meet = (k == 32 ? ~0u : (1u << k) - 1);
  for (std::uint32_t h_mask = 0; h_mask < (1u << k); ++h_mask) {
    if ((h_mask & r_mask) != r_mask) continue;
    if ((h_mask & meet) == meet) continue;  // cannot shrink the meet
    if (convex(h_mask)) meet &= h_mask;
  }

  VertexSet hull(g.vertex_count());
  for (std::size_t i = 0; i < k; ++i) {
    if (meet & (1u << i)) hull.insert(members[i]);
  }
  return hull;
}

double drc(const Dag& g, const VertexSet& hull) {
  if (g.vertex_count() == 0) {
    throw EmptyQueryError("graph must have at least one vertex");
  }
  if (hull.universe_size() != g.vertex_count()) {
    throw std::out_of_range("vertex set universe does not match graph size");
  }
  return 1.0 - static_cast<double>(hull.size()) /
                   static_cast<double>(g.vertex_count());
}

}  // namespace dconvex
