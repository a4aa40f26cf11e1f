#include <doctest.h>

#include "dconvex/convexity.hpp"
#include "dconvex/dag_ops.hpp"
#include "dconvex/errors.hpp"
#include "dconvex/random_graphs.hpp"
#include "dconvex/separation.hpp"
#include "test_support.hpp"

using namespace dconvex;
using namespace dconvex::test;

TEST_CASE("reachable_set stops at conditioning vertices but records them") {
  const Dag chain = build_dag({{"a", "b"}, {"b", "c"}});
  const VertexSet got = reachable_set(
      chain, ReachQuery{id(chain, "a"), named_set(chain, {"b"}),
                        chain.full_set()});
  // b is reached as a blocked terminal; c lies beyond the non-collider
  // blocker and stays out.
  CHECK(got == named_set(chain, {"a", "b"}));
}

TEST_CASE("reachable_set passes conditioned colliders") {
  const Dag v = build_dag({{"a", "c"}, {"b", "c"}});
  const VertexSet got = reachable_set(
      v, ReachQuery{id(v, "a"), named_set(v, {"c"}), v.full_set()});
  CHECK(got == v.full_set());
}

TEST_CASE("reachable_set on the asia-like network") {
  const Dag g = asia_like();
  // Within An({d,h}) = V, the boundary of d is {c}; from h the traversal
  // reaches everything except d, so the intersection with the boundary
  // is {c}.
  const VertexSet got = reachable_set(
      g, ReachQuery{id(g, "h"), named_set(g, {"c"}), g.full_set()});
  CHECK((got & named_set(g, {"c"})) == named_set(g, {"c"}));
  CHECK_FALSE(got.contains(id(g, "d")));
}

TEST_CASE("reachable_set validates its query") {
  const Dag chain = build_dag({{"a", "b"}, {"b", "c"}});
  CHECK_THROWS_AS(
      reachable_set(chain, ReachQuery{id(chain, "a"),
                                      named_set(chain, {"a"}),
                                      chain.full_set()}),
      InvalidQueryError);
  CHECK_THROWS_AS(
      reachable_set(chain, ReachQuery{id(chain, "a"), named_set(chain, {"c"}),
                                      named_set(chain, {"a", "b"})}),
      InvalidQueryError);
}

TEST_CASE("reachable_set given nothing reaches the weak component") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dag g = random_dag(9, 0.2, seed);
    VertexSet pair(g.vertex_count());
    pair.insert(0);
    pair.insert(static_cast<VertexId>(g.vertex_count() - 1));
    const VertexSet universe = ancestral_closure(g, pair);
    const VertexSet got =
        reachable_set(g, ReachQuery{0, VertexSet(g.vertex_count()), universe});
    // Weakly connected component of 0 inside the universe.
    VertexSet weak(g.vertex_count());
    weak.insert(0);
    std::vector<VertexId> stack{0};
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      auto step = [&](VertexId x) {
        if (universe.contains(x) && !weak.contains(x)) {
          weak.insert(x);
          stack.push_back(x);
        }
      };
      for (VertexId p : g.parents(v)) step(p);
      for (VertexId c : g.children(v)) step(c);
    }
    CHECK(got == weak);
  }
}

TEST_CASE("d_separated basics") {
  const Dag chain = build_dag({{"a", "b"}, {"b", "c"}});
  CHECK(d_separated(chain, named_set(chain, {"a"}), named_set(chain, {"c"}),
                    named_set(chain, {"b"})));
  CHECK_FALSE(d_separated(chain, named_set(chain, {"a"}),
                          named_set(chain, {"c"}), chain.empty_set()));

  const Dag v = build_dag({{"a", "c"}, {"b", "c"}});
  CHECK(d_separated(v, named_set(v, {"a"}), named_set(v, {"b"}),
                    v.empty_set()));
  CHECK_FALSE(d_separated(v, named_set(v, {"a"}), named_set(v, {"b"}),
                          named_set(v, {"c"})));

  const Dag g = asia_like();
  CHECK(d_separated(g, named_set(g, {"d"}), named_set(g, {"h"}),
                    named_set(g, {"c"})));
}

TEST_CASE("descendant activation opens colliders") {
  // a -> c <- b, c -> d: conditioning on the descendant d activates c.
  const Dag g = build_dag({{"a", "c"}, {"b", "c"}, {"c", "d"}});
  CHECK(d_separated(g, named_set(g, {"a"}), named_set(g, {"b"}),
                    g.empty_set()));
  CHECK_FALSE(d_separated(g, named_set(g, {"a"}), named_set(g, {"b"}),
                          named_set(g, {"d"})));
}

TEST_CASE("d_separated rejects overlapping sets") {
  const Dag chain = build_dag({{"a", "b"}, {"b", "c"}});
  CHECK_THROWS_AS(d_separated(chain, named_set(chain, {"a"}),
                              named_set(chain, {"a"}), chain.empty_set()),
                  OverlapError);
}

TEST_CASE("d_separated is symmetric and decomposes") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Dag g = random_dag(8, 0.3, seed);
    std::mt19937_64 rng(seed + 99);
    VertexSet x(8), y(8), z(8);
    for (VertexId v = 0; v < 8; ++v) {
      const double roll = unit_double(rng);
      if (roll < 0.25) {
        x.insert(v);
      } else if (roll < 0.5) {
        y.insert(v);
      } else if (roll < 0.65) {
        z.insert(v);
      }
    }
    if (x.empty() || y.empty()) continue;
    const bool sep = d_separated(g, x, y, z);
    CHECK(d_separated(g, y, x, z) == sep);
    if (sep) {
      // Decomposition: any nonempty subsets stay separated.
      VertexSet xs(8), ys(8);
      xs.insert(x.first());
      ys.insert(y.first());
      CHECK(d_separated(g, xs, ys, z));
    }
  }
}

TEST_CASE("brute-force oracle matches bayes-ball") {
  const Dag chain = build_dag({{"a", "b"}, {"b", "c"}});
  CHECK_FALSE(d_separated_bruteforce(chain, named_set(chain, {"a"}),
                                     named_set(chain, {"c"}),
                                     chain.empty_set()));

  const Dag g9 = nine_vertex();
  // The directed path a->e->g->i stays active whatever subset of the empty
  // pool is conditioned on.
  CHECK_FALSE(d_separated_bruteforce(g9, named_set(g9, {"a"}),
                                     named_set(g9, {"i"}), g9.empty_set()));

  // Cross-check on random graphs: all singleton pairs with every
  // conditioning subset.
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Dag g = random_dag(7, 0.3, seed);
    const std::size_t n = g.vertex_count();
    for (VertexId a = 0; a < n; ++a) {
      for (VertexId b = 0; b < n; ++b) {
        if (a == b) continue;
        std::vector<VertexId> rest;
        for (VertexId w = 0; w < n; ++w) {
          if (w != a && w != b) rest.push_back(w);
        }
        for (std::uint32_t mask = 0; mask < (1u << rest.size()); ++mask) {
          VertexSet x(n), y(n), z(n);
          x.insert(a);
          y.insert(b);
          for (std::size_t i = 0; i < rest.size(); ++i) {
            if (mask & (1u << i)) z.insert(rest[i]);
          }
          CHECK(d_separated(g, x, y, z) ==
                d_separated_bruteforce(g, x, y, z));
        }
      }
    }
  }
}

TEST_CASE("brute-force oracle is size-guarded") {
  const Dag g = random_dag(13, 0.1, 1);
  CHECK_THROWS_AS(d_separated_bruteforce(g, VertexSet::of(13, {0}),
                                         VertexSet::of(13, {1}),
                                         VertexSet(13)),
                  SizeGuardError);
}

TEST_CASE("independence projection") {
  const Dag g = asia_like();
  CHECK(independence_projection_equal(g, named_set(g, {"c", "d", "h"})));
  CHECK_FALSE(independence_projection_equal(g, named_set(g, {"d", "h"})));

  const Dag small = build_dag({{"a", "b"}, {"b", "c"}});
  CHECK(independence_projection_equal(small, small.full_set()));
  CHECK_THROWS_AS(
      independence_projection_equal(random_dag(9, 0.2, 1),
                                    VertexSet::full(9)),
      SizeGuardError);
}

TEST_CASE("projection equality matches d-convexity on random graphs") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Dag g = random_dag(6, 0.3, seed);
    const std::size_t n = g.vertex_count();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      VertexSet h(n);
      for (VertexId v = 0; v < n; ++v) {
        if (mask & (1u << v)) h.insert(v);
      }
      CHECK(independence_projection_equal(g, h) == is_d_convex(g, h));
    }
  }
}
