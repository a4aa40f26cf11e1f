#include <doctest.h>

#include <cmath>

#include "dconvex/convexity.hpp"
#include "dconvex/discrete_bn.hpp"
#include "dconvex/errors.hpp"
#include "dconvex/random_graphs.hpp"
#include "test_support.hpp"

using namespace dconvex;
using namespace dconvex::test;

namespace {

DiscreteBn binary_net(const Dag& g, std::uint64_t seed) {
  return random_cpts(g, std::vector<std::uint32_t>(g.vertex_count(), 2), seed);
}

// Conditions the enumerated joint the slow way.
Factor condition_by_enumeration(const DiscreteBn& bn, const VertexSet& query,
                                const EvidenceMap& evidence) {
  Factor joint = joint_enumerate(bn);
  joint = factor_reduce(joint, evidence);
  VertexSet out(bn.vertex_count());
  for (VertexId v = 0; v < bn.vertex_count(); ++v) {
    if (!query.contains(v) && !evidence.contains(v)) out.insert(v);
  }
  return normalized(factor_marginalize(joint, out));
}

double max_abs_diff(const Factor& a, const Factor& b) {
  REQUIRE(a.scope() == b.scope());
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.table()[i] - b.table()[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("network construction validates CPTs") {
  const Dag g = build_dag({{"a", "b"}});
  // Valid network.
  const DiscreteBn bn(g, {2, 2},
                      {Factor({0}, {2}, {0.4, 0.6}),
                       Factor({0, 1}, {2, 2}, {0.5, 0.5, 0.1, 0.9})});
  CHECK(bn.cardinality(0) == 2);

  // Row not normalized.
  CHECK_THROWS_AS(
      DiscreteBn(g, {2, 2},
                 {Factor({0}, {2}, {0.4, 0.7}),
                  Factor({0, 1}, {2, 2}, {0.5, 0.5, 0.1, 0.9})}),
      std::invalid_argument);

  // Wrong scope.
  CHECK_THROWS_AS(DiscreteBn(g, {2, 2},
                             {Factor({0}, {2}, {0.4, 0.6}),
                              Factor({1}, {2}, {0.5, 0.5})}),
                  ScopeError);
}

TEST_CASE("random CPT rows are normalized and reproducible") {
  const Dag g = random_dag(12, 0.25, 5);
  const DiscreteBn a = binary_net(g, 42);
  const DiscreteBn b = binary_net(g, 42);
  CHECK(a == b);
  const DiscreteBn c = binary_net(g, 43);
  CHECK_FALSE(a == c);
}

TEST_CASE("single vertex query returns its prior") {
  const Dag g(std::vector<std::string>{"a"}, {});
  const DiscreteBn bn(g, {3}, {Factor({0}, {3}, {0.2, 0.3, 0.5})});
  const Factor f = variable_elimination(bn, VertexSet::of(1, {0}), {});
  CHECK(f.table()[0] == doctest::Approx(0.2));
  CHECK(f.table()[1] == doctest::Approx(0.3));
  CHECK(f.table()[2] == doctest::Approx(0.5));
}

TEST_CASE("variable elimination matches joint enumeration") {
  std::mt19937_64 rng(77);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dag g = random_dag(6, 0.35, seed);
    const DiscreteBn bn = random_cpts(
        g, {2, 3, 2, 2, 3, 2}, seed + 1);

    VertexSet query(6);
    query.insert(static_cast<VertexId>(uniform_below(rng, 6)));
    query.insert(static_cast<VertexId>(uniform_below(rng, 6)));
    EvidenceMap evidence;
    const auto ev = static_cast<VertexId>(uniform_below(rng, 6));
    if (!query.contains(ev)) {
      evidence.set(ev, static_cast<std::uint32_t>(
                           uniform_below(rng, bn.cardinality(ev))));
    }
    const Factor fast = variable_elimination(bn, query, evidence);
    const Factor slow = condition_by_enumeration(bn, query, evidence);
    CHECK(max_abs_diff(fast, slow) < 1e-10);
  }
}

TEST_CASE("variable elimination validates queries") {
  const Dag g = build_dag({{"a", "b"}});
  const DiscreteBn bn = binary_net(g, 1);
  CHECK_THROWS_AS(variable_elimination(bn, VertexSet(2), {}),
                  EmptyQueryError);
  EvidenceMap e;
  e.set(0, 0);
  CHECK_THROWS_AS(variable_elimination(bn, VertexSet::of(2, {0}), e),
                  OverlapError);
  EvidenceMap bad;
  bad.set(1, 9);
  CHECK_THROWS_AS(variable_elimination(bn, VertexSet::of(2, {0}), bad),
                  std::out_of_range);
}

TEST_CASE("impossible evidence is a hard error") {
  // b is deterministically equal to a; evidence a=0, b=1 has probability 0.
  const DiscreteBn bn(build_dag({{"a", "b"}, {"a", "c"}}), {2, 2, 2},
                      {Factor({0}, {2}, {1.0, 0.0}),
                       Factor({0, 1}, {2, 2}, {1.0, 0.0, 0.0, 1.0}),
                       Factor({0, 2}, {2, 2}, {0.5, 0.5, 0.5, 0.5})});
  EvidenceMap e;
  e.set(0, 0);
  e.set(1, 1);
  CHECK_THROWS_AS(variable_elimination(bn, VertexSet::of(3, {2}), e),
                  ZeroEvidenceProbabilityError);
}

TEST_CASE("joint enumeration sums to one") {
  const Dag g = random_dag(8, 0.3, 3);
  const DiscreteBn bn = binary_net(g, 9);
  const Factor joint = joint_enumerate(bn);
  CHECK(joint.size() == 256);
  CHECK(joint.total_mass() == doctest::Approx(1.0).epsilon(1e-9));

  // Uniform independent bits.
  const Dag three(std::vector<std::string>{"a", "b", "c"}, {});
  const DiscreteBn
      uniform(three, {2, 2, 2},
              {Factor({0}, {2}, {0.5, 0.5}), Factor({1}, {2}, {0.5, 0.5}),
               Factor({2}, {2}, {0.5, 0.5})});
  const Factor uniform_joint = joint_enumerate(uniform);
  for (double x : uniform_joint.table()) {
    CHECK(x == doctest::Approx(0.125));
  }

  CHECK_THROWS_AS(joint_enumerate(binary_net(random_dag(24, 0.1, 1), 2), 1u << 20),
                  SizeGuardError);
}

TEST_CASE("marginal of a single vertex matches VE") {
  const Dag g = random_dag(7, 0.3, 11);
  const DiscreteBn bn = binary_net(g, 12);
  const Factor joint = joint_enumerate(bn);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    VertexSet others = g.full_set();
    others.erase(v);
    const Factor direct = normalized(factor_marginalize(joint, others));
    const Factor ve = variable_elimination(bn, VertexSet::of(7, {v}), {});
    CHECK(max_abs_diff(direct, ve) < 1e-10);
  }
}

TEST_CASE("localize copies unchanged CPTs and recomputes the rest") {
  const Dag g = asia_like();
  const DiscreteBn bn = binary_net(g, 2024);
  const VertexSet hull = named_set(g, {"c", "d", "h"});
  const LocalizedBn local = localize_from_global(bn, hull);

  REQUIRE(local.bn.vertex_count() == 3);
  const VertexId lc = local.bn.dag().index_of("c").value();
  const VertexId ld = local.bn.dag().index_of("d").value();
  const VertexId lh = local.bn.dag().index_of("h").value();

  // d kept its single parent c: the CPT is copied verbatim.
  const Factor& orig_d = bn.cpt(id(g, "d"));
  CHECK(local.bn.cpt(ld).table() == orig_d.table());

  // c lost its parents, h lost parent g: both recomputed.
  CHECK(local.bn.cpt(lc).scope() == std::vector<VertexId>{lc});
  CHECK(local.bn.cpt(lh).scope() == std::vector<VertexId>{lc, lh});

  // The local joint equals the global marginal over the hull.
  const Factor global_joint = joint_enumerate(bn);
  VertexSet others = g.full_set();
  hull.for_each([&](VertexId v) { others.erase(v); });
  const Factor global_marginal = factor_marginalize(global_joint, others);
  const Factor local_joint = joint_enumerate(local.bn);
  for (std::size_t i = 0; i < local_joint.size(); ++i) {
    CHECK(local_joint.table()[i] ==
          doctest::Approx(global_marginal.table()[i]).epsilon(1e-9));
  }
}

TEST_CASE("localize requires a d-convex hull") {
  const Dag g = asia_like();
  const DiscreteBn bn = binary_net(g, 3);
  CHECK_THROWS_AS(localize_from_global(bn, named_set(g, {"d", "h"})),
                  NotConvexError);
}

TEST_CASE("localize with the full vertex set copies everything") {
  const Dag g = asia_like();
  const DiscreteBn bn = binary_net(g, 4);
  const LocalizedBn local = localize_from_global(bn, g.full_set());
  CHECK(local.bn == bn);
}

TEST_CASE("localized joints equal global marginals on random hulls") {
  std::mt19937_64 rng(31);
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; checked < 25; ++seed) {
    const Dag g = random_dag(6, 0.35, seed);
    const DiscreteBn bn = binary_net(g, seed + 100);
    VertexSet r(6);
    r.insert(static_cast<VertexId>(uniform_below(rng, 6)));
    r.insert(static_cast<VertexId>(uniform_below(rng, 6)));
    const VertexSet hull = cmdsa(g, r).hull;
    const LocalizedBn local = localize_from_global(bn, hull);

    VertexSet others = g.full_set();
    hull.for_each([&](VertexId v) { others.erase(v); });
    const Factor expected =
        factor_marginalize(joint_enumerate(bn), others);
    const Factor got = joint_enumerate(local.bn);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got.table()[i] ==
            doctest::Approx(expected.table()[i]).epsilon(1e-9));
    }
    ++checked;
  }
}

TEST_CASE("posterior inside the hull matches the global posterior") {
  const Dag g = asia_like();
  const DiscreteBn bn = binary_net(g, 777);
  const VertexSet hull = cmdsa(g, named_set(g, {"d", "h"})).hull;
  const LocalizedBn local = localize_from_global(bn, hull);

  EvidenceMap global_e;
  global_e.set(id(g, "d"), 1);
  const Factor global = variable_elimination(
      bn, VertexSet::of(g.vertex_count(), {id(g, "h")}), global_e);

  EvidenceMap local_e;
  local_e.set(local.from_original[id(g, "d")], 1);
  const Factor localf = variable_elimination(
      local.bn,
      VertexSet::of(local.bn.vertex_count(),
                    {local.from_original[id(g, "h")]}),
      local_e);
  for (std::size_t i = 0; i < global.size(); ++i) {
    CHECK(global.table()[i] ==
          doctest::Approx(localf.table()[i]).epsilon(1e-9));
  }
}

TEST_CASE("forward sampling basics") {
  const Dag g = asia_like();
  const DiscreteBn bn = binary_net(g, 5);
  CHECK(forward_sample(bn, 0, 1).rows() == 0);

  // Fair coin frequency within 3 sigma at 5000 samples.
  const Dag one(std::vector<std::string>{"a"}, {});
  const DiscreteBn coin(one, {2}, {Factor({0}, {2}, {0.5, 0.5})});
  const Dataset d = forward_sample(coin, 5000, 99);
  std::size_t heads = 0;
  for (std::size_t i = 0; i < d.rows(); ++i) heads += d.row(i)[0];
  const double sigma = std::sqrt(5000 * 0.25);
  CHECK(std::abs(static_cast<double>(heads) - 2500.0) <= 3 * sigma);

  // Deterministic chain: rows always satisfy b == a.
  const Dag chain = build_dag({{"a", "b"}});
  const DiscreteBn det(chain, {2, 2},
                       {Factor({0}, {2}, {0.5, 0.5}),
                        Factor({0, 1}, {2, 2}, {1.0, 0.0, 0.0, 1.0})});
  const Dataset rows = forward_sample(det, 200, 7);
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    CHECK(rows.row(i)[0] == rows.row(i)[1]);
  }
}

TEST_CASE("mle recovers the generating distribution") {
  const Dag g = build_dag({{"a", "b"}, {"b", "c"}});
  const DiscreteBn truth = binary_net(g, 12345);
  const Dataset data = forward_sample(truth, 5000, 6);
  const DiscreteBn fit = mle_fit(g, truth.cardinalities(), data, 1.0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t i = 0; i < fit.cpt(v).size(); ++i) {
      CHECK(std::abs(fit.cpt(v).table()[i] - truth.cpt(v).table()[i]) < 0.05);
    }
  }
}

TEST_CASE("mle smoothing and degenerate cases") {
  const Dag g = build_dag({{"a", "b"}});
  Dataset one_row(2);
  one_row.append_row(std::vector<std::uint32_t>{0, 1});
  const DiscreteBn fit = mle_fit(g, {2, 2}, one_row, 1.0);
  for (VertexId v = 0; v < 2; ++v) {
    for (double x : fit.cpt(v).table()) CHECK(x > 0.0);
  }

  CHECK_THROWS_AS(mle_fit(g, {2, 2}, Dataset(2), 0.0),
                  DegenerateEstimateError);

  // Fully observed counts with zero smoothing reproduce frequencies.
  Dataset full(1);
  const Dag single(std::vector<std::string>{"a"}, {});
  for (int i = 0; i < 3; ++i) full.append_row(std::vector<std::uint32_t>{0});
  full.append_row(std::vector<std::uint32_t>{1});
  const DiscreteBn freq = mle_fit(single, {2}, full, 0.0);
  CHECK(freq.cpt(0).table()[0] == doctest::Approx(0.75));
  CHECK(freq.cpt(0).table()[1] == doctest::Approx(0.25));
}

TEST_CASE("kl divergence") {
  const Dag g = build_dag({{"a", "b"}});
  const DiscreteBn p = binary_net(g, 8);
  CHECK(kl_divergence(p, p) == doctest::Approx(0.0));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DiscreteBn q = binary_net(g, 50 + seed);
    CHECK(kl_divergence(p, q) >= 0.0);
  }

  // Zero q-mass where p has mass yields infinity.
  const DiscreteBn q0(g, {2, 2},
                      {Factor({0}, {2}, {1.0, 0.0}),
                       Factor({0, 1}, {2, 2}, {0.5, 0.5, 0.5, 0.5})});
  CHECK(std::isinf(kl_divergence(p, q0)));

  // Structure mismatch.
  const Dag g2 = build_dag({{"b", "a"}});
  CHECK_THROWS_AS(kl_divergence(p, binary_net(g2, 1)), ScopeError);
}

TEST_CASE("kl to truth shrinks as samples grow") {
  double kl_small_total = 0, kl_large_total = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Dag g = random_tree_dag(10, 0.1, 3, seed);
    const DiscreteBn truth = binary_net(g, seed + 500);
    const Dataset small = forward_sample(truth, 1000, seed * 2 + 1);
    const Dataset large = forward_sample(truth, 5000, seed * 2 + 2);
    kl_small_total +=
        kl_divergence(truth, mle_fit(g, truth.cardinalities(), small, 1.0));
    kl_large_total +=
        kl_divergence(truth, mle_fit(g, truth.cardinalities(), large, 1.0));
  }
  CHECK(kl_large_total < kl_small_total);
}

TEST_CASE("elimination order is deterministic and complete") {
  const Dag g = random_dag(10, 0.3, 21);
  const DiscreteBn bn = binary_net(g, 22);
  const VertexSet query = VertexSet::of(10, {0});
  const auto a = elimination_order(bn, query, {});
  const auto b = elimination_order(bn, query, {});
  CHECK(a == b);
  CHECK(a.size() == 9);
}
