#include <doctest.h>

#include <cmath>
#include <random>

#include "dconvex/errors.hpp"
#include "dconvex/factor.hpp"
#include "dconvex/random_graphs.hpp"

using namespace dconvex;

namespace {

Factor random_factor(std::vector<VertexId> scope,
                     std::vector<std::uint32_t> cards, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t total = 1;
  for (auto c : cards) total *= c;
  std::vector<double> table(total);
  for (auto& x : table) x = unit_double(rng);
  return Factor(std::move(scope), std::move(cards), std::move(table));
}

}  // namespace

TEST_CASE("factor layout puts the last scope variable fastest") {
  // P(v0, v1) with cards 2x3: index = 3*s0 + s1.
  Factor f({0, 1}, {2, 3}, {0, 1, 2, 3, 4, 5});
  CHECK(f.index_of({0, 2}) == 2);
  CHECK(f.index_of({1, 0}) == 3);
  CHECK(f.stride_at(0) == 3);
  CHECK(f.stride_at(1) == 1);
}

TEST_CASE("factor validates its construction") {
  CHECK_THROWS_AS(Factor({1, 0}, {2, 2}, std::vector<double>(4)), ScopeError);
  CHECK_THROWS_AS(Factor({0, 0}, {2, 2}, std::vector<double>(4)), ScopeError);
  CHECK_THROWS_AS(Factor({0}, {2}, std::vector<double>(3)), ScopeError);
}

TEST_CASE("product with the unit factor is the identity") {
  const Factor f = random_factor({0, 2}, {2, 3}, 1);
  const Factor g = factor_product(f, Factor::constant(1.0));
  CHECK(g.scope() == f.scope());
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(g.table()[i] == doctest::Approx(f.table()[i]));
  }
}

TEST_CASE("product over disjoint scopes is an outer product") {
  const Factor a = random_factor({0}, {2}, 3);
  const Factor b = random_factor({1}, {3}, 4);
  const Factor p = factor_product(a, b);
  CHECK(p.size() == 6);
  for (std::uint32_t i = 0; i < 2; ++i) {
    for (std::uint32_t j = 0; j < 3; ++j) {
      CHECK(p.table()[p.index_of({i, j})] ==
            doctest::Approx(a.table()[i] * b.table()[j]));
    }
  }
}

TEST_CASE("product rejects cardinality mismatches") {
  const Factor a = random_factor({0, 1}, {2, 2}, 5);
  const Factor b = random_factor({1, 2}, {3, 2}, 6);
  CHECK_THROWS_AS(factor_product(a, b), CardinalityMismatchError);
}

TEST_CASE("P(a) * P(b|a) summed over a gives P(b)") {
  // Hand-built two-vertex net.
  const Factor pa({0}, {2}, {0.3, 0.7});
  const Factor pba({0, 1}, {2, 2}, {0.9, 0.1, 0.2, 0.8});
  const Factor joint = factor_product(pa, pba);
  const Factor pb = factor_marginalize(joint, VertexSet::of(2, {0}));
  CHECK(pb.table()[0] == doctest::Approx(0.3 * 0.9 + 0.7 * 0.2));
  CHECK(pb.table()[1] == doctest::Approx(0.3 * 0.1 + 0.7 * 0.8));
}

TEST_CASE("marginalize preserves mass and handles edge cases") {
  const Factor f = random_factor({0, 1, 3}, {2, 3, 2}, 7);

  const Factor same = factor_marginalize(f, VertexSet(5));
  CHECK(same.table() == f.table());

  const Factor scalar =
      factor_marginalize(f, VertexSet::of(5, {0, 1, 3}));
  CHECK(scalar.scope().empty());
  CHECK(scalar.table()[0] == doctest::Approx(f.total_mass()).epsilon(1e-12));

  const Factor partial = factor_marginalize(f, VertexSet::of(5, {1}));
  CHECK(partial.total_mass() == doctest::Approx(f.total_mass()).epsilon(1e-12));

  CHECK_THROWS_AS(factor_marginalize(f, VertexSet::of(5, {2})), ScopeError);
}

TEST_CASE("reduce slices the table") {
  const Factor f = random_factor({0, 1}, {2, 3}, 9);
  EvidenceMap e;
  e.set(1, 2);
  const Factor r = factor_reduce(f, e);
  CHECK(r.scope() == std::vector<VertexId>{0});
  CHECK(r.table()[0] == f.table()[f.index_of({0, 2})]);
  CHECK(r.table()[1] == f.table()[f.index_of({1, 2})]);

  // Empty evidence leaves the factor unchanged.
  CHECK(factor_reduce(f, EvidenceMap{}).table() == f.table());

  // Reducing the full scope selects a single entry.
  EvidenceMap all;
  all.set(0, 1);
  all.set(1, 0);
  const Factor s = factor_reduce(f, all);
  CHECK(s.scope().empty());
  CHECK(s.table()[0] == f.table()[f.index_of({1, 0})]);

  EvidenceMap bad;
  bad.set(1, 5);
  CHECK_THROWS_AS(factor_reduce(f, bad), std::out_of_range);
}

TEST_CASE("reduce commutes with marginalizing other variables") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Factor f = random_factor({0, 1, 2}, {2, 3, 2}, 100 + seed);
    EvidenceMap e;
    e.set(0, 1);
    const VertexSet out = VertexSet::of(4, {2});
    const Factor a = factor_marginalize(factor_reduce(f, e), out);
    const Factor b = factor_reduce(factor_marginalize(f, out), e);
    CHECK(a.scope() == b.scope());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.table()[i] == doctest::Approx(b.table()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("conditional_from_joint normalizes each slice") {
  const Factor joint = random_factor({2, 5}, {3, 2}, 11);
  const Factor cond = conditional_from_joint(joint, 5);
  // Sum over variable 5 for each state of variable 2 is 1.
  for (std::uint32_t s = 0; s < 3; ++s) {
    double sum = 0;
    for (std::uint32_t t = 0; t < 2; ++t) {
      sum += cond.table()[cond.index_of({s, t})];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("normalized rejects zero mass") {
  const Factor zero({0}, {2}, {0.0, 0.0});
  CHECK_THROWS_AS(normalized(zero), ZeroEvidenceProbabilityError);
}
