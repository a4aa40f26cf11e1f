#include <doctest.h>

#include <fstream>
#include <sstream>

#include "dconvex/bif.hpp"
#include "dconvex/edge_list.hpp"
#include "dconvex/errors.hpp"
#include "dconvex/net_json.hpp"
#include "dconvex/random_graphs.hpp"
#include "test_support.hpp"

using namespace dconvex;
using namespace dconvex::test;

namespace {

const char* kMinimalBif = R"(
network minimal {
}
variable coin {
  type discrete [ 2 ] { heads, tails };
}
probability ( coin ) {
  table 0.5, 0.5;
}
)";

const char* kDogBif = R"(
// classic two-variable fragment
network dog {
  property note "ignored";
}
variable family-out {
  type discrete [ 2 ] { true, false };
}
variable light-on {
  type discrete [ 2 ] { true, false };
}
probability ( family-out ) {
  table 0.15, 0.85;
}
probability ( light-on | family-out ) {
  table 0.6 0.05 0.4 0.95;
}
)";

const char* kConfigStyleBif = R"(
network cfg { }
variable a { type discrete [ 2 ] { on, off }; }
variable b { type discrete [ 3 ] { x, y, z }; }
variable c { type discrete [ 2 ] { yes, no }; }
probability ( a ) { table 0.3, 0.7; }
probability ( b ) { table 0.2, 0.3, 0.5; }
probability ( c | a, b ) {
  (on, x) 0.1, 0.9;
  (on, y) 0.2, 0.8;
  (on, z) 0.3, 0.7;
  (off, x) 0.4, 0.6;
  (off, y) 0.5, 0.5;
  (off, z) 0.6, 0.4;
}
)";

double joint_diff(const DiscreteBn& a, const DiscreteBn& b) {
  const Factor ja = joint_enumerate(a);
  const Factor jb = joint_enumerate(b);
  REQUIRE(ja.size() == jb.size());
  double worst = 0;
  for (std::size_t i = 0; i < ja.size(); ++i) {
    worst = std::max(worst, std::abs(ja.table()[i] - jb.table()[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("minimal BIF document") {
  const NetworkDocument doc = parse_bif(kMinimalBif);
  CHECK(doc.name == "minimal");
  REQUIRE(doc.variables.size() == 1);
  CHECK(doc.variables[0].states == std::vector<std::string>{"heads", "tails"});
  const DiscreteBn bn = to_discrete_bn(doc);
  CHECK(bn.cpt(0).table() == std::vector<double>{0.5, 0.5});
}

TEST_CASE("conditional table rows run child-slowest") {
  const NetworkDocument doc = parse_bif(kDogBif);
  const DiscreteBn bn = to_discrete_bn(doc);
  const VertexId fo = bn.dag().index_of("family-out").value();
  const VertexId lo = bn.dag().index_of("light-on").value();
  // P(light-on=true | family-out=true) = 0.6 etc.
  const Factor& cpt = bn.cpt(lo);
  CHECK(cpt.table()[cpt.index_of({0, 0})] == doctest::Approx(0.6));
  CHECK(cpt.table()[cpt.index_of({1, 0})] == doctest::Approx(0.05));
  CHECK(cpt.table()[cpt.index_of({0, 1})] == doctest::Approx(0.4));
  CHECK(cpt.table()[cpt.index_of({1, 1})] == doctest::Approx(0.95));
  CHECK(fo < lo);
}

TEST_CASE("per-configuration rows") {
  const DiscreteBn bn = to_discrete_bn(parse_bif(kConfigStyleBif));
  const VertexId c = bn.dag().index_of("c").value();
  const Factor& cpt = bn.cpt(c);
  // (off, y) row: P(c=yes | a=off, b=y) = 0.5.
  CHECK(cpt.table()[cpt.index_of({1, 1, 0})] == doctest::Approx(0.5));
  // (on, z) row: P(c=no | a=on, b=z) = 0.7.
  CHECK(cpt.table()[cpt.index_of({0, 2, 1})] == doctest::Approx(0.7));
}

TEST_CASE("BIF syntax errors carry line and column") {
  try {
    parse_bif("variable x { type discrete [ 2 ] { a b };\n}\nprobability x");
    FAIL("expected a syntax error");
  } catch (const BifSyntaxError& e) {
    CHECK(e.line >= 3);
  }
}

TEST_CASE("BIF semantic errors") {
  // Three values for a binary variable.
  CHECK_THROWS_AS(parse_bif(R"(
    variable a { type discrete [ 2 ] { x, y }; }
    probability ( a ) { table 0.2, 0.3, 0.5; }
  )"),
                  BifSemanticError);

  // Undeclared parent.
  CHECK_THROWS_AS(parse_bif(R"(
    variable a { type discrete [ 2 ] { x, y }; }
    probability ( a | ghost ) { table 0.5, 0.5; }
  )"),
                  BifSemanticError);

  // Row far from normalized.
  CHECK_THROWS_AS(parse_bif(R"(
    variable a { type discrete [ 2 ] { x, y }; }
    probability ( a ) { table 0.5, 0.4; }
  )"),
                  BifSemanticError);

  // Missing probability block.
  CHECK_THROWS_AS(parse_bif(R"(
    variable a { type discrete [ 2 ] { x, y }; }
  )"),
                  BifSemanticError);
}

TEST_CASE("slightly off rows are renormalized with a warning") {
  const NetworkDocument doc = parse_bif(R"(
    variable a { type discrete [ 2 ] { x, y }; }
    probability ( a ) { table 0.4999999, 0.5; }
  )");
  CHECK(doc.warnings.size() == 1);
  const double sum = doc.tables[0].rows[0][0] + doc.tables[0].rows[0][1];
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("BIF round-trip preserves the joint") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dag g = random_dag(6, 0.35, seed);
    const DiscreteBn bn = random_cpts(
        g, std::vector<std::uint32_t>{2, 3, 2, 2, 3, 2}, seed + 40);
    const NetworkDocument doc = make_document(bn, "roundtrip");
    const DiscreteBn back = to_discrete_bn(parse_bif(write_bif(doc)));
    CHECK(joint_diff(bn, back) < 1e-9);
  }
}

TEST_CASE("BIF parse-serialize-parse is a fixpoint") {
  const NetworkDocument doc = parse_bif(kConfigStyleBif);
  const std::string once = write_bif(doc);
  const std::string twice = write_bif(parse_bif(once));
  CHECK(once == twice);
}

TEST_CASE("JSON round-trip is exact") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dag g = random_dag(7, 0.3, seed);
    const DiscreteBn bn = random_cpts(
        g, std::vector<std::uint32_t>(7, 2), seed + 11);
    const DiscreteBn back = read_json(write_json(bn));
    CHECK(back == bn);
    // Serialize-parse-serialize fixpoint.
    CHECK(write_json(back) == write_json(bn));
  }
}

TEST_CASE("JSON schema violations carry pointer paths") {
  CHECK_THROWS_AS(read_json("{\"name\":\"x\""), SchemaError);

  try {
    read_json(R"({"name":"x","variables":[],"edges":[],"cpts":[],"bogus":1})");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.pointer == "/bogus");
  }

  try {
    read_json(R"({"name":"x","variables":[{"name":"a","states":[]}],)"
              R"("edges":[],"cpts":[]})");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.pointer == "/variables/0/states");
  }
}

TEST_CASE("golden fixture loads and matches the figure") {
  std::ifstream in(std::string(TEST_DATA_DIR) + "/fig3_network.json");
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  const DiscreteBn bn = read_json(buf.str());
  CHECK(bn.vertex_count() == 8);
  CHECK(bn.dag().edge_count() == 8);
  const Dag expected = asia_like();
  for (const auto& [u, v] : expected.edges()) {
    CHECK(bn.dag().has_edge(bn.dag().index_of(expected.name(u)).value(),
                            bn.dag().index_of(expected.name(v)).value()));
  }
}

TEST_CASE("edge list round-trip") {
  const Dag g = asia_like();
  const Dag back = read_edge_list(write_edge_list(g));
  CHECK(back.vertex_count() == g.vertex_count());
  CHECK(back.edge_count() == g.edge_count());
  for (const auto& [u, v] : g.edges()) {
    CHECK(back.has_edge(back.index_of(g.name(u)).value(),
                        back.index_of(g.name(v)).value()));
  }

  CHECK_THROWS_AS(read_edge_list("a b c"), Error);
  CHECK(read_edge_list("# comment\n\na b\n").edge_count() == 1);
}
