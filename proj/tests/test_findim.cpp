#include "support.hpp"

#include "bratteli/findim.hpp"
#include "bratteli/random.hpp"

#include <doctest.h>

using namespace bratteli;
using test_support::load;

namespace {

FinDimShape shape(std::vector<long> dims) {
  FinDimShape s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    s.ids.push_back("x" + std::to_string(i));
    s.dims.push_back(dims[i]);
  }
  return s;
}

MultMatrix mat(Eigen::Index r, Eigen::Index c, std::vector<long> v) {
  MultMatrix m = zero_matrix(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = v[static_cast<std::size_t>(i * c + j)];
  return m;
}

}  // namespace

TEST_CASE("amalgamation dimension law") {
  Amalgamation a = amalgamate(shape({2, 3}), shape({3, 2}), mat(2, 2, {1, 1, 2, 0}));
  CHECK(a.a.dims[0] == 3 + 1 + 4);
  CHECK(a.a.dims[1] == 2 + 1);
  CHECK(equal(a.incl_b, mat(2, 2, {1, 1, 2, 0})));
  CHECK(equal(a.incl_c, identity_matrix(2)));
}

TEST_CASE("amalgamation preconditions") {
  CHECK_THROWS_AS(amalgamate(shape({2}), shape({1}), mat(1, 1, {2})), PreconditionError);
  CHECK_THROWS_AS(amalgamate(shape({2}), shape({3}), mat(1, 1, {0})), PreconditionError);
  CHECK_THROWS_AS(amalgamate(shape({2}), shape({3, 1}), mat(1, 1, {1})), PreconditionError);
}

TEST_CASE("worked example round trip at depth 3") {
  Document doc = load("worked_example.txt");
  VerificationReport r = verify_roundtrip(doc.diagram, 3, *doc.injections);
  CHECK(r.pass());
  REQUIRE(r.levels.size() == 3);
  CHECK(r.to_text().find("result PASS") != std::string::npos);
  CHECK(verify_roundtrip(doc.diagram, 3).pass());
}

TEST_CASE("simulation needs a level above the requested depth") {
  Document doc = load("worked_example.txt");
  RealizedUltragraph g = build_ultragraph(doc.diagram, 3, *doc.injections);
  CHECK_THROWS_AS(simulate_direct_limit(g, 4), UnknownAtDepth);
  FinDimTower t = simulate_direct_limit(g, 2);
  REQUIRE(t.shapes.size() == 2);
  CHECK(t.shapes[1].dims[0] == 8);
  CHECK(t.shapes[1].dims[1] == 7);
}

TEST_CASE("comparison catches a wrong dimension and a wrong matrix") {
  Document doc = load("worked_example.txt");
  RealizedUltragraph g = build_ultragraph(doc.diagram, 4);
  FinDimTower t = simulate_direct_limit(g, 3);
  Diagram bad = doc.diagram;
  bad.levels[1].vertices[0].dim = 9;
  VerificationReport r = compare_tower(bad, t, 3);
  CHECK_FALSE(r.pass());
  CHECK(r.first_mismatch().find("level 2") != std::string::npos);
  FinDimTower t2 = t;
  t2.inclusions[1](0, 0) = 2;
  CHECK_FALSE(compare_tower(doc.diagram, t2, 3).pass());
}

TEST_CASE("tower to diagram") {
  Document doc = load("worked_example.txt");
  FinDimTower t = simulate_direct_limit(build_ultragraph(doc.diagram, 4), 3);
  CHECK(tower_to_diagram(t, "W") == truncate(doc.diagram, 3));
}

TEST_CASE("row-finite verification on strict diagrams") {
  std::mt19937_64 rng(31);
  RandomDiagramOptions opt;
  opt.family = DiagramFamily::strict;
  for (int c = 0; c < 20; ++c) {
    Diagram d = random_diagram(rng, opt);
    VerificationReport r = verify_row_finite(d, d.depth() - 1);
    CHECK_MESSAGE(r.pass(), r.to_text());
  }
}

TEST_CASE("numeric matrix units") {
  NumericReport r = numeric_matrix_units(shape({2, 3}), shape({3, 2}), mat(2, 2, {1, 1, 2, 0}));
  CHECK(r.pass());
  CHECK(r.rank == r.expected_rank);
  CHECK(r.expected_rank == 8 * 8 + 3 * 3);
  NumericReport s = numeric_matrix_units(shape({2, 3}), shape({3, 2}), mat(2, 2, {1, 1, 2, 0}), {64, 99});
  CHECK(s.pass());
  CHECK(s.max_deviation <= 1e-12);
}

TEST_CASE("numeric check respects its cap") {
  CHECK_THROWS_AS(numeric_matrix_units(shape({20}), shape({30}), mat(1, 1, {1}), {16, std::nullopt}), LimitExceeded);
}

TEST_CASE("chains in the worked example ultragraph") {
  Document doc = load("worked_example.txt");
  Ultragraph g = build_ultragraph(doc.diagram, 3, *doc.injections).graph;
  ChainResult r = find_mn_chain(g, 7);
  CHECK(r.found == Tri::yes);
  REQUIRE(r.chain.size() == 7);
  for (std::size_t i = 0; i + 1 < r.chain.size(); ++i)
    CHECK(resolve_range(g, g.edge_from(r.chain[i])->range).count(r.chain[i + 1]));
  CHECK(find_mn_chain(g, 8).found == Tri::unknown);
  Ultragraph closed = parse("ultragraph C\nvertex a b\nedge e_a: a -> {b}\nedge e_b: b -> {a}\n").ultragraph;
  CHECK_THROWS_AS(find_mn_chain(closed, 2), PreconditionError);
  Ultragraph line = parse("ultragraph L\nvertex a b c\nedge e_a: a -> {b}\nedge e_b: b -> {c}\n").ultragraph;
  CHECK(find_mn_chain(line, 3).found == Tri::yes);
  CHECK(find_mn_chain(line, 4).found == Tri::no);
}
