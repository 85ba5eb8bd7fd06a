#include "support.hpp"

#include "bratteli/random.hpp"
#include "bratteli/realize.hpp"

#include <doctest.h>

using namespace bratteli;
using test_support::load;

namespace {

RangeSet members(std::set<std::string> m, std::set<std::string> tails = {}) {
  RangeSet r;
  r.members = std::move(m);
  r.tails = std::move(tails);
  return r;
}

}  // namespace

TEST_CASE("worked example deltas") {
  Diagram d = load("worked_example.txt").diagram;
  DeltaTable t = compute_deltas(truncate(d, 3));
  std::vector<std::pair<std::string, long>> expected{{"s", 2}, {"t", 2}, {"u", 3}, {"v", 5},
                                                     {"w", 3}, {"x", 2}, {"y", 3}, {"z", 3}};
  for (const auto& [v, x] : expected) CHECK(t.at(v) == x);
}

TEST_CASE("worked example ranges with the given injections") {
  Document doc = load("worked_example.txt");
  REQUIRE(doc.injections);
  RealizedUltragraph g = build_ultragraph(doc.diagram, 3, *doc.injections);
  CHECK(g.graph.edge("e_s_1")->range == members({"v_1"}));
  CHECK(g.graph.edge("e_u_1")->range == members({"w_1"}));
  CHECK(g.graph.edge("e_v_1")->range == members({"x_1", "y_1", "z_2"}));
  CHECK(g.graph.edge("e_w_1")->range == members({"z_1", "y_2"}, {"e_y_1"}));
  CHECK(g.graph.edge("e_t_1")->range == members({"v_3", "v_4", "w_2", "y_2", "z_1"}, {"e_y_1"}));
  CHECK(g.graph.vertices.size() == 15);
  CHECK(g.graph.bijective_source());
  for (const auto& [x, o] : g.origin)
    if (o.index >= 2) CHECK(g.graph.edge_from(x)->range == members({ultra_vertex(o.vertex, o.index - 1)}));
}

TEST_CASE("injection validation") {
  Document doc = load("worked_example.txt");
  Diagram d = truncate(doc.diagram, 3);
  DeltaTable t = compute_deltas(d);
  InjectionTable k = *doc.injections;
  CHECK_NOTHROW(validate_injections(d, t, k));
  InjectionTable bad = k;
  bad["w"] = {1, 2, 0};
  CHECK_THROWS_AS(validate_injections(d, t, bad), PreconditionError);
  bad = k;
  bad["v"] = {1, 1, 4};
  CHECK_THROWS_AS(validate_injections(d, t, bad), PreconditionError);
  bad = k;
  bad["y"] = {1, 3, 2};
  CHECK_THROWS_AS(validate_injections(d, t, bad), PreconditionError);
  bad = k;
  bad["x"] = {0};
  CHECK_THROWS_AS(validate_injections(d, t, bad), PreconditionError);
  bad = k;
  bad["x"] = {1, 1};
  CHECK_THROWS_AS(validate_injections(d, t, bad), PreconditionError);
}

TEST_CASE("default and random injections are valid") {
  std::mt19937_64 rng(12);
  for (int c = 0; c < 100; ++c) {
    Diagram d = random_diagram(rng);
    require_realizable(d);
    DeltaTable t = compute_deltas(d);
    CHECK_NOTHROW(validate_injections(d, t, assign_injections(d, t)));
    CHECK_NOTHROW(validate_injections(d, t, random_injections(d, t, rng)));
    for (const auto& [v, x] : t) CHECK(x >= 2);
  }
}

TEST_CASE("realization preconditions") {
  CHECK_THROWS_AS(require_realizable(parse_diagram("diagram D\nlevel 1: a=1\nlevel 2: b=2\nedges 1: a->b\n")),
                  PreconditionError);
  Diagram eq = parse_diagram("diagram D\nlevel 1: a=2\nlevel 2: b=2\nedges 1: a->b\n");
  CHECK_THROWS_AS(require_realizable(eq), PreconditionError);
  Diagram dbl = parse_diagram("diagram D\nlevel 1: a=2\nlevel 2: b=4\nedges 1: a->b:2\n");
  CHECK_NOTHROW(require_realizable(dbl));
  CHECK_THROWS_AS(require_strict(dbl), PreconditionError);
  CHECK_THROWS_AS(build_ultragraph(dbl, 1), PreconditionError);
}

TEST_CASE("ultragraph shape") {
  std::mt19937_64 rng(13);
  for (int c = 0; c < 60; ++c) {
    Diagram d = random_diagram(rng);
    RealizedUltragraph g = build_ultragraph(d, d.depth());
    CHECK(g.graph.bijective_source());
    BigInt expected = 0;
    for (const auto& [v, x] : g.deltas) expected += x - 1;
    CHECK(BigInt(static_cast<long>(g.graph.vertices.size())) == expected);
    for (const auto& e : g.graph.edges) {
      CHECK_FALSE(e.range.empty());
      CHECK_FALSE(e.range.cofinite);
    }
    CHECK(find_cycle(g.graph).has_cycle != Tri::yes);
  }
}

TEST_CASE("row-finite realization has no sinks, infinite emitters or cycles") {
  std::mt19937_64 rng(14);
  RandomDiagramOptions opt;
  opt.family = DiagramFamily::strict;
  for (int c = 0; c < 60; ++c) {
    Diagram d = random_diagram(rng, opt);
    DirectedGraph e = realize_row_finite(d, d.depth());
    CHECK(e.sinks().empty());
    for (const auto& ed : e.edges) CHECK_FALSE(ed.infinite);
    CHECK(find_cycle(e).has_cycle == Tri::no);
  }
}

TEST_CASE("row-finite realization needs strict growth") {
  Diagram d = load("worked_example.txt").diagram;
  CHECK_THROWS_AS(realize_row_finite(d, 3), PreconditionError);
}

TEST_CASE("huge dimensions hit the size limit") {
  Diagram d = parse_diagram("diagram D\nlevel 1: a=2\nlevel 2: b=90000000\nedges 1: a->b\n");
  CHECK_THROWS_AS(build_ultragraph(d, 2), LimitExceeded);
}

TEST_CASE("tailed diagrams realize at any depth") {
  Diagram d = parse_diagram("diagram P\nlevel 1: a=2\nlevel 2: b=3\nedges 1: a->b\nperiodic from 1 period 1\n");
  RealizedUltragraph g = build_ultragraph(d, 8);
  CHECK(g.diagram.depth() == 8);
  CHECK(g.graph.vertices.size() == 8u);
}
