#include "support.hpp"

#include "bratteli/presentation.hpp"
#include "bratteli/random.hpp"

#include <doctest.h>

#include <functional>

using namespace bratteli;
using test_support::load;

namespace {

/// Makes every sink an open frontier vertex and drops parallel edges.
DirectedGraph open_sinks(DirectedGraph g, bool simple) {
  if (simple) {
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<GraphEdge> kept;
    for (const auto& e : g.edges)
      if (seen.insert({e.source, e.target}).second) kept.push_back(e);
    g.edges = kept;
  }
  for (const auto& s : g.sinks()) g.frontier[s] = FrontierKind::open;
  return g;
}

BigInt brute_paths_to(const DirectedGraph& g, const std::string& v) {
  BigInt n = 1;
  for (const auto& e : g.edges)
    if (e.target == v) n += brute_paths_to(g, e.source);
  return n;
}

}  // namespace

TEST_CASE("sink decomposition of a vertex emitting to two sinks") {
  SinkDecomposition s = decompose_sinks(load("two_sinks.txt").graph);
  REQUIRE(s.finite.size() == 2);
  CHECK(s.finite[0].paths == 2);
  CHECK(s.finite[1].paths == 2);
  CHECK(s.compact.empty());
  CHECK(s.residual.vertices.empty());
}

TEST_CASE("sink decomposition of a single edge") {
  SinkDecomposition s = decompose_sinks(load("one_edge.txt").graph);
  REQUIRE(s.finite.size() == 1);
  CHECK(s.finite[0].sink == "w");
  CHECK(s.finite[0].paths == 2);
}

TEST_CASE("sink decomposition rejects infinitely many sinks") {
  DirectedGraph g = load("infinitely_many_sinks.txt").graph;
  try {
    decompose_sinks(g);
    FAIL("expected an error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("infinitely many sinks") != std::string::npos);
  }
}

TEST_CASE("sink decomposition rejects cycles and infinite emitters") {
  CHECK_THROWS_AS(decompose_sinks(parse("graph C\nvertex a b\nedge x: a -> b\nedge y: b -> a\n").graph),
                  PreconditionError);
  CHECK_THROWS_AS(decompose_sinks(parse("graph C\nvertex a b\nedge x: a -> b *inf\n").graph), PreconditionError);
}

TEST_CASE("path counts agree with backward enumeration") {
  std::mt19937_64 rng(3);
  for (int c = 0; c < 50; ++c) {
    DirectedGraph g = random_acyclic_graph(rng, 7);
    auto counts = paths_ending_at(g);
    for (const auto& v : g.vertices) CHECK(counts[v] == brute_paths_to(g, v));
  }
}

TEST_CASE("finite-dimensional algebra as a line graph") {
  DirectedGraph g = fin_dim_to_graph({3, 1, 2});
  SinkDecomposition s = decompose_sinks(g);
  REQUIRE(s.finite.size() == 3);
  CHECK(s.finite[0].paths == 3);
  CHECK(s.finite[1].paths == 1);
  CHECK(s.finite[2].paths == 2);
}

TEST_CASE("edge matrix entries are r(e) = s(f)") {
  std::mt19937_64 rng(4);
  for (int c = 0; c < 50; ++c) {
    DirectedGraph g = open_sinks(random_acyclic_graph(rng, 7), false);
    ZeroOneMatrix a = graph_to_edge_matrix(g);
    REQUIRE(a.index.size() == g.edges.size());
    for (const auto& e : g.edges)
      for (const auto& f : g.edges) CHECK(a.entry(e.id, f.id) == (e.target == f.source));
    CHECK(find_cycle(a).has_cycle != Tri::yes);
  }
}

TEST_CASE("dual graph of the adjacency matrix is the graph") {
  std::mt19937_64 rng(6);
  for (int c = 0; c < 50; ++c) {
    DirectedGraph g = open_sinks(random_acyclic_graph(rng, 7), true);
    DirectedGraph back = matrix_to_dual_graph(graph_to_adjacency_matrix(g));
    CHECK(back.vertices == g.vertices);
    CHECK(back.frontier == g.frontier);
    std::multiset<std::pair<std::string, std::string>> x, y;
    for (const auto& e : g.edges) x.insert({e.source, e.target});
    for (const auto& e : back.edges) y.insert({e.source, e.target});
    CHECK(x == y);
  }
}

TEST_CASE("collapse then expand keeps the adjacency") {
  std::mt19937_64 rng(7);
  for (int c = 0; c < 50; ++c) {
    DirectedGraph g = open_sinks(random_acyclic_graph(rng, 7), true);
    Ultragraph u = collapse_graph_to_ultragraph(g);
    CHECK(u.bijective_source());
    DirectedGraph e = expand_ultragraph_to_graph(u);
    std::multiset<std::pair<std::string, std::string>> x, y;
    for (const auto& ed : g.edges) x.insert({ed.source, ed.target});
    for (const auto& ed : e.edges) y.insert({ed.source, ed.target});
    CHECK(x == y);
    CHECK(e.frontier == g.frontier);
    Ultragraph m = matrix_to_ultragraph(ultragraph_to_matrix(u));
    CHECK(m == u);
  }
}

TEST_CASE("cycles in each presentation") {
  Document g = parse("graph C\nvertex a b c\nedge x: a -> b\nedge y: b -> c\nedge z: c -> a\n");
  CycleResult r = find_cycle(g.graph);
  CHECK(r.has_cycle == Tri::yes);
  CHECK(r.cycle.size() == 3);
  Document u = parse("ultragraph U\nvertex a b\nedge e_a: a -> {b}\nedge e_b: b -> {} +tail(e_b)\n");
  CHECK(find_cycle(u.ultragraph).has_cycle == Tri::unknown);
  Document m = parse("matrix A\nindex a b\nrow a: b\nrow b: a\n");
  CHECK(find_cycle(m.matrix).has_cycle == Tri::yes);
  Document n = parse("matrix A\nindex a b\nrow a: b\nrow b: * except a b\n");
  CHECK(find_cycle(n.matrix).has_cycle == Tri::no);
}

TEST_CASE("expansion preserves acyclicity") {
  std::mt19937_64 rng(9);
  for (int c = 0; c < 50; ++c) {
    DirectedGraph g = open_sinks(random_acyclic_graph(rng, 7), true);
    Ultragraph u = collapse_graph_to_ultragraph(g);
    CHECK(find_cycle(expand_ultragraph_to_graph(u)).has_cycle == Tri::no);
  }
}

TEST_CASE("M2 unitization adds a vertex whose edge reaches everything else") {
  Ultragraph g = parse("ultragraph G\nvertex v0 a\nedge e_v0: v0 -> {a}\nedge e_a: a -> {} +tail(e_a)\n").ultragraph;
  Ultragraph h = m2_unitize(g);
  REQUIRE(h.vertices.size() == 3);
  const std::string& v = h.vertices.back();
  CHECK(v == "v0'");
  const UltraEdge* e = h.edge_from(v);
  REQUIRE(e);
  CHECK(resolve_range(h, e->range) == std::set<std::string>{"v0", "a"});
  CHECK(h.bijective_source());
}

TEST_CASE("unresolved tails are reported by resolve_range") {
  Ultragraph g = parse("ultragraph G\nvertex a b\nedge e_a: a -> {b} +tail(e_b)\nedge e_b: b -> {} +tail(e_b)\n").ultragraph;
  bool open = false;
  CHECK(resolve_range(g, g.edge("e_a")->range, &open) == std::set<std::string>{"b"});
  CHECK(open);
  CHECK_THROWS_AS(expand_ultragraph_to_graph(g), PreconditionError);
}
