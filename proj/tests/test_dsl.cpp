#include "support.hpp"

#include "bratteli/dsl.hpp"

#include <doctest.h>

using namespace bratteli;
using test_support::load;
using test_support::read_file;

namespace {

void check_error(const std::string& text, int line, int column, const std::string& fragment) {
  try {
    parse(text);
    FAIL("expected a parse error for: " << text);
  } catch (const ParseError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
    CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
  }
}

}  // namespace

TEST_CASE("parse errors carry line and column") {
  check_error("diagram D\nlevel 1: v=0\n", 2, 12, "dimension must be at least 1");
  check_error("diagram D\nlevel 1: v=2\nlevel 2: w=3\nedges 1: v->q\n", 4, 10, "not on level 2");
  check_error("diagram D\nlevel 1: v=2\nlevel 3: w=3\n", 3, 7, "level 2 is missing");
  check_error("diagram D\nlevel 1: v=2\nlevel 2: w=3\nedges 1: v->w v->w:2\n", 4, 15, "listed twice");
  check_error("diagram D\nlevel 1: v=2 v=3\n", 2, 14, "declared twice");
  check_error("diagram D\nlevel 1: v=x\n", 2, 12, "nonnegative integer");
  check_error("widget W\n", 1, 1, "unknown document kind");
  check_error("descriptor A\nflag shiny = yes\n", 2, 6, "unknown flag");
  check_error("descriptor A\nflag simple = maybe\n", 2, 15, "yes, no or unknown");
  check_error("descriptor A\nsummand B {\nflag simple = yes\n", 2, 1, "not closed");
  check_error("graph G\nvertex a\nedge e: a -> {b}\n", 3, 15, "unknown vertex b");
  check_error("ultragraph G\nvertex a\nedge e_a: a -> {a} +tail(e_z)\n", 3, 16, "unknown edge e_z");
  check_error("matrix A\nindex a\nrow a: b\n", 3, 8, "not in the index");
  check_error("diagram D\nlevel 1: v=2\nlevel 2: w=3\nedges 1: v->w\nperiodic from 1 period 2\n", 5, 1,
              "must end at the last level");
  check_error("", 1, 1, "empty document");
}

TEST_CASE("spans locate declarations") {
  Document d = load("worked_example.txt");
  CHECK(d.span_of("vertex y").line == 6);
  CHECK(d.span_of("vertex y").column == 14);
  CHECK(d.span_of("level 2").line == 5);
  CHECK(d.span_of("nothing").line == 0);
}

TEST_CASE("sample files print canonically and reparse to the same value") {
  for (const char* f : {"worked_example.txt", "af_example.txt", "three_levels.txt", "two_sinks.txt",
                        "one_edge.txt", "infinitely_many_sinks.txt", "regions/a_nonunital.txt",
                        "regions/d_nonunital.txt", "regions/e_nonunital.txt"}) {
    CAPTURE(f);
    Document a = load(f);
    std::string once = print(a);
    Document b = parse(once);
    CHECK(print(b) == once);
    CHECK(b.kind == a.kind);
    CHECK(b.diagram == a.diagram);
    CHECK(b.graph == a.graph);
    CHECK(b.descriptor == a.descriptor);
    CHECK(b.injections == a.injections);
  }
}

TEST_CASE("canonical diagram text") {
  Document d = parse("# comment\ndiagram X\nlevel 1:  a=2   b=3\nlevel 2: c=9\nedges 1: b->c a->c:2 # trailing\n");
  CHECK(print(d) == "diagram X\nlevel 1: a=2 b=3\nlevel 2: c=9\nedges 1: a->c:2 b->c:1\n");
}

TEST_CASE("ultragraph and matrix syntax") {
  Document u = parse("ultragraph G\nvertex a b c\nedge e_a: a -> {* except a}\nedge e_b: b -> {c} +tail(e_a)\n");
  REQUIRE(u.ultragraph.edges.size() == 2);
  CHECK(u.ultragraph.edges[0].range.cofinite);
  CHECK(u.ultragraph.edges[0].range.members == std::set<std::string>{"a"});
  CHECK(u.ultragraph.edges[1].range.tails == std::set<std::string>{"e_a"});
  CHECK(print(parse(print(u))) == print(u));
  Document m = parse("matrix A\nrow x: y +tail(y)\nrow y: * except x\n");
  CHECK(m.matrix.index == std::vector<std::string>{"x", "y"});
  CHECK(m.matrix.rows.at("y").cofinite);
  CHECK(print(m) == "matrix A\nindex x y\nrow x: y +tail(y)\nrow y: * except x\n");
}

TEST_CASE("graph syntax") {
  Document g = parse("graph E\nvertex a b\nedge e: a -> b *inf\nfrontier b recurring-sinks\n");
  CHECK(g.graph.edges[0].infinite);
  CHECK(g.graph.frontier.at("b") == FrontierKind::recurring_sinks);
  CHECK(print(g) == "graph E\nvertex a b\nedge e: a -> {b} *inf\nfrontier b recurring-sinks\n");
}

TEST_CASE("realized ultragraph keeps its provenance through text") {
  Document doc = load("worked_example.txt");
  RealizedUltragraph r = build_ultragraph(doc.diagram, 3, *doc.injections);
  Document back = parse(print(make_document(r)));
  REQUIRE(back.provenance);
  CHECK(back.ultragraph == r.graph);
  CHECK(back.provenance->origin == r.origin);
  CHECK(back.provenance->deltas == r.deltas);
  CHECK(back.provenance->injections == r.injections);
  CHECK(back.provenance->depth == 3);
}

TEST_CASE("descriptor nesting") {
  Document d = load("regions/d_nonunital.txt");
  REQUIRE(d.descriptor.summands.size() == 2);
  REQUIRE(d.descriptor.summands[0].m2_unitization_of.size() == 1);
  CHECK(d.descriptor.summands[0].m2_unitization_of[0].flag("stable") == Tri::yes);
  CHECK(d.descriptor.summands[0].witnesses.at(0).name == "M2K+");
  std::string text = print(d);
  CHECK(text.find("  m2unitization K {\n    flag simple = yes\n") != std::string::npos);
}
