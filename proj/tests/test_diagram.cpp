#include "support.hpp"

#include "bratteli/diagram.hpp"
#include "bratteli/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace bratteli;
using test_support::load;

TEST_CASE("zero dimension is rejected by the parser") {
  CHECK_THROWS_AS(parse("diagram D\nlevel 1: v=0\n"), ParseError);
}

TEST_CASE("validation reports sinks and dimension deficits") {
  Diagram d = parse_diagram("diagram D\nlevel 1: a=2 b=1\nlevel 2: c=1\nedges 1: a->c:1\n");
  ValidationReport r = validate_diagram(d);
  REQUIRE(r.issues.size() == 2);
  CHECK(r.issues[0].vertex == "b");
  CHECK(r.issues[1].vertex == "c");
  CHECK_THROWS_AS(require_valid(d), PreconditionError);
}

TEST_CASE("telescoping three levels") {
  Diagram d = load("three_levels.txt").diagram;
  REQUIRE(validate_diagram(d).valid());
  Diagram t = telescope(d, {1, 3});
  REQUIRE(t.depth() == 2);
  const MultMatrix& m = t.matrix(1);
  CHECK(m(0, 0) == 2);
  CHECK(m(0, 1) == 2);
  CHECK(m(1, 0) == 0);
  CHECK(m(1, 1) == 1);
  CHECK(t.level(2).vertices[1].dim == 10);
}

TEST_CASE("path matrix agrees with walking the edges") {
  std::mt19937_64 rng(11);
  for (int c = 0; c < 40; ++c) {
    RandomDiagramOptions opt;
    opt.family = DiagramFamily::generic;
    Diagram d = random_diagram(rng, opt);
    MultMatrix p = path_matrix(d, 1, d.depth());
    for (Eigen::Index i = 0; i < p.rows(); ++i)
      for (Eigen::Index j = 0; j < p.cols(); ++j) CHECK(p(i, j) == test_support::count_paths(d, 1, i, d.depth(), j));
  }
}

TEST_CASE("periodic extension of the three-column example") {
  Diagram d = load("af_example.txt").diagram;
  REQUIRE(validate_diagram(d).valid());
  Diagram e = extend(d, 12);
  REQUIRE(e.depth() == 12);
  for (int n = 2; n <= 12; ++n) {
    CHECK(e.level(n).vertices[0].dim == BigInt(1) << n);
    CHECK(e.level(n).vertices[1].dim == n - 1);
    CHECK(e.level(n).vertices[2].dim == 1);
  }
  CHECK(e.level(7).vertices[0].id == "a2@7");
  CHECK(e.tail->from == 11);
  CHECK(validate_diagram(e).valid());
}

TEST_CASE("hereditary enumeration matches subset filtering") {
  std::mt19937_64 rng(5);
  for (int c = 0; c < 60; ++c) {
    RandomDiagramOptions opt;
    opt.family = DiagramFamily::generic;
    opt.max_depth = 4;
    opt.max_width = 3;
    Diagram d = random_diagram(rng, opt);
    std::vector<std::pair<int, int>> slots;
    for (int n = 1; n <= d.depth(); ++n)
      for (std::size_t i = 0; i < d.level(n).size(); ++i) slots.push_back({n, static_cast<int>(i)});
    if (slots.size() > 14) continue;
    std::set<std::vector<std::string>> brute;
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
      HereditarySet h;
      for (int n = 1; n <= d.depth(); ++n) h.member.push_back(std::vector<bool>(d.level(n).size(), false));
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask >> s & 1u) h.member[static_cast<std::size_t>(slots[s].first - 1)][static_cast<std::size_t>(slots[s].second)] = true;
      if (is_hereditary(d, h) && is_saturated(d, h)) brute.insert(h.vertex_ids(d));
    }
    std::set<std::vector<std::string>> fast;
    for (const auto& e : enumerate_hereditary_sets(d, d.depth())) {
      CHECK(is_hereditary(d, e.set));
      CHECK(is_saturated(d, e.set));
      fast.insert(e.set.vertex_ids(d));
    }
    CHECK(fast == brute);
  }
}

TEST_CASE("quotients of valid diagrams are valid") {
  std::mt19937_64 rng(8);
  for (int c = 0; c < 30; ++c) {
    RandomDiagramOptions opt;
    opt.family = DiagramFamily::generic;
    Diagram d = random_diagram(rng, opt);
    for (const auto& e : enumerate_hereditary_sets(d, d.depth())) {
      if (e.set.count() == 0) CHECK(e.quotient == d);
      if (e.quotient.levels.empty()) continue;
      CHECK(validate_diagram(e.quotient).valid());
    }
  }
}

TEST_CASE("enumeration respects its limit") {
  Diagram d = load("worked_example.txt").diagram;
  CHECK_THROWS_AS(enumerate_hereditary_sets(d, 3, 4), LimitExceeded);
}

TEST_CASE("quotient properties of the three-column example") {
  Diagram d = load("af_example.txt").diagram;
  QuotientProperties q = check_quotient_properties(d, 6);
  CHECK(q.has_C.value == Tri::yes);
  CHECK(q.has_findim.value == Tri::yes);
  CHECK(q.has_unital.value == Tri::yes);
  REQUIRE(q.has_C.certificate);
  CHECK(validate_diagram(quotient_diagram(d, q.has_C.certificate->set)).valid());
}

TEST_CASE("strict explicit diagram has no unital quotient within depth") {
  Diagram d = parse_diagram(
      "diagram S\nlevel 1: a=2\nlevel 2: b=3 c=3\nlevel 3: e=7\nedges 1: a->b a->c\nedges 2: b->e c->e\n");
  QuotientProperties q = check_quotient_properties(d, 3);
  CHECK(q.has_unital.value == Tri::no);
  CHECK(q.has_findim.value == Tri::no);
  CHECK(q.has_C.value == Tri::no);
}

TEST_CASE("tail analysis agrees with a deep unrolling") {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int c = 0; c < 150; ++c) {
    RandomDiagramOptions opt;
    opt.family = DiagramFamily::generic;
    opt.max_depth = 5;
    opt.max_width = 3;
    opt.max_mult = 2;
    opt.max_extra = 2;
    Diagram d = random_tailed_diagram(rng, opt);
    REQUIRE(validate_diagram(d).valid());
    TailAnalysis a = analyze_tail(d);
    int window = 2 * a.period_nodes + 1;
    Diagram u = truncate(d, std::max(24, d.depth() + window + 2));
    CHECK(a.has_findim == exhibits_findim(u, window).has_value());
    CHECK(a.has_C == exhibits_C(u, window).has_value());
    CHECK(a.has_unital == exhibits_unital(u, window).has_value());
    ++checked;
  }
  CHECK(checked == 150);
}

TEST_CASE("trim refuses when a one-dimensional quotient exists") {
  Diagram d = load("af_example.txt").diagram;
  CHECK_THROWS_AS(trim_dimension_one(d), PreconditionError);
}

TEST_CASE("trim removes a dimension-one vertex that does not persist") {
  Diagram d = parse_diagram(
      "diagram D\nlevel 1: a=1 b=2\nlevel 2: c=4\nlevel 3: e=9\nedges 1: a->c b->c\nedges 2: c->e:2\n");
  Diagram t = trim_dimension_one(d);
  for (const auto& l : t.levels)
    for (const auto& v : l.vertices) CHECK(v.dim > 1);
  CHECK(validate_diagram(t).valid());
}

TEST_CASE("normalization output satisfies the realization conditions") {
  Diagram d = parse_diagram(
      "diagram N\nlevel 1: a=1\nlevel 2: b=1 c=2\nlevel 3: e=3 f=4\nlevel 4: g=9 h=12\n"
      "edges 1: a->b a->c:2\nedges 2: b->e c->e b->f c->f\nedges 3: e->g:3 f->h:3\n");
  REQUIRE(validate_diagram(d).valid());
  Diagram n = normalize_fd(d, 4);
  for (int k = 1; k <= n.depth(); ++k)
    for (std::size_t i = 0; i < n.level(k).size(); ++i) {
      CHECK(n.level(k).vertices[i].dim >= 2);
      if (k > 1) CHECK(findim_condition_at(n, k, static_cast<int>(i)));
    }
}

TEST_CASE("saturation forces the source of a one-edge chain") {
  Diagram d = parse_diagram("diagram C\nlevel 1: v=1\nlevel 2: w=1\nedges 1: v->w\n");
  std::vector<HereditaryEntry> all = enumerate_hereditary_sets(d, 2);
  REQUIRE(all.size() == 2);
  std::set<std::size_t> sizes;
  for (const auto& e : all) sizes.insert(e.set.count());
  CHECK(sizes == std::set<std::size_t>{0, 2});
}
