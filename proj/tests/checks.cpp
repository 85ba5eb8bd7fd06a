#include "checks.hpp"

#include "support.hpp"

#include "bratteli/diagram.hpp"
#include "bratteli/dsl.hpp"
#include "bratteli/findim.hpp"
#include "bratteli/random.hpp"
#include "bratteli/realize.hpp"

#include <algorithm>
#include <random>

using namespace bratteli;

namespace checks {

namespace {

std::vector<int> random_keep(std::mt19937_64& rng, int depth) {
  std::vector<int> keep;
  while (keep.size() < 2) {
    keep.clear();
    for (int n = 1; n <= depth; ++n)
      if (std::bernoulli_distribution(0.6)(rng)) keep.push_back(n);
  }
  return keep;
}

RandomDiagramOptions deep_generic() {
  RandomDiagramOptions opt;
  opt.family = DiagramFamily::generic;
  opt.min_depth = 3;
  opt.max_depth = 7;
  return opt;
}

}  // namespace

Outcome telescope_associativity(int cases, std::uint64_t seed) {
  Outcome o;
  std::mt19937_64 rng(seed);
  RandomDiagramOptions opt = deep_generic();
  while (o.cases < cases) {
    Diagram d = o.cases % 4 == 3 ? random_tailed_diagram(rng, opt) : random_diagram(rng, opt);
    int depth = d.tail ? d.depth() + 3 : d.depth();
    if (depth < 3) continue;
    ++o.cases;
    std::vector<int> k1 = random_keep(rng, depth);
    std::vector<int> k2 = random_keep(rng, static_cast<int>(k1.size()));
    std::vector<int> composed;
    for (int i : k2) composed.push_back(k1[static_cast<std::size_t>(i - 1)]);
    if (!(telescope(telescope(d, k1), k2) == telescope(d, composed)))
      o.fail("case " + std::to_string(o.cases) + "\n" + print(d));
  }
  return o;
}

Outcome telescope_path_counts(int cases, std::uint64_t seed) {
  Outcome o;
  std::mt19937_64 rng(seed);
  RandomDiagramOptions opt = deep_generic();
  opt.max_mult = 2;
  while (o.cases < cases) {
    Diagram d = random_diagram(rng, opt);
    if (d.depth() < 2) continue;
    ++o.cases;
    std::vector<int> keep = random_keep(rng, d.depth());
    Diagram t = telescope(d, keep);
    for (std::size_t i = 0; i + 1 < keep.size(); ++i) {
      const MultMatrix& m = t.matrix(static_cast<int>(i) + 1);
      for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b)
          if (m(a, b) != test_support::count_paths(d, keep[i], a, keep[i + 1], b))
            o.fail("case " + std::to_string(o.cases) + "\n" + print(d));
    }
  }
  return o;
}

Outcome quotient_validity(int cases, std::uint64_t seed) {
  Outcome o;
  std::mt19937_64 rng(seed);
  RandomDiagramOptions opt;
  opt.family = DiagramFamily::generic;
  opt.max_depth = 4;
  opt.max_width = 3;
  while (o.cases < cases) {
    Diagram d = o.cases % 3 == 2 ? random_tailed_diagram(rng, opt) : random_diagram(rng, opt);
    ++o.cases;
    int depth = std::min(d.tail ? d.depth() + 1 : d.depth(), 5);
    std::vector<HereditaryEntry> all;
    try {
      all = enumerate_hereditary_sets(d, depth);
    } catch (const LimitExceeded&) {
      --o.cases;
      continue;
    }
    Diagram t = truncate(d, depth);
    long total = 0;
    for (const auto& l : t.levels) total += static_cast<long>(l.size());
    for (const auto& e : all) {
      bool ok = is_hereditary(d, e.set) && is_saturated(d, e.set);
      long kept = 0;
      for (const auto& l : e.quotient.levels) kept += static_cast<long>(l.size());
      ok = ok && kept == total - static_cast<long>(e.set.count());
      if (!e.quotient.levels.empty()) ok = ok && validate_diagram(e.quotient).valid();
      if (!ok) {
        o.fail("case " + std::to_string(o.cases) + "\n" + print(d));
        break;
      }
    }
  }
  return o;
}

Outcome injection_invariance(int diagrams, int tables, std::uint64_t seed) {
  Outcome o;
  std::mt19937_64 rng(seed);
  RandomDiagramOptions opt;
  while (o.cases < diagrams) {
    Diagram d = random_diagram(rng, opt);
    if (d.depth() < 2) continue;
    ++o.cases;
    DeltaTable deltas = compute_deltas(d);
    std::optional<Diagram> first;
    for (int k = 0; k < tables; ++k) {
      InjectionTable inj = random_injections(d, deltas, rng);
      RealizedUltragraph g = build_ultragraph(d, d.depth(), inj);
      FinDimTower tower = simulate_direct_limit(g, d.depth());
      VerificationReport r = verify_roundtrip(d, d.depth() - 1, inj);
      if (r.pass()) r = compare_tower(d, tower, d.depth());
      Diagram back = tower_to_diagram(tower, d.name);
      if (!first) first = back;
      if (!r.pass() || !(back == *first)) {
        o.fail("case " + std::to_string(o.cases) + " table " + std::to_string(k) + ": " + r.first_mismatch() +
               "\n" + print(d));
        break;
      }
    }
  }
  return o;
}

Outcome parser_roundtrip(int cases, std::uint64_t seed) {
  Outcome o;
  std::mt19937_64 rng(seed);
  RandomDiagramOptions small;
  small.max_depth = 4;
  small.max_dim = 30;
  auto check = [&](const Document& doc) {
    std::string text = print(doc);
    Document back = parse(text);
    std::string again = print(back);
    bool same = again == text && back.kind == doc.kind;
    switch (doc.kind) {
      case DocKind::diagram:
        same = same && back.diagram == doc.diagram && back.injections == doc.injections &&
               (back.diagram.tail.has_value() == doc.diagram.tail.has_value());
        break;
      case DocKind::graph: same = same && back.graph == doc.graph; break;
      case DocKind::ultragraph:
        same = same && back.ultragraph == doc.ultragraph &&
               (!doc.provenance || (back.provenance && back.provenance->origin == doc.provenance->origin &&
                                    back.provenance->deltas == doc.provenance->deltas &&
                                    back.provenance->injections == doc.provenance->injections));
        break;
      case DocKind::matrix: same = same && back.matrix == doc.matrix; break;
      case DocKind::descriptor: same = same && back.descriptor == doc.descriptor; break;
    }
    if (!same) o.fail("case " + std::to_string(o.cases) + "\n" + text + "---\n" + again);
  };
  while (o.cases < cases) {
    ++o.cases;
    switch (o.cases % 6) {
      case 0: check(make_document(random_diagram(rng, small))); break;
      case 1: check(make_document(random_tailed_diagram(rng, small))); break;
      case 2: check(make_document(random_acyclic_graph(rng))); break;
      case 3: check(make_document(random_descriptor(rng, 2))); break;
      case 4: {
        Diagram d = random_diagram(rng, small);
        if (d.depth() < 2) {
          check(make_document(d));
          break;
        }
        RealizedUltragraph g = build_ultragraph(d, d.depth(), random_injections(d, compute_deltas(d), rng));
        check(make_document(g));
        break;
      }
      default: {
        Diagram d = random_diagram(rng, small);
        if (d.depth() < 2) {
          check(make_document(d));
          break;
        }
        Ultragraph g = build_ultragraph(d, d.depth()).graph;
        check(make_document(ultragraph_to_matrix(g)));
        check(make_document(g));
        break;
      }
    }
  }
  return o;
}

Outcome row_finite(int cases, std::uint64_t seed) {
  Outcome o;
  std::mt19937_64 rng(seed);
  RandomDiagramOptions opt;
  opt.family = DiagramFamily::strict;
  while (o.cases < cases) {
    Diagram d = random_diagram(rng, opt);
    if (d.depth() < 2) continue;
    ++o.cases;
    DirectedGraph e = realize_row_finite(d, d.depth());
    bool ok = e.sinks().empty() && find_cycle(e).has_cycle == Tri::no;
    for (const auto& ed : e.edges) ok = ok && !ed.infinite;
    VerificationReport r = verify_row_finite(d, d.depth() - 1);
    if (!ok || !r.pass()) o.fail("case " + std::to_string(o.cases) + ": " + r.first_mismatch() + "\n" + print(d));
  }
  return o;
}

}  // namespace checks
