#include "bratteli/random.hpp"

#include <algorithm>

namespace bratteli {

namespace {

long uniform(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string vertex_name(int n, std::size_t i) {
  std::string s;
  std::size_t k = i;
  do {
    s.insert(s.begin(), static_cast<char>('a' + k % 26));
    k /= 26;
  } while (k-- > 0);
  return s + std::to_string(n);
}

Level first_level(std::mt19937_64& rng, const RandomDiagramOptions& opt, int width) {
  Level l;
  long lo = opt.family == DiagramFamily::generic ? 1 : 2;
  long hi = std::max(lo, std::min<long>(opt.max_dim, 8));
  for (int i = 0; i < width; ++i) l.vertices.push_back({vertex_name(1, static_cast<std::size_t>(i)), uniform(rng, lo, hi)});
  return l;
}

/// Appends one level of the given width; false when every attempt exceeds max_dim.
bool grow(Diagram& d, int width, std::mt19937_64& rng, const RandomDiagramOptions& opt) {
  int n = d.depth();
  const DimVector prev = d.dims(n);
  auto rows = prev.size();
  for (int attempt = 0; attempt < 60; ++attempt) {
    int max_mult = attempt < 30 ? opt.max_mult : 1;
    double density = attempt < 30 ? 0.5 : 0.25;
    MultMatrix m = zero_matrix(rows, width);
    for (Eigen::Index i = 0; i < rows; ++i) {
      bool any = false;
      for (Eigen::Index j = 0; j < width; ++j)
        if (coin(rng, density)) {
          m(i, j) = uniform(rng, 1, max_mult);
          any = true;
        }
      if (!any) m(i, uniform(rng, 0, width - 1)) = uniform(rng, 1, max_mult);
    }
    DimVector in = incoming_sum(m, prev);
    Level lvl;
    bool ok = true;
    for (Eigen::Index j = 0; j < width && ok; ++j) {
      long extra = uniform(rng, 0, opt.max_extra);
      BigInt dim;
      switch (opt.family) {
        case DiagramFamily::generic:
          dim = std::max(in(j) + extra, BigInt(1));
          break;
        case DiagramFamily::strict:
          dim = std::max(in(j) + std::max(extra, 1L), BigInt(2));
          break;
        case DiagramFamily::realizable: {
          bool doubled = false;
          for (Eigen::Index i = 0; i < rows; ++i)
            if (m(i, j) >= 2) doubled = true;
          if (extra == 0 && !doubled) extra = 1;
          dim = std::max(in(j) + extra, BigInt(2));
          break;
        }
      }
      if (dim > opt.max_dim) ok = false;
      lvl.vertices.push_back({vertex_name(n + 1, static_cast<std::size_t>(j)), dim});
    }
    if (!ok) continue;
    d.add_level(std::move(lvl));
    d.set_matrix(n, m);
    return true;
  }
  return false;
}

}  // namespace

Diagram random_diagram(std::mt19937_64& rng, const RandomDiagramOptions& opt) {
  int depth = static_cast<int>(uniform(rng, opt.min_depth, opt.max_depth));
  for (;;) {
    Diagram d;
    d.name = "R";
    d.add_level(first_level(rng, opt, static_cast<int>(uniform(rng, 1, opt.max_width))));
    while (d.depth() < depth)
      if (!grow(d, static_cast<int>(uniform(rng, 1, opt.max_width)), rng, opt)) break;
    if (d.depth() >= opt.min_depth) return d;
  }
}

Diagram random_tailed_diagram(std::mt19937_64& rng, const RandomDiagramOptions& opt) {
  for (;;) {
    int from = static_cast<int>(uniform(rng, 1, std::max(1, opt.max_depth - 3)));
    int period = static_cast<int>(uniform(rng, 1, 2));
    Diagram d;
    d.name = "T";
    d.add_level(first_level(rng, opt, static_cast<int>(uniform(rng, 1, opt.max_width))));
    bool ok = true;
    while (ok && d.depth() < from + period) {
      int width = static_cast<int>(uniform(rng, 1, opt.max_width));
      if (d.depth() + 1 == from + period) width = static_cast<int>(d.level(from).size());
      ok = grow(d, width, rng, opt);
    }
    if (!ok) continue;
    d.tail = make_tail(d, from, period);
    return d;
  }
}

DirectedGraph random_acyclic_graph(std::mt19937_64& rng, int max_vertices) {
  DirectedGraph g;
  g.name = "E";
  int n = static_cast<int>(uniform(rng, 1, max_vertices));
  for (int i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
  int e = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!coin(rng, 0.3)) continue;
      int copies = coin(rng, 0.2) ? 2 : 1;
      for (int c = 0; c < copies; ++c)
        g.edges.push_back({"e" + std::to_string(e++), g.vertices[static_cast<std::size_t>(i)],
                           g.vertices[static_cast<std::size_t>(j)], false});
    }
  return g;
}

AlgDescriptor random_descriptor(std::mt19937_64& rng, int depth) {
  static const Tri values[] = {Tri::yes, Tri::no, Tri::unknown, Tri::unknown};
  AlgDescriptor a;
  a.name = "X" + std::to_string(uniform(rng, 0, 999));
  for (const auto& f : descriptor_flags())
    if (coin(rng, 0.6)) a.set(f, values[uniform(rng, 0, 3)]);
  if (coin(rng, 0.3)) {
    Witness w;
    static const char* kinds[] = {"graph", "ultragraph", "matrix"};
    w.kind = kinds[uniform(rng, 0, 2)];
    w.name = "W" + std::to_string(uniform(rng, 0, 99));
    w.row_finite = coin(rng, 0.5);
    w.no_sinks = coin(rng, 0.5);
    a.witnesses.push_back(w);
  }
  if (depth > 0 && coin(rng, 0.25)) {
    long k = uniform(rng, 2, 3);
    for (long i = 0; i < k; ++i) a.summands.push_back(random_descriptor(rng, depth - 1));
  } else if (depth > 0 && coin(rng, 0.1)) {
    a.m2_unitization_of.push_back(random_descriptor(rng, depth - 1));
  }
  return a;
}

}  // namespace bratteli
