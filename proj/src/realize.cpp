#include "bratteli/realize.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace bratteli {

namespace {

constexpr long kMaxEdges = 1000000;
constexpr long kMaxVertices = 2000000;

long to_long(const BigInt& x, const std::string& what) {
  if (x > kMaxVertices) throw LimitExceeded(what + " is too large (" + x.str() + ")");
  return x.convert_to<long>();
}

struct Incoming {
  std::vector<IncomingEdge> edges;
  std::vector<long> from_row;
  BigInt source_dim_sum = 0;
};

Incoming incoming(const Diagram& d, int n, int j) {
  Incoming in;
  if (n < 2) return in;
  const MultMatrix& m = d.matrix(n - 1);
  const Level& lower = d.level(n - 1);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const BigInt& mult = m(i, j);
    if (mult == 0) continue;
    in.source_dim_sum += mult * lower.vertices[static_cast<std::size_t>(i)].dim;
    long c = to_long(mult, "edge multiplicity");
    if (static_cast<long>(in.edges.size()) + c > kMaxEdges) throw LimitExceeded("too many incoming edges");
    for (long k = 0; k < c; ++k) {
      in.edges.push_back({lower.vertices[static_cast<std::size_t>(i)].id, k});
      in.from_row.push_back(static_cast<long>(i));
    }
  }
  return in;
}

std::string at(const Diagram& d, int n, std::size_t j) {
  return "vertex " + d.level(n).vertices[j].id + " (level " + std::to_string(n) + ")";
}

bool has_doubled_edge(const Diagram& d, int n, int j) {
  const MultMatrix& m = d.matrix(n - 1);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (m(i, j) >= 2) return true;
  return false;
}

}  // namespace

std::vector<IncomingEdge> incoming_edges(const Diagram& d, int n, int j) { return incoming(d, n, j).edges; }

void require_realizable(const Diagram& d) {
  require_valid(d);
  for (int n = 1; n <= d.depth(); ++n) {
    const Level& l = d.level(n);
    for (std::size_t j = 0; j < l.size(); ++j) {
      if (l.vertices[j].dim < 2) throw PreconditionError(at(d, n, j) + " has dimension below 2");
      if (n == 1) continue;
      DimVector in = incoming_sum(d.matrix(n - 1), d.dims(n - 1));
      if (l.vertices[j].dim == in(static_cast<Eigen::Index>(j)) && !has_doubled_edge(d, n, static_cast<int>(j)))
        throw PreconditionError(at(d, n, j) + " has dimension equal to its incoming total and no doubled edge");
    }
  }
}

void require_strict(const Diagram& d) {
  require_valid(d);
  for (int n = 1; n <= d.depth(); ++n) {
    const Level& l = d.level(n);
    DimVector in = n > 1 ? incoming_sum(d.matrix(n - 1), d.dims(n - 1)) : DimVector();
    for (std::size_t j = 0; j < l.size(); ++j) {
      if (l.vertices[j].dim < 2) throw PreconditionError(at(d, n, j) + " has dimension below 2");
      if (n > 1 && l.vertices[j].dim <= in(static_cast<Eigen::Index>(j)))
        throw PreconditionError(at(d, n, j) + " does not exceed its incoming total " +
                                in(static_cast<Eigen::Index>(j)).str());
    }
  }
}

DeltaTable compute_deltas(const Diagram& d) {
  require_realizable(d);
  DeltaTable t;
  for (int n = 1; n <= d.depth(); ++n) {
    const Level& l = d.level(n);
    for (std::size_t j = 0; j < l.size(); ++j) {
      BigInt delta = l.vertices[j].dim;
      if (n > 1) {
        const MultMatrix& m = d.matrix(n - 1);
        const Level& lower = d.level(n - 1);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
          delta -= m(i, static_cast<Eigen::Index>(j)) * (lower.vertices[static_cast<std::size_t>(i)].dim - 1);
      }
      t[l.vertices[j].id] = delta;
    }
  }
  return t;
}

InjectionTable assign_injections(const Diagram& d, const DeltaTable& deltas) {
  InjectionTable k;
  for (int n = 1; n <= d.depth(); ++n) {
    const Level& l = d.level(n);
    for (std::size_t j = 0; j < l.size(); ++j) {
      Incoming in = incoming(d, n, static_cast<int>(j));
      std::vector<long> labels(in.edges.size());
      if (in.source_dim_sum < l.vertices[j].dim) {
        std::iota(labels.begin(), labels.end(), 1L);
      } else {
        const MultMatrix& m = d.matrix(n - 1);
        std::size_t zero = in.edges.size();
        for (std::size_t e = 0; e < in.edges.size(); ++e)
          if (m(in.from_row[e], static_cast<Eigen::Index>(j)) >= 2) {
            zero = e;
            break;
          }
        if (zero == in.edges.size())
          throw Inconsistency(at(d, n, j) + " needs label 0 but no source has two edges into it");
        long next = 1;
        for (std::size_t e = 0; e < in.edges.size(); ++e) labels[e] = e == zero ? 0 : next++;
      }
      k[l.vertices[j].id] = labels;
    }
  }
  validate_injections(d, deltas, k);
  return k;
}

InjectionTable random_injections(const Diagram& d, const DeltaTable& deltas, std::mt19937_64& rng) {
  InjectionTable k;
  for (int n = 1; n <= d.depth(); ++n) {
    const Level& l = d.level(n);
    for (std::size_t j = 0; j < l.size(); ++j) {
      Incoming in = incoming(d, n, static_cast<int>(j));
      long delta = to_long(deltas.at(l.vertices[j].id), "delta");
      std::vector<long> labels;
      if (in.source_dim_sum < l.vertices[j].dim) {
        std::vector<long> pool(static_cast<std::size_t>(delta - 1));
        std::iota(pool.begin(), pool.end(), 1L);
        std::shuffle(pool.begin(), pool.end(), rng);
        labels.assign(pool.begin(), pool.begin() + static_cast<long>(in.edges.size()));
      } else {
        const MultMatrix& m = d.matrix(n - 1);
        std::vector<std::size_t> eligible;
        for (std::size_t e = 0; e < in.edges.size(); ++e)
          if (m(in.from_row[e], static_cast<Eigen::Index>(j)) >= 2) eligible.push_back(e);
        if (eligible.empty())
          throw Inconsistency(at(d, n, j) + " needs label 0 but no source has two edges into it");
        std::size_t zero = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];
        std::vector<long> pool(in.edges.size() - 1);
        std::iota(pool.begin(), pool.end(), 1L);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::size_t next = 0;
        labels.resize(in.edges.size());
        for (std::size_t e = 0; e < in.edges.size(); ++e) labels[e] = e == zero ? 0 : pool[next++];
      }
      k[l.vertices[j].id] = labels;
    }
  }
  validate_injections(d, deltas, k);
  return k;
}

void validate_injections(const Diagram& d, const DeltaTable& deltas, const InjectionTable& k) {
  for (int n = 1; n <= d.depth(); ++n) {
    const Level& l = d.level(n);
    for (std::size_t j = 0; j < l.size(); ++j) {
      const std::string& v = l.vertices[j].id;
      Incoming in = incoming(d, n, static_cast<int>(j));
      auto it = k.find(v);
      std::vector<long> labels = it == k.end() ? std::vector<long>{} : it->second;
      if (labels.size() != in.edges.size())
        throw PreconditionError("injection for " + v + " has " + std::to_string(labels.size()) +
                                " labels but the vertex has " + std::to_string(in.edges.size()) +
                                " incoming edges");
      auto dt = deltas.find(v);
      if (dt == deltas.end()) throw PreconditionError("no delta recorded for " + v);
      std::set<long> seen;
      bool has_zero = false;
      for (std::size_t e = 0; e < labels.size(); ++e) {
        long x = labels[e];
        if (x < 0 || BigInt(x) >= dt->second)
          throw PreconditionError("injection for " + v + " uses label " + std::to_string(x) +
                                  " outside 0.." + BigInt(dt->second - 1).str());
        if (!seen.insert(x).second)
          throw PreconditionError("injection for " + v + " repeats label " + std::to_string(x));
        if (x == 0) {
          has_zero = true;
          if (d.matrix(n - 1)(in.from_row[e], static_cast<Eigen::Index>(j)) < 2)
            throw PreconditionError("injection for " + v + " gives label 0 to the only edge from " +
                                    in.edges[e].source);
        }
      }
      bool equality = n > 1 && in.source_dim_sum == l.vertices[j].dim;
      if (equality && !has_zero)
        throw PreconditionError("injection for " + v + " must use label 0 (dimension equals incoming total)");
      if (!equality && has_zero)
        throw PreconditionError("injection for " + v + " may not use label 0 (dimension exceeds incoming total)");
    }
  }
}

std::string ultra_vertex(const std::string& v, long i) { return v + "_" + std::to_string(i); }
std::string ultra_edge(const std::string& vertex) { return "e_" + vertex; }

RealizedUltragraph build_ultragraph(const Diagram& d, int depth) {
  if (depth < 2) throw PreconditionError("realization needs depth at least 2");
  Diagram t = truncate(d, depth);
  DeltaTable deltas = compute_deltas(t);
  InjectionTable k = assign_injections(t, deltas);
  return build_ultragraph(t, depth, k);
}

RealizedUltragraph build_ultragraph(const Diagram& d, int depth, const InjectionTable& k) {
  if (depth < 2) throw PreconditionError("realization needs depth at least 2");
  RealizedUltragraph out;
  out.depth = depth;
  out.diagram = truncate(d, depth);
  const Diagram& t = out.diagram;
  out.deltas = compute_deltas(t);
  out.injections = assign_injections(t, out.deltas);
  for (const auto& [v, labels] : k)
    if (out.injections.count(v)) out.injections[v] = labels;
  validate_injections(t, out.deltas, out.injections);

  BigInt total = 0;
  for (const auto& [v, delta] : out.deltas) total += delta - 1;
  if (total > kMaxVertices) throw LimitExceeded("ultragraph would have " + total.str() + " vertices");

  std::map<std::string, RangeSet> first;
  for (const auto& v : t.level(depth).vertices) first[v.id].tails.insert(ultra_edge(ultra_vertex(v.id, 1)));
  for (int n = depth - 1; n >= 1; --n) {
    const Level& upper = t.level(n + 1);
    std::map<std::string, RangeSet> cur;
    for (const auto& v : t.level(n).vertices) cur[v.id];
    for (std::size_t j = 0; j < upper.size(); ++j) {
      const std::string& w = upper.vertices[j].id;
      std::vector<IncomingEdge> in = incoming_edges(t, n + 1, static_cast<int>(j));
      const std::vector<long>& labels = out.injections.at(w);
      for (std::size_t e = 0; e < in.size(); ++e) {
        RangeSet& r = cur[in[e].source];
        if (labels[e] >= 1) {
          r.members.insert(ultra_vertex(w, labels[e]));
        } else {
          const RangeSet& rw = first.at(w);
          r.members.insert(rw.members.begin(), rw.members.end());
          r.tails.insert(rw.tails.begin(), rw.tails.end());
        }
      }
    }
    for (auto& [v, r] : cur) first[v] = std::move(r);
  }

  for (int n = 1; n <= depth; ++n)
    for (const auto& v : t.level(n).vertices) {
      long delta = out.deltas.at(v.id).convert_to<long>();
      for (long i = 1; i < delta; ++i) {
        std::string x = ultra_vertex(v.id, i);
        out.graph.vertices.push_back(x);
        out.origin[x] = {v.id, n, i};
        UltraEdge e;
        e.id = ultra_edge(x);
        e.source = x;
        if (i == 1) e.range = first.at(v.id);
        else e.range.members = {ultra_vertex(v.id, i - 1)};
        out.graph.edges.push_back(std::move(e));
      }
    }
  out.graph.name = t.name;
  return out;
}

DirectedGraph realize_row_finite(const Diagram& d, int depth) {
  if (depth < 2) throw PreconditionError("realization needs depth at least 2");
  require_strict(truncate(d, depth));
  return expand_ultragraph_to_graph(build_ultragraph(d, depth).graph);
}

}  // namespace bratteli
