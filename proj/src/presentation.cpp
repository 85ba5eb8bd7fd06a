#include "bratteli/presentation.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace bratteli {

const UltraEdge* Ultragraph::edge(const std::string& id) const {
  for (const auto& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

const UltraEdge* Ultragraph::edge_from(const std::string& v) const {
  const UltraEdge* found = nullptr;
  for (const auto& e : edges)
    if (e.source == v) {
      if (found) return nullptr;
      found = &e;
    }
  return found;
}

bool Ultragraph::has_vertex(const std::string& v) const {
  return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

bool Ultragraph::bijective_source() const {
  std::map<std::string, int> count;
  for (const auto& v : vertices) count[v] = 0;
  for (const auto& e : edges) {
    auto it = count.find(e.source);
    if (it == count.end()) return false;
    ++it->second;
  }
  for (const auto& [v, c] : count)
    if (c != 1) return false;
  return true;
}

std::set<std::string> resolve_range(const Ultragraph& g, const RangeSet& r, bool* unresolved) {
  std::set<std::string> out;
  bool open = false;
  std::set<std::string> seen;
  auto add = [&](const RangeSet& rs) {
    if (rs.cofinite) {
      for (const auto& v : g.vertices)
        if (!rs.members.count(v)) out.insert(v);
    } else {
      out.insert(rs.members.begin(), rs.members.end());
    }
  };
  std::function<void(const std::string&)> follow = [&](const std::string& id) {
    if (!seen.insert(id).second) return;
    const UltraEdge* e = g.edge(id);
    if (!e) {
      open = true;
      return;
    }
    add(e->range);
    for (const auto& t : e->range.tails) {
      if (t == id) open = true;
      else follow(t);
    }
  };
  add(r);
  for (const auto& t : r.tails) follow(t);
  if (unresolved) *unresolved = open;
  return out;
}

bool DirectedGraph::has_vertex(const std::string& v) const {
  return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
}

std::map<std::string, std::vector<const GraphEdge*>> DirectedGraph::out_edges() const {
  std::map<std::string, std::vector<const GraphEdge*>> out;
  for (const auto& v : vertices) out[v];
  for (const auto& e : edges) out[e.source].push_back(&e);
  return out;
}

std::vector<std::string> DirectedGraph::sinks() const {
  auto out = out_edges();
  std::vector<std::string> s;
  for (const auto& v : vertices)
    if (out[v].empty() && !frontier.count(v)) s.push_back(v);
  return s;
}

bool ZeroOneMatrix::entry(const std::string& i, const std::string& j) const {
  auto it = rows.find(i);
  if (it == rows.end()) return false;
  bool in = it->second.cols.count(j) > 0;
  return it->second.cofinite ? !in : in;
}

namespace {

/// Depth-first cycle search over an adjacency list keyed by vertex order.
std::vector<std::string> dfs_cycle(const std::vector<std::string>& order,
                                   const std::map<std::string, std::vector<std::string>>& adj) {
  std::map<std::string, int> color;
  std::map<std::string, std::string> parent;
  for (const auto& root : order) {
    if (color[root]) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      auto it = adj.find(v);
      if (it == adj.end() || idx >= it->second.size()) {
        color[v] = 2;
        stack.pop_back();
        continue;
      }
      std::string w = it->second[idx++];
      if (color[w] == 1) {
        std::vector<std::string> cyc;
        for (auto k = stack.rbegin(); k != stack.rend(); ++k) {
          cyc.push_back(k->first);
          if (k->first == w) break;
        }
        std::reverse(cyc.begin(), cyc.end());
        return cyc;
      }
      if (color[w] == 0) {
        color[w] = 1;
        parent[w] = v;
        stack.push_back({w, 0});
      }
    }
  }
  return {};
}

}  // namespace

CycleResult find_cycle(const DirectedGraph& g) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : g.edges) adj[e.source].push_back(e.target);
  CycleResult r;
  r.cycle = dfs_cycle(g.vertices, adj);
  r.has_cycle = r.cycle.empty() ? Tri::no : Tri::yes;
  return r;
}

CycleResult find_cycle(const Ultragraph& g) {
  std::map<std::string, std::vector<std::string>> adj;
  bool open = false;
  for (const auto& e : g.edges) {
    bool u = false;
    auto targets = resolve_range(g, e.range, &u);
    open = open || u;
    auto& a = adj[e.source];
    a.insert(a.end(), targets.begin(), targets.end());
  }
  CycleResult r;
  r.cycle = dfs_cycle(g.vertices, adj);
  r.has_cycle = !r.cycle.empty() ? Tri::yes : (open ? Tri::unknown : Tri::no);
  return r;
}

CycleResult find_cycle(const ZeroOneMatrix& a) {
  std::map<std::string, std::vector<std::string>> adj;
  bool open = false;
  for (const auto& i : a.index) {
    std::set<std::string> seen;
    std::set<std::string> targets;
    std::function<void(const std::string&)> follow = [&](const std::string& row) {
      if (!seen.insert(row).second) return;
      auto it = a.rows.find(row);
      if (it == a.rows.end()) {
        open = true;
        return;
      }
      if (it->second.cofinite) {
        for (const auto& j : a.index)
          if (!it->second.cols.count(j)) targets.insert(j);
      } else {
        targets.insert(it->second.cols.begin(), it->second.cols.end());
      }
      for (const auto& t : it->second.tails) {
        if (t == row) open = true;
        else follow(t);
      }
    };
    follow(i);
    adj[i].assign(targets.begin(), targets.end());
  }
  CycleResult r;
  r.cycle = dfs_cycle(a.index, adj);
  r.has_cycle = !r.cycle.empty() ? Tri::yes : (open ? Tri::unknown : Tri::no);
  return r;
}

ZeroOneMatrix graph_to_edge_matrix(const DirectedGraph& e) {
  auto out = e.out_edges();
  for (const auto& ed : e.edges)
    if (ed.infinite) throw PreconditionError("edge " + ed.id + " has infinite multiplicity");
  for (const auto& v : e.vertices)
    if (out[v].empty() && !e.frontier.count(v)) throw PreconditionError("vertex " + v + " is a sink");
  ZeroOneMatrix a;
  a.name = e.name;
  for (const auto& ed : e.edges) {
    a.index.push_back(ed.id);
    MatrixRow row;
    for (const GraphEdge* f : out[ed.target]) row.cols.insert(f->id);
    if (e.frontier.count(ed.target)) row.tails.insert(ed.id);
    a.rows[ed.id] = row;
  }
  return a;
}

DirectedGraph matrix_to_dual_graph(const ZeroOneMatrix& a) {
  DirectedGraph g;
  g.name = a.name;
  g.vertices = a.index;
  for (const auto& i : a.index) {
    auto it = a.rows.find(i);
    if (it == a.rows.end() || (it->second.cols.empty() && it->second.tails.empty() && !it->second.cofinite))
      throw PreconditionError("row " + i + " is identically zero");
    if (it->second.cofinite) throw PreconditionError("row " + i + " is not finite");
    if (!it->second.tails.empty()) g.frontier[i] = FrontierKind::open;
    for (const auto& j : a.index)
      if (it->second.cols.count(j)) g.edges.push_back({i + ">" + j, i, j, false});
  }
  return g;
}

ZeroOneMatrix graph_to_adjacency_matrix(const DirectedGraph& e) {
  ZeroOneMatrix a;
  a.name = e.name;
  a.index = e.vertices;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& v : e.vertices) a.rows[v];
  for (const auto& ed : e.edges) {
    if (ed.infinite) throw PreconditionError("edge " + ed.id + " has infinite multiplicity");
    if (!seen.insert({ed.source, ed.target}).second)
      throw PreconditionError("parallel edges from " + ed.source + " to " + ed.target);
    a.rows[ed.source].cols.insert(ed.target);
  }
  for (const auto& v : e.vertices) {
    auto& row = a.rows[v];
    if (e.frontier.count(v)) row.tails.insert(v);
    if (row.cols.empty() && row.tails.empty()) throw PreconditionError("vertex " + v + " is a sink");
  }
  return a;
}

ZeroOneMatrix ultragraph_to_matrix(const Ultragraph& g) {
  if (!g.bijective_source()) throw PreconditionError("source map is not bijective");
  ZeroOneMatrix a;
  a.name = g.name;
  a.index = g.vertices;
  for (const auto& e : g.edges) {
    MatrixRow row;
    row.cols = e.range.members;
    row.cofinite = e.range.cofinite;
    for (const auto& t : e.range.tails) {
      const UltraEdge* te = g.edge(t);
      if (!te) throw PreconditionError("range of " + e.id + " refers to unknown edge " + t);
      row.tails.insert(te->source);
    }
    a.rows[e.source] = row;
  }
  return a;
}

Ultragraph matrix_to_ultragraph(const ZeroOneMatrix& a) {
  Ultragraph g;
  g.name = a.name;
  g.vertices = a.index;
  for (const auto& i : a.index) {
    auto it = a.rows.find(i);
    if (it == a.rows.end() || (it->second.cols.empty() && it->second.tails.empty() && !it->second.cofinite))
      throw PreconditionError("row " + i + " is identically zero");
    UltraEdge e;
    e.id = "e_" + i;
    e.source = i;
    e.range.members = it->second.cols;
    e.range.cofinite = it->second.cofinite;
    for (const auto& t : it->second.tails) e.range.tails.insert("e_" + t);
    g.edges.push_back(e);
  }
  return g;
}

DirectedGraph expand_ultragraph_to_graph(const Ultragraph& g) {
  DirectedGraph out;
  out.name = g.name;
  out.vertices = g.vertices;
  for (const auto& e : g.edges) {
    for (const auto& t : e.range.tails) {
      if (t != e.id) throw PreconditionError("range of " + e.id + " is not resolved (refers to " + t + ")");
      out.frontier[e.source] = FrontierKind::open;
    }
    std::vector<std::string> targets;
    if (e.range.cofinite) {
      for (const auto& v : g.vertices)
        if (!e.range.members.count(v)) targets.push_back(v);
    } else {
      for (const auto& v : g.vertices)
        if (e.range.members.count(v)) targets.push_back(v);
      for (const auto& v : e.range.members)
        if (!g.has_vertex(v)) throw PreconditionError("range of " + e.id + " names unknown vertex " + v);
    }
    for (const auto& w : targets) out.edges.push_back({e.id + "/" + w, e.source, w, false});
  }
  return out;
}

Ultragraph collapse_graph_to_ultragraph(const DirectedGraph& e) {
  Ultragraph g;
  g.name = e.name;
  g.vertices = e.vertices;
  auto out = e.out_edges();
  for (const auto& v : e.vertices) {
    UltraEdge u;
    u.id = "e_" + v;
    u.source = v;
    for (const GraphEdge* ed : out[v]) {
      if (ed->infinite) throw PreconditionError("edge " + ed->id + " has infinite multiplicity");
      u.range.members.insert(ed->target);
    }
    if (e.frontier.count(v)) u.range.tails.insert(u.id);
    if (u.range.empty()) continue;
    g.edges.push_back(u);
  }
  return g;
}

Ultragraph m2_unitize(const Ultragraph& g) {
  Ultragraph out = g;
  std::string v0 = "v0";
  while (g.has_vertex(v0)) v0 += "'";
  UltraEdge e0;
  e0.id = "e_" + v0;
  while (g.edge(e0.id)) e0.id += "'";
  e0.source = v0;
  e0.range.cofinite = true;
  e0.range.members = {v0};
  out.vertices.push_back(v0);
  out.edges.push_back(e0);
  return out;
}

std::map<std::string, BigInt> paths_ending_at(const DirectedGraph& e) {
  std::map<std::string, int> indeg;
  std::map<std::string, std::vector<const GraphEdge*>> out = e.out_edges();
  for (const auto& v : e.vertices) indeg[v] = 0;
  for (const auto& ed : e.edges) ++indeg[ed.target];
  std::map<std::string, BigInt> count;
  for (const auto& v : e.vertices) count[v] = 1;
  std::deque<std::string> ready;
  for (const auto& v : e.vertices)
    if (indeg[v] == 0) ready.push_back(v);
  std::size_t done = 0;
  while (!ready.empty()) {
    std::string v = ready.front();
    ready.pop_front();
    ++done;
    for (const GraphEdge* ed : out[v]) {
      count[ed->target] += count[v];
      if (--indeg[ed->target] == 0) ready.push_back(ed->target);
    }
  }
  if (done != e.vertices.size()) throw PreconditionError("graph has a cycle");
  return count;
}

SinkDecomposition decompose_sinks(const DirectedGraph& e) {
  for (const auto& ed : e.edges)
    if (ed.infinite) throw PreconditionError("graph is not row-finite: edge " + ed.id + " has infinite multiplicity");
  CycleResult c = find_cycle(e);
  if (c.has_cycle == Tri::yes) throw PreconditionError("graph has a cycle through " + c.cycle.front());

  // vertices reaching each kind of frontier
  std::map<std::string, std::vector<std::string>> rev;
  for (const auto& ed : e.edges) rev[ed.target].push_back(ed.source);
  auto reaching = [&](bool recurring_only) {
    std::set<std::string> seen;
    std::deque<std::string> q;
    for (const auto& [v, kind] : e.frontier)
      if (!recurring_only || kind == FrontierKind::recurring_sinks) {
        seen.insert(v);
        q.push_back(v);
      }
    while (!q.empty()) {
      std::string v = q.front();
      q.pop_front();
      for (const auto& u : rev[v])
        if (seen.insert(u).second) q.push_back(u);
    }
    return seen;
  };
  std::set<std::string> bad = reaching(true);
  for (const auto& v : e.vertices)
    if (bad.count(v))
      throw PreconditionError("vertex " + v + " connects to infinitely many sinks");

  std::set<std::string> continues = reaching(false);
  auto counts = paths_ending_at(e);
  SinkDecomposition out;
  for (const auto& s : e.sinks()) out.finite.push_back({s, counts[s]});
  out.residual.name = e.name;
  for (const auto& v : e.vertices)
    if (continues.count(v)) out.residual.vertices.push_back(v);
  for (const auto& ed : e.edges)
    if (continues.count(ed.target)) out.residual.edges.push_back(ed);
  for (const auto& [v, kind] : e.frontier) out.residual.frontier[v] = kind;
  return out;
}

DirectedGraph fin_dim_to_graph(const std::vector<BigInt>& dims) {
  if (dims.empty()) throw PreconditionError("dimension list is empty");
  DirectedGraph g;
  g.name = "F";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1) throw PreconditionError("dimensions must be positive");
    if (dims[i] > 100000) throw LimitExceeded("dimension too large to draw as a line graph");
    long n = dims[i].convert_to<long>();
    std::string base = "c" + std::to_string(i + 1) + "_";
    for (long k = 1; k <= n; ++k) g.vertices.push_back(base + std::to_string(k));
    for (long k = 1; k < n; ++k)
      g.edges.push_back({"f" + std::to_string(i + 1) + "_" + std::to_string(k), base + std::to_string(k),
                         base + std::to_string(k + 1), false});
  }
  return g;
}

}  // namespace bratteli
