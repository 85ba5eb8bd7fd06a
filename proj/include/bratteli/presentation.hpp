#pragma once

#include "bratteli/core.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bratteli {

/// Range of an ultraedge.  With `cofinite` set, `members` lists the excluded
/// vertices instead.  `tails` are ultraedge ids whose ranges are unioned in;
/// an edge listing itself as a tail has a range not yet resolved.
struct RangeSet {
  std::set<std::string> members;
  std::set<std::string> tails;
  bool cofinite = false;

  bool empty() const { return !cofinite && members.empty() && tails.empty(); }
  bool operator==(const RangeSet&) const = default;
};

struct UltraEdge {
  std::string id;
  std::string source;
  RangeSet range;
  bool operator==(const UltraEdge&) const = default;
};

struct Ultragraph {
  std::string name = "G";
  std::vector<std::string> vertices;
  std::vector<UltraEdge> edges;

  const UltraEdge* edge(const std::string& id) const;
  /// The unique ultraedge leaving v, when the source map is bijective.
  const UltraEdge* edge_from(const std::string& v) const;
  bool has_vertex(const std::string& v) const;
  bool bijective_source() const;
  bool operator==(const Ultragraph&) const = default;
};

/// Members of a range resolved against the vertex set; tails are followed
/// transitively.  `unresolved` reports whether some tail could not be expanded.
std::set<std::string> resolve_range(const Ultragraph& g, const RangeSet& r, bool* unresolved = nullptr);

struct GraphEdge {
  std::string id;
  std::string source;
  std::string target;
  bool infinite = false;
  bool operator==(const GraphEdge&) const = default;
};

enum class FrontierKind { open, recurring_sinks };

/// Finite portion of a directed multigraph.  Frontier vertices continue
/// beyond the represented portion.
struct DirectedGraph {
  std::string name = "E";
  std::vector<std::string> vertices;
  std::vector<GraphEdge> edges;
  std::map<std::string, FrontierKind> frontier;

  bool has_vertex(const std::string& v) const;
  std::vector<std::string> sinks() const;
  std::map<std::string, std::vector<const GraphEdge*>> out_edges() const;
  bool operator==(const DirectedGraph&) const = default;
};

struct MatrixRow {
  std::set<std::string> cols;
  std::set<std::string> tails;
  bool cofinite = false;
  bool operator==(const MatrixRow&) const = default;
};

/// Sparse {0,1}-matrix over a named index set.
struct ZeroOneMatrix {
  std::string name = "A";
  std::vector<std::string> index;
  std::map<std::string, MatrixRow> rows;

  bool entry(const std::string& i, const std::string& j) const;
  bool operator==(const ZeroOneMatrix&) const = default;
};

struct CycleResult {
  Tri has_cycle = Tri::no;
  std::vector<std::string> cycle;
};

CycleResult find_cycle(const DirectedGraph& g);
CycleResult find_cycle(const Ultragraph& g);
CycleResult find_cycle(const ZeroOneMatrix& a);

ZeroOneMatrix graph_to_edge_matrix(const DirectedGraph& e);
DirectedGraph matrix_to_dual_graph(const ZeroOneMatrix& a);
/// Vertex adjacency matrix of a graph without parallel edges; its dual graph is the graph itself.
ZeroOneMatrix graph_to_adjacency_matrix(const DirectedGraph& e);

ZeroOneMatrix ultragraph_to_matrix(const Ultragraph& g);
Ultragraph matrix_to_ultragraph(const ZeroOneMatrix& a);

DirectedGraph expand_ultragraph_to_graph(const Ultragraph& g);
/// One ultraedge per vertex with range the targets of its graph edges.
Ultragraph collapse_graph_to_ultragraph(const DirectedGraph& e);

Ultragraph m2_unitize(const Ultragraph& g);

struct SinkSummand {
  std::string sink;
  BigInt paths;
};

struct SinkDecomposition {
  std::vector<SinkSummand> finite;
  std::vector<std::string> compact;
  DirectedGraph residual;
};

SinkDecomposition decompose_sinks(const DirectedGraph& e);

DirectedGraph fin_dim_to_graph(const std::vector<BigInt>& dims);

/// Number of finite paths ending at v, counting v itself (acyclic graphs only).
std::map<std::string, BigInt> paths_ending_at(const DirectedGraph& e);

}  // namespace bratteli
