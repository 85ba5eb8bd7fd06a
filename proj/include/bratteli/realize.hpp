#pragma once

#include "bratteli/diagram.hpp"
#include "bratteli/presentation.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace bratteli {

using DeltaTable = std::map<std::string, BigInt>;

/// An edge into some vertex: its source and which of the parallel copies it is.
struct IncomingEdge {
  std::string source;
  long copy = 0;
  bool operator==(const IncomingEdge&) const = default;
};

/// Labels k_v(e) listed in the canonical order of incoming_edges(v).
using InjectionTable = std::map<std::string, std::vector<long>>;

/// Incoming edges of vertex j on level n, ordered by source then copy.
std::vector<IncomingEdge> incoming_edges(const Diagram& d, int n, int j);

/// Checks d_v >= 2 everywhere and, off the first level, either strict growth
/// or a doubled edge.  Throws PreconditionError naming the first bad vertex.
void require_realizable(const Diagram& d);
/// Stronger form: d_v >= 2 and d_v > sum of incoming source dimensions.
void require_strict(const Diagram& d);

DeltaTable compute_deltas(const Diagram& d);

InjectionTable assign_injections(const Diagram& d, const DeltaTable& deltas);
/// Uniformly chosen valid table; used to check that nothing depends on the choice.
InjectionTable random_injections(const Diagram& d, const DeltaTable& deltas, std::mt19937_64& rng);
void validate_injections(const Diagram& d, const DeltaTable& deltas, const InjectionTable& k);

struct VertexOrigin {
  std::string vertex;
  int level = 0;
  long index = 0;
  bool operator==(const VertexOrigin&) const = default;
};

using OriginMap = std::map<std::string, VertexOrigin>;

struct RealizedUltragraph {
  Ultragraph graph;
  Diagram diagram;
  DeltaTable deltas;
  InjectionTable injections;
  OriginMap origin;
  int depth = 0;
};

std::string ultra_vertex(const std::string& v, long i);
std::string ultra_edge(const std::string& vertex);

/// Ultragraph of the first `depth` levels.  Ranges that would need level
/// depth+1 keep a symbolic tail; last-level e_{v_1} has itself as tail.
RealizedUltragraph build_ultragraph(const Diagram& d, int depth);
/// Vertices missing from k get the default labels of assign_injections.
RealizedUltragraph build_ultragraph(const Diagram& d, int depth, const InjectionTable& k);

/// Graph of the first `depth` levels; last-level v_1 are open frontier vertices.
DirectedGraph realize_row_finite(const Diagram& d, int depth);

}  // namespace bratteli
