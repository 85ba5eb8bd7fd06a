#pragma once

#include "bratteli/classify.hpp"
#include "bratteli/diagram.hpp"
#include "bratteli/presentation.hpp"
#include "bratteli/realize.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>

namespace bratteli {

enum class DocKind { diagram, graph, ultragraph, matrix, descriptor };

const char* to_string(DocKind k);

/// Provenance carried by a realized ultragraph.
struct Provenance {
  int depth = 0;
  DeltaTable deltas;
  InjectionTable injections;
  OriginMap origin;
};

struct Span {
  int line = 0;
  int column = 0;
};

struct Document {
  DocKind kind = DocKind::diagram;
  Diagram diagram;
  /// Injection table given with `inject` lines, if any.
  std::optional<InjectionTable> injections;
  DirectedGraph graph;
  Ultragraph ultragraph;
  std::optional<Provenance> provenance;
  ZeroOneMatrix matrix;
  AlgDescriptor descriptor;
  /// Where each named item was declared, keyed like "vertex v" or "level 2".
  std::map<std::string, Span> spans;

  Span span_of(const std::string& key) const;
};

Document parse(const std::string& text);
std::string print(const Document& doc);

Document make_document(const Diagram& d);
Document make_document(const DirectedGraph& g);
Document make_document(const Ultragraph& g);
Document make_document(const RealizedUltragraph& g);
Document make_document(const ZeroOneMatrix& a);
Document make_document(const AlgDescriptor& a);

std::string print(const Diagram& d);
std::string print(const DirectedGraph& g);
std::string print(const Ultragraph& g);
std::string print(const ZeroOneMatrix& a);
std::string print(const AlgDescriptor& a);

Diagram parse_diagram(const std::string& text);

}  // namespace bratteli
