#pragma once

#include "bratteli/classify.hpp"
#include "bratteli/diagram.hpp"
#include "bratteli/presentation.hpp"

#include <random>

namespace bratteli {

enum class DiagramFamily {
  /// d_v >= 1 and d_v >= incoming total.
  generic,
  /// d_v >= 2; off level 1 either strict growth or a doubled edge.
  realizable,
  /// d_v >= 2 and d_v > incoming total.
  strict,
};

struct RandomDiagramOptions {
  DiagramFamily family = DiagramFamily::realizable;
  int min_depth = 2;
  int max_depth = 6;
  int max_width = 4;
  long max_dim = 200;
  int max_mult = 3;
  /// Upper bound on the surplus added to the incoming total.
  long max_extra = 6;
};

Diagram random_diagram(std::mt19937_64& rng, const RandomDiagramOptions& opt = {});

/// Diagram with a periodic tail; the dimension bound applies to stored levels only.
Diagram random_tailed_diagram(std::mt19937_64& rng, const RandomDiagramOptions& opt = {});

/// Finite acyclic graph with possibly parallel edges and sinks.
DirectedGraph random_acyclic_graph(std::mt19937_64& rng, int max_vertices = 8);

/// Descriptor with random flags, witnesses and up to `depth` levels of summands.
AlgDescriptor random_descriptor(std::mt19937_64& rng, int depth = 1);

}  // namespace bratteli
