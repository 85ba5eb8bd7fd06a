#pragma once

#include "bratteli/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bratteli {

struct Vertex {
  std::string id;
  BigInt dim;
};

struct Level {
  std::vector<Vertex> vertices;
  std::size_t size() const { return vertices.size(); }
};

/// The last `period` stored transitions repeat forever.  Levels are 1-based:
/// stored levels `from` .. `from + period` form one full period and
/// `from + period` is the last stored level.
struct PeriodicTail {
  int from = 1;
  int period = 1;
  /// Ids used to name generated vertices, one list per phase.
  std::vector<std::vector<std::string>> base_ids;
};

/// A (truncated) Bratteli diagram.  edges[n] maps level n+1 to level n+2
/// (0-based storage, 1-based level numbers in the public API).
struct Diagram {
  std::string name = "D";
  std::vector<Level> levels;
  std::vector<MultMatrix> edges;
  std::optional<PeriodicTail> tail;

  int depth() const { return static_cast<int>(levels.size()); }
  const Level& level(int n) const { return levels.at(n - 1); }
  /// Transition matrix from level n to level n+1.
  const MultMatrix& matrix(int n) const { return edges.at(n - 1); }
  DimVector dims(int n) const;
  std::vector<std::string> ids(int n) const;

  void add_level(Level lvl);
  void set_matrix(int n, MultMatrix m);
};

bool operator==(const Diagram& a, const Diagram& b);

/// Tail over stored levels from..from+period; generated ids reuse the ids of
/// one period with any "@level" suffix removed.
PeriodicTail make_tail(const Diagram& d, int from, int period);

struct Issue {
  int level = 0;
  std::string vertex;
  std::string message;
};

struct ValidationReport {
  std::vector<Issue> issues;
  std::vector<std::string> notes;
  bool valid() const { return issues.empty(); }
};

ValidationReport validate_diagram(const Diagram& d);

/// Throws PreconditionError listing the first issue when d is invalid.
void require_valid(const Diagram& d);

/// Extra dimension at each vertex beyond what flows in, for the transition
/// into level n+1.
DimVector surplus(const Diagram& d, int n);

/// Extends a tailed diagram to `depth` stored levels, re-anchoring the tail.
/// Explicit diagrams are returned unchanged when depth <= stored depth.
Diagram extend(const Diagram& d, int depth);

/// First `depth` levels, no tail.
Diagram truncate(const Diagram& d, int depth);

/// Product of transition matrices from level a to level b (a <= b).
MultMatrix path_matrix(const Diagram& d, int a, int b);

Diagram telescope(const Diagram& d, const std::vector<int>& keep);

/// Saturated hereditary subset of a truncation; member[n-1][i] for vertex i of level n.
struct HereditarySet {
  std::vector<std::vector<bool>> member;
  std::size_t count() const;
  std::vector<std::string> vertex_ids(const Diagram& d) const;
};

bool is_hereditary(const Diagram& d, const HereditarySet& h);
bool is_saturated(const Diagram& d, const HereditarySet& h);

/// Complement of h; levels emptied by h are removed.
Diagram quotient_diagram(const Diagram& d, const HereditarySet& h);

struct HereditaryEntry {
  HereditarySet set;
  Diagram quotient;
};

std::vector<HereditaryEntry> enumerate_hereditary_sets(const Diagram& d, int depth,
                                                       std::size_t limit = 1u << 16);

/// The hereditary set whose complement is the ancestor closure of `keep_last`
/// (vertex indices at the last level of the first `depth` levels).
HereditarySet complement_of_ancestors(const Diagram& d, int depth,
                                      const std::vector<int>& keep_last);

struct Certificate {
  HereditarySet set;
  int depth = 0;
  std::vector<std::string> chain;
  std::string note;
};

struct TriResult {
  Tri value = Tri::unknown;
  std::optional<Certificate> certificate;
  std::string reason;
};

struct QuotientProperties {
  TriResult has_C;
  TriResult has_findim;
  TriResult has_unital;
};

/// Window used when searching explicit levels for a quotient certificate.
struct QuotientOptions {
  int window = 1;
};

QuotientProperties check_quotient_properties(const Diagram& d, int depth,
                                             QuotientOptions opt = {});

/// Certificate searches on explicit levels; these are what "yes" means for a truncation.
std::optional<Certificate> exhibits_C(const Diagram& d, int window = 1);
std::optional<Certificate> exhibits_findim(const Diagram& d, int window = 1);
std::optional<Certificate> exhibits_unital(const Diagram& d, int window = 1);

/// Exact answers for tailed diagrams, computed on the period graph.
struct TailAnalysis {
  bool has_C = false;
  bool has_findim = false;
  bool has_unital = false;
  int period_nodes = 0;
};
TailAnalysis analyze_tail(const Diagram& d);

/// Vertex satisfies d_v > sum of incoming source dimensions (or is a source).
bool strict_at(const Diagram& d, int n, int i);
/// Either strict or some source has at least two edges into it.
bool findim_condition_at(const Diagram& d, int n, int i);

Diagram trim_dimension_one(const Diagram& d);
Diagram normalize_fd(const Diagram& d, int max_depth);
Diagram normalize_unital(const Diagram& d, int max_depth);

/// Greedy telescoping used by both normalizations.  Returns the kept levels;
/// an empty result means no gap out of the first level could be closed.
enum class GapRule { findim, strict };
std::vector<int> greedy_telescoping(const Diagram& d, GapRule rule,
                                    std::vector<std::string>* stuck = nullptr);

}  // namespace bratteli
