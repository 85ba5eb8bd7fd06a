#pragma once

#include "bratteli/diagram.hpp"
#include "bratteli/presentation.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bratteli {

enum class AlgClass { graph, exel_laca, ultragraph, rfns };
enum class Membership { member, non_member, unknown };

const char* to_string(AlgClass c);
const char* to_string(Membership m);
const std::vector<AlgClass>& all_classes();

/// A presentation known to exist for the algebra.  Kind is graph, ultragraph
/// or matrix (an Exel-Laca matrix).
struct Witness {
  std::string kind;
  std::string name;
  bool row_finite = false;
  bool no_sinks = false;
  bool operator==(const Witness&) const = default;
};

/// Properties of a finite graph; truncations with a frontier assert nothing.
Witness witness_of(const DirectedGraph& g);
Witness witness_of(const Ultragraph& g);
Witness witness_of(const ZeroOneMatrix& a);

/// Flag names accepted in descriptors, in canonical order.
const std::vector<std::string>& descriptor_flags();
bool is_descriptor_flag(const std::string& name);

struct AlgDescriptor {
  std::string name = "A";
  std::map<std::string, Tri> flags;
  std::vector<AlgDescriptor> summands;
  /// When present (one entry), this algebra is M_2 of the unitization of that one.
  std::vector<AlgDescriptor> m2_unitization_of;
  std::vector<Witness> witnesses;

  Tri flag(const std::string& f) const;
  void set(const std::string& f, Tri v);
  bool operator==(const AlgDescriptor&) const = default;
};

struct ClassVerdict {
  std::map<AlgClass, Membership> status;
  std::map<AlgClass, std::vector<std::string>> citations;
  /// Flags after closure, with the rules that support each known value.
  std::map<std::string, Tri> flags;
  std::map<std::string, std::vector<std::string>> flag_citations;

  Membership operator[](AlgClass c) const { return status.at(c); }
  std::string to_text() const;
};

struct ClassifyOptions {
  /// Visit rules in a shuffled order; the result must not change.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Rule ids with their short labels, e.g. "R6" -> "C-quotient obstruction".
const std::map<std::string, std::string>& rule_labels();

ClassVerdict classify(const AlgDescriptor& a, ClassifyOptions opt = {});

AlgDescriptor combine_direct_sum(const std::vector<AlgDescriptor>& parts);

AlgDescriptor derive_descriptor(const Diagram& d, int depth);

}  // namespace bratteli
