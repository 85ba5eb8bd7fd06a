#pragma once

#include <cstdint>
#include <string>

namespace checks {

struct Outcome {
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

/// Telescoping twice equals telescoping once by the composed keep list.
Outcome telescope_associativity(int cases, std::uint64_t seed);
/// Telescoped multiplicities equal walk counts.
Outcome telescope_path_counts(int cases, std::uint64_t seed);
/// Enumerated sets are hereditary and saturated and their quotients are valid diagrams.
Outcome quotient_validity(int cases, std::uint64_t seed);
/// Realizing with different valid injection tables recovers the same diagram.
Outcome injection_invariance(int diagrams, int tables, std::uint64_t seed);
/// print(parse(print(x))) == print(x) and parse(print(x)) == x.
Outcome parser_roundtrip(int cases, std::uint64_t seed);
/// Strict diagrams: row-finite realization has no sinks, infinite emitters or cycles and round-trips.
Outcome row_finite(int cases, std::uint64_t seed);

}  // namespace checks
