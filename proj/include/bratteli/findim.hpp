#pragma once

#include "bratteli/diagram.hpp"
#include "bratteli/presentation.hpp"
#include "bratteli/realize.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bratteli {

/// Direct sum of full matrix algebras M_{dims[i]}.
struct FinDimShape {
  std::vector<std::string> ids;
  std::vector<BigInt> dims;
  bool unital = true;

  std::size_t size() const { return dims.size(); }
  BigInt total() const;
};

struct FinDimTower {
  std::vector<FinDimShape> shapes;
  /// inclusions[n] is the multiplicity matrix of shapes[n] into shapes[n+1].
  std::vector<MultMatrix> inclusions;
};

struct Amalgamation {
  FinDimShape a;
  MultMatrix incl_b;
  MultMatrix incl_c;
};

/// Algebra generated by B and C when each B summand meets C in one minimal
/// projection of rank q(v, w) inside C^w.
Amalgamation amalgamate(const FinDimShape& b, const FinDimShape& c, const MultMatrix& q);

/// Recovers the tower of the first `depth` levels from an ultragraph whose
/// vertices are labelled by `origin`.  Multiplicities are read off the ranges.
FinDimTower simulate_direct_limit(const Ultragraph& g, const OriginMap& origin, int depth);
FinDimTower simulate_direct_limit(const RealizedUltragraph& g, int depth);

Diagram tower_to_diagram(const FinDimTower& t, const std::string& name = "D");

struct LevelCheck {
  int level = 0;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<LevelCheck> levels;
  std::vector<LevelCheck> checks;
  bool pass() const;
  std::string first_mismatch() const;
  std::string to_text() const;
};

/// Level-by-level comparison of a simulated tower with the first `depth` levels of d.
VerificationReport compare_tower(const Diagram& d, const FinDimTower& t, int depth);

VerificationReport verify_roundtrip(const Diagram& d, int depth);
VerificationReport verify_roundtrip(const Diagram& d, int depth, const InjectionTable& k);
/// Round trip through the expanded graph: adjacency matrix, dual graph and
/// back to an ultragraph before simulating.  Needs strict growth.
VerificationReport verify_row_finite(const Diagram& d, int depth);

struct NumericOptions {
  std::size_t cap = 64;
  /// Conjugate everything by a random unitary drawn from this seed.
  std::optional<std::uint64_t> seed;
};

struct NumericReport {
  long total_dim = 0;
  long units = 0;
  long pairs = 0;
  double max_deviation = 0;
  double unit_deviation = 0;
  long rank = 0;
  long expected_rank = 0;
  bool pass(double tol = 1e-12) const;
};

NumericReport numeric_matrix_units(const FinDimShape& b, const FinDimShape& c, const MultMatrix& q,
                                   NumericOptions opt = {});

struct ChainResult {
  Tri found = Tri::unknown;
  std::vector<std::string> chain;
};

/// Distinct vertices v_1..v_n with v_{k+1} in r(e_{v_k}).
ChainResult find_mn_chain(const Ultragraph& g, int n);

}  // namespace bratteli
