#include "checks.hpp"

#include <doctest.h>

namespace {

void require_clean(const checks::Outcome& o, int cases) {
  CHECK(o.cases >= cases);
  CHECK_MESSAGE(o.ok(), o.failures << " failures; first:\n" << o.first_failure);
}

}  // namespace

TEST_CASE("telescoping is associative") { require_clean(checks::telescope_associativity(250, 101), 250); }

TEST_CASE("telescoped multiplicities count paths") { require_clean(checks::telescope_path_counts(200, 102), 200); }

TEST_CASE("quotients of hereditary saturated sets are diagrams") {
  require_clean(checks::quotient_validity(200, 103), 200);
}

TEST_CASE("recovered diagram does not depend on the injection table") {
  require_clean(checks::injection_invariance(200, 3, 104), 200);
}

TEST_CASE("printing and parsing round-trip") { require_clean(checks::parser_roundtrip(300, 105), 300); }

TEST_CASE("row-finite realization") { require_clean(checks::row_finite(200, 106), 200); }
