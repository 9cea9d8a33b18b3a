#include "pachner/rational.hpp"

#include <set>
#include <stdexcept>

#include "doctest.h"

using namespace pachner;

TEST_CASE("rat canonicalizes and rejects zero denominators") {
  CHECK(rat(2, 4) == rat(1, 2));
  CHECK(rat(-2, -4) == rat(1, 2));
  CHECK(rat(3, -6) == rat(-1, 2));
  CHECK(rat(0, 5) == 0);
  CHECK_THROWS_AS(rat(1, 0), std::invalid_argument);
}

TEST_CASE("parse_rational accepts integers and fractions") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-7/2") == rat(-7, 2));
  CHECK(parse_rational("6/4") == rat(3, 2));
  CHECK(to_string(parse_rational("-10/4")) == "-5/2");
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("splitmix64 sequence is the published one") {
  Rng rng(0);
  CHECK(rng.next() == 0xe220a8397b1dcdafULL);
  CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(rng.next() == 0x06c45d188009454fULL);
}

TEST_CASE("rng helpers stay inside their ranges and are deterministic") {
  Rng a(42), b(42);
  for (int i = 0; i < 200; ++i) {
    const long v = a.integer(9);
    CHECK(v >= -9);
    CHECK(v <= 9);
    CHECK(v == b.integer(9));
  }
  Rng c(7);
  for (int i = 0; i < 200; ++i) CHECK(c.below(13) < 13);
}

TEST_CASE("zeta assignment enforces pairwise distinct values") {
  ZetaAssignment z;
  z.set(1, rat(1, 2));
  z.set(2, rat(3, 4));
  CHECK_THROWS_AS(z.set(3, rat(2, 4)), std::invalid_argument);
  // Overwriting a vertex with its own value is allowed.
  z.set(2, rat(3, 4));
  CHECK(z.size() == 2);
  CHECK(z.diff(1, 2) == rat(-1, 4));
  CHECK(z.diff(2, 1) == rat(1, 4));
  CHECK_THROWS_AS(z.at(9), std::out_of_range);
  CHECK(!z.has(9));
  CHECK(z.has(1));
}

TEST_CASE("zeta assignment canonicalizes raw fractions before comparing") {
  ZetaAssignment z;
  Rational raw(2, 4);  // not canonicalized by the mpq constructor
  z.set(1, raw);
  CHECK(z.at(1) == rat(1, 2));
  CHECK_THROWS_AS(z.set(2, rat(1, 2)), std::invalid_argument);
}

TEST_CASE("vector constructor assigns labels 1..n") {
  ZetaAssignment z(std::vector<Rational>{1, 2, 3, 4});
  CHECK(z.size() == 4);
  CHECK(z.at(1) == 1);
  CHECK(z.at(4) == 4);
}

TEST_CASE("sample_distinct_zetas is deterministic and distinct") {
  ZetaAssignment a = sample_distinct_zetas(6, 12345);
  ZetaAssignment b = sample_distinct_zetas(6, 12345);
  ZetaAssignment c = sample_distinct_zetas(6, 54321);
  CHECK(a.size() == 6);
  std::set<Rational> seen;
  bool same_as_c = true;
  for (int v = 1; v <= 6; ++v) {
    CHECK(seen.insert(a.at(v)).second);
    CHECK(a.at(v) == b.at(v));
    if (a.at(v) != c.at(v)) same_as_c = false;
  }
  CHECK(!same_as_c);
}
