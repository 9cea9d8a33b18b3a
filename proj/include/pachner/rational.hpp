#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace Eigen {

// Exact arithmetic: no epsilon, no dummy precision.
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

}  // namespace Eigen

namespace pachner {

// mpq_class keeps values canonical (lowest terms, positive denominator)
// through arithmetic; constructors from raw num/den must canonicalize.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "3", "-7/2", whitespace-free.
Rational parse_rational(const std::string& s);

std::string to_string(const Rational& r);

// Deterministic 64-bit generator (splitmix64). Used instead of std::mt19937
// plus distributions so that sequences are identical across platforms.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform in [0, bound). Modulo bias is irrelevant for test sampling.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
  // Uniform integer in [-range, range].
  long integer(long range) {
    return static_cast<long>(below(2 * static_cast<std::uint64_t>(range) + 1)) - range;
  }
};

// Vertex label -> coordinate value. All values pairwise distinct.
class ZetaAssignment {
 public:
  ZetaAssignment() = default;
  // values[i] becomes the value at vertex label i+1.
  explicit ZetaAssignment(const std::vector<Rational>& values);

  void set(int vertex, const Rational& value);
  bool has(int vertex) const { return values_.count(vertex) != 0; }
  const Rational& at(int vertex) const;
  // zeta_i - zeta_j; nonzero whenever i != j by the distinctness invariant.
  Rational diff(int i, int j) const;
  std::size_t size() const { return values_.size(); }
  const std::map<int, Rational>& values() const { return values_; }

 private:
  std::map<int, Rational> values_;
};

inline Rational zeta_diff(const ZetaAssignment& z, int i, int j) { return z.diff(i, j); }

// n distinct values at vertices 1..n, drawn from a range wide enough that a
// nonzero rational function of modest degree evaluates to zero only with
// negligible probability. Deterministic in the seed.
ZetaAssignment sample_distinct_zetas(int n, std::uint64_t seed);

}  // namespace pachner
