#pragma once

#include "pachner/rational.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pachner {

// A monomial is a set of generator indices in canonical ascending order,
// stored as a bitmask. Bit i set = generator i present.
using Monomial = std::uint64_t;

inline int monomial_degree(Monomial m) { return std::popcount(m); }

// Generators are anticommuting and square to zero. At most 64 per registry.
class GeneratorRegistry {
 public:
  int add(const std::string& name);
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
  bool has(const std::string& name) const { return index_.count(name) != 0; }
  int index(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
};

using RegistryPtr = std::shared_ptr<GeneratorRegistry>;

inline RegistryPtr make_registry() { return std::make_shared<GeneratorRegistry>(); }

// Element of the exterior algebra over the rationals: finite sum of
// coefficient * monomial. Zero coefficients are never stored.
class GrassmannElement {
 public:
  GrassmannElement() = default;
  explicit GrassmannElement(RegistryPtr reg) : reg_(std::move(reg)) {}

  static GrassmannElement zero(RegistryPtr reg) { return GrassmannElement(std::move(reg)); }
  static GrassmannElement scalar(RegistryPtr reg, const Rational& c);
  static GrassmannElement generator(RegistryPtr reg, int index);
  static GrassmannElement monomial(RegistryPtr reg, Monomial m, const Rational& c);

  const RegistryPtr& registry() const { return reg_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Coefficient of the canonical ascending-order monomial m.
  Rational coefficient(Monomial m) const;
  // Degree-k homogeneous part.
  GrassmannElement grade(int k) const;
  int max_degree() const;
  // 0 = even, 1 = odd; nullopt when the element mixes parities.
  std::optional<int> parity() const;

  GrassmannElement& operator+=(const GrassmannElement& o);
  GrassmannElement& operator-=(const GrassmannElement& o);
  GrassmannElement& operator*=(const Rational& c);
  GrassmannElement operator-() const;

  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator*(GrassmannElement a, const Rational& c) { return a *= c; }
  friend GrassmannElement operator*(const Rational& c, GrassmannElement a) { return a *= c; }
  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);
  friend bool operator==(const GrassmannElement& a, const GrassmannElement& b);

  void add_term(Monomial m, const Rational& c);

 private:
  void check_same_registry(const GrassmannElement& o) const;
  RegistryPtr reg_;
  std::map<Monomial, Rational> terms_;
};

// exp via the terminating Taylor series. Requires an even element with zero
// scalar part, so the series stops after at most 32 steps.
GrassmannElement exp(const GrassmannElement& x);

// Left derivative: bring the generator to the front, strike it out.
GrassmannElement left_derivative(const GrassmannElement& x, int gen);
// Right derivative = Berezin integral in the single generator:
// integral of a dа is 1, integral of 1 da is 0, with the scaling rule
// acting from the left for factors free of the generator.
GrassmannElement right_derivative(const GrassmannElement& x, int gen);

// Iterated Berezin integral; the innermost integral is the LAST generator
// listed, matching the convention that the double integral of a*b over
// db da with list [a, b] equals 1.
GrassmannElement berezin_integrate(const GrassmannElement& x, const std::vector<int>& gens);

// Iterated Berezin integral written as a product of measures left to right,
// with the LEFTMOST measure innermost (applied first).
GrassmannElement integrate_measures(const GrassmannElement& x, const std::vector<int>& measures);

// First-order differential operator: sum of coefficient * left-derivative.
struct FirstOrderOperator {
  RegistryPtr reg;
  std::vector<std::pair<int, Rational>> terms;  // (generator, coefficient)

  void add(int gen, const Rational& c) { terms.emplace_back(gen, c); }
};

GrassmannElement apply_operator(const FirstOrderOperator& d, const GrassmannElement& x);
// Product d1 d2 ... dk acting as d1(d2(...(dk(x)))).
GrassmannElement apply_operator_product(const std::vector<FirstOrderOperator>& ds,
                                        const GrassmannElement& x);

// Finds a monomial f with (d1 d2 ... dk) f = 1. Each factor contributes one
// generator, chosen as the lexicographically first usable one; the result is
// scaled by the inverse of the actual value so the postcondition holds by
// construction. Throws when no choice works.
GrassmannElement invert_operator_product_on_one(const std::vector<FirstOrderOperator>& ds);
// Same, but with the generator picks imposed (one per factor, distinct).
GrassmannElement invert_operator_product_on_one(const std::vector<FirstOrderOperator>& ds,
                                                const std::vector<int>& picks);

// Integral of a product of parity-homogeneous factors against a measure list
// (leftmost innermost). Equivalent to multiplying everything out first, but
// integrates each variable as soon as the remaining factors no longer
// contain it, which keeps intermediate elements small.
GrassmannElement integrate_factor_product(const std::vector<GrassmannElement>& factors,
                                          const std::vector<int>& measures);

std::string to_string(const GrassmannElement& x);

}  // namespace pachner
