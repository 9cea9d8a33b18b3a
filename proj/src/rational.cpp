#include "pachner/rational.hpp"

#include <set>

namespace pachner {

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
      throw std::invalid_argument("bad rational literal: " + s);
  }
  mpq_class r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

ZetaAssignment::ZetaAssignment(const std::vector<Rational>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) set(static_cast<int>(i) + 1, values[i]);
}

void ZetaAssignment::set(int vertex, const Rational& value) {
  // mpq comparison assumes canonical form; callers may hand us a raw num/den.
  Rational v = value;
  v.canonicalize();
  for (const auto& [u, x] : values_) {
    if (u != vertex && x == v)
      throw std::invalid_argument("duplicate zeta value at vertices " + std::to_string(u) +
                                  " and " + std::to_string(vertex));
  }
  values_[vertex] = v;
}

const Rational& ZetaAssignment::at(int vertex) const {
  auto it = values_.find(vertex);
  if (it == values_.end())
    throw std::out_of_range("no zeta value at vertex " + std::to_string(vertex));
  return it->second;
}

Rational ZetaAssignment::diff(int i, int j) const { return at(i) - at(j); }

ZetaAssignment sample_distinct_zetas(int n, std::uint64_t seed) {
  Rng rng(seed);
  ZetaAssignment z;
  std::set<Rational> used;
  for (int v = 1; v <= n; ++v) {
    for (;;) {
      Rational candidate = rat(rng.integer(1 << 20));
      if (used.insert(candidate).second) {
        z.set(v, candidate);
        break;
      }
    }
  }
  return z;
}

}  // namespace pachner
