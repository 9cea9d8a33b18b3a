#include "pachner/grassmann.hpp"

#include <algorithm>
#include <sstream>

namespace pachner {

namespace {

inline Monomial bit(int g) { return Monomial{1} << g; }

inline Monomial mask_below(int g) { return bit(g) - 1; }

inline Monomial mask_above(int g) {
  return g >= 63 ? Monomial{0} : ~((Monomial{1} << (g + 1)) - 1);
}

// Parity of the number of pairs (i in m1, j in m2) with i > j, i.e. of the
// transpositions needed to merge two ascending monomials.
inline int merge_sign_parity(Monomial m1, Monomial m2) {
  int parity = 0;
  while (m2 != 0) {
    const int j = std::countr_zero(m2);
    m2 &= m2 - 1;
    parity ^= std::popcount(m1 & mask_above(j)) & 1;
  }
  return parity;
}

}  // namespace

int GeneratorRegistry::add(const std::string& name) {
  if (index_.count(name)) throw std::invalid_argument("duplicate generator name: " + name);
  if (names_.size() >= 64) throw std::length_error("generator registry full (64 max)");
  const int i = static_cast<int>(names_.size());
  names_.push_back(name);
  index_[name] = i;
  return i;
}

int GeneratorRegistry::index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("unknown generator: " + name);
  return it->second;
}

GrassmannElement GrassmannElement::scalar(RegistryPtr reg, const Rational& c) {
  GrassmannElement x(std::move(reg));
  x.add_term(0, c);
  return x;
}

GrassmannElement GrassmannElement::generator(RegistryPtr reg, int index) {
  if (index < 0 || index >= reg->size()) throw std::out_of_range("generator index out of range");
  GrassmannElement x(std::move(reg));
  x.add_term(bit(index), 1);
  return x;
}

GrassmannElement GrassmannElement::monomial(RegistryPtr reg, Monomial m, const Rational& c) {
  GrassmannElement x(std::move(reg));
  x.add_term(m, c);
  return x;
}

Rational GrassmannElement::coefficient(Monomial m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

GrassmannElement GrassmannElement::grade(int k) const {
  GrassmannElement out(reg_);
  for (const auto& [m, c] : terms_)
    if (monomial_degree(m) == k) out.terms_.emplace(m, c);
  return out;
}

int GrassmannElement::max_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
  return d;
}

std::optional<int> GrassmannElement::parity() const {
  if (terms_.empty()) return 0;
  const int p = monomial_degree(terms_.begin()->first) & 1;
  for (const auto& [m, c] : terms_)
    if ((monomial_degree(m) & 1) != p) return std::nullopt;
  return p;
}

void GrassmannElement::check_same_registry(const GrassmannElement& o) const {
  if (reg_ != o.reg_) throw std::invalid_argument("generator registry mismatch");
}

void GrassmannElement::add_term(Monomial m, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o) {
  check_same_registry(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& o) {
  check_same_registry(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

GrassmannElement GrassmannElement::operator-() const {
  GrassmannElement out(reg_);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
  a.check_same_registry(b);
  GrassmannElement out(a.reg_);
  for (const auto& [m1, c1] : a.terms_) {
    for (const auto& [m2, c2] : b.terms_) {
      if ((m1 & m2) != 0) continue;
      Rational c = c1 * c2;
      if (merge_sign_parity(m1, m2)) c = -c;
      out.add_term(m1 | m2, c);
    }
  }
  return out;
}

bool operator==(const GrassmannElement& a, const GrassmannElement& b) {
  a.check_same_registry(b);
  return a.terms_ == b.terms_;
}

GrassmannElement exp(const GrassmannElement& x) {
  auto p = x.parity();
  if (!p || *p != 0) throw std::invalid_argument("exp requires an even element");
  if (x.coefficient(0) != 0) throw std::invalid_argument("exp requires zero scalar part");
  GrassmannElement result = GrassmannElement::scalar(x.registry(), 1);
  GrassmannElement term = result;
  for (long k = 1; !term.is_zero(); ++k) {
    term = term * x;
    term *= rat(1, k);
    result += term;
  }
  return result;
}

GrassmannElement left_derivative(const GrassmannElement& x, int gen) {
  GrassmannElement out(x.registry());
  const Monomial g = bit(gen);
  for (const auto& [m, c] : x.terms()) {
    if ((m & g) == 0) continue;
    const int parity = std::popcount(m & mask_below(gen)) & 1;
    out.add_term(m & ~g, parity ? -c : c);
  }
  return out;
}

GrassmannElement right_derivative(const GrassmannElement& x, int gen) {
  GrassmannElement out(x.registry());
  const Monomial g = bit(gen);
  for (const auto& [m, c] : x.terms()) {
    if ((m & g) == 0) continue;
    const int parity = std::popcount(m & mask_above(gen)) & 1;
    out.add_term(m & ~g, parity ? -c : c);
  }
  return out;
}

GrassmannElement berezin_integrate(const GrassmannElement& x, const std::vector<int>& gens) {
  GrassmannElement out = x;
  for (auto it = gens.rbegin(); it != gens.rend(); ++it) out = right_derivative(out, *it);
  return out;
}

GrassmannElement integrate_measures(const GrassmannElement& x, const std::vector<int>& measures) {
  GrassmannElement out = x;
  for (int g : measures) out = right_derivative(out, g);
  return out;
}

GrassmannElement apply_operator(const FirstOrderOperator& d, const GrassmannElement& x) {
  GrassmannElement out(x.registry());
  for (const auto& [g, c] : d.terms) {
    GrassmannElement part = left_derivative(x, g);
    part *= c;
    out += part;
  }
  return out;
}

GrassmannElement apply_operator_product(const std::vector<FirstOrderOperator>& ds,
                                        const GrassmannElement& x) {
  GrassmannElement out = x;
  for (auto it = ds.rbegin(); it != ds.rend(); ++it) out = apply_operator(*it, out);
  return out;
}

namespace {

// Depth-first search over per-factor generator picks in lexicographic order.
bool search_picks(const std::vector<FirstOrderOperator>& ds, std::size_t at, Monomial used,
                  std::vector<int>& picks, GrassmannElement& result) {
  if (at == ds.size()) {
    Monomial m = 0;
    for (int g : picks) m |= bit(g);
    const RegistryPtr& reg = ds.front().reg;
    GrassmannElement candidate = GrassmannElement::monomial(reg, m, 1);
    GrassmannElement value = apply_operator_product(ds, candidate);
    const Rational v = value.coefficient(0);
    if (v == 0) return false;
    result = GrassmannElement::monomial(reg, m, 1 / v);
    return true;
  }
  std::vector<int> options;
  for (const auto& [g, c] : ds[at].terms)
    if (c != 0 && (used & bit(g)) == 0) options.push_back(g);
  std::sort(options.begin(), options.end());
  options.erase(std::unique(options.begin(), options.end()), options.end());
  for (int g : options) {
    picks.push_back(g);
    if (search_picks(ds, at + 1, used | bit(g), picks, result)) return true;
    picks.pop_back();
  }
  return false;
}

}  // namespace

GrassmannElement invert_operator_product_on_one(const std::vector<FirstOrderOperator>& ds) {
  if (ds.empty()) throw std::invalid_argument("empty operator product");
  std::vector<int> picks;
  GrassmannElement result;
  if (!search_picks(ds, 0, 0, picks, result))
    throw std::runtime_error("operator product has no monomial inverse on 1");
  return result;
}

GrassmannElement invert_operator_product_on_one(const std::vector<FirstOrderOperator>& ds,
                                                const std::vector<int>& picks) {
  if (ds.empty()) throw std::invalid_argument("empty operator product");
  if (picks.size() != ds.size()) throw std::invalid_argument("one pick per factor required");
  Monomial m = 0;
  for (int g : picks) {
    if (m & bit(g)) throw std::invalid_argument("duplicate pick");
    m |= bit(g);
  }
  const RegistryPtr& reg = ds.front().reg;
  GrassmannElement candidate = GrassmannElement::monomial(reg, m, 1);
  const Rational v = apply_operator_product(ds, candidate).coefficient(0);
  if (v == 0) throw std::runtime_error("picks give a singular monomial");
  return GrassmannElement::monomial(reg, m, 1 / v);
}

GrassmannElement integrate_factor_product(const std::vector<GrassmannElement>& factors,
                                          const std::vector<int>& measures) {
  if (factors.empty()) throw std::invalid_argument("no factors");
  const std::size_t n = factors.size();
  std::vector<Monomial> support(n, 0);
  std::vector<int> parity(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = factors[i].parity();
    if (!p) throw std::invalid_argument("factor mixes parities");
    parity[i] = *p;
    for (const auto& [m, c] : factors[i].terms()) support[i] |= m;
  }
  // suffix[i] = combined support / parity of factors i..n-1
  std::vector<Monomial> suffix_support(n + 1, 0);
  std::vector<int> suffix_parity(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) {
    suffix_support[i] = suffix_support[i + 1] | support[i];
    suffix_parity[i] = (suffix_parity[i + 1] + parity[i]) & 1;
  }

  std::vector<bool> done(measures.size(), false);
  int sign = 1;
  GrassmannElement result = GrassmannElement::scalar(factors.front().registry(), 1);
  for (std::size_t j = 0; j < n; ++j) {
    result = result * factors[j];
    for (std::size_t idx = 0; idx < measures.size(); ++idx) {
      if (done[idx]) continue;
      const int g = measures[idx];
      if (suffix_support[j + 1] & bit(g)) continue;
      // Executing this measure now moves it past every still-pending measure
      // printed before it, and past every factor not yet multiplied in.
      int crossings = suffix_parity[j + 1];
      for (std::size_t k = 0; k < idx; ++k)
        if (!done[k]) ++crossings;
      if (crossings & 1) sign = -sign;
      result = right_derivative(result, g);
      done[idx] = true;
    }
  }
  if (sign < 0) result = -result;
  return result;
}

std::string to_string(const GrassmannElement& x) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : x.terms()) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    Monomial rest = m;
    while (rest != 0) {
      const int g = std::countr_zero(rest);
      rest &= rest - 1;
      os << "*" << x.registry()->name(g);
    }
  }
  return os.str();
}

}  // namespace pachner
