#include "pachner/chain4d.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace pachner {

namespace {

std::array<int, 4> omit_vertex(const std::array<int, 5>& u, int pos) {
  std::array<int, 4> r{};
  int at = 0;
  for (int p = 0; p < 5; ++p)
    if (p != pos) r[static_cast<std::size_t>(at++)] = u[static_cast<std::size_t>(p)];
  return r;
}

template <std::size_t N, std::size_t M>
bool contains_all(const std::array<int, N>& big, const std::array<int, M>& small) {
  for (int v : small)
    if (std::find(big.begin(), big.end(), v) == big.end()) return false;
  return true;
}

std::map<std::array<int, 4>, int> tetra_multiplicity(const Cluster4& t) {
  std::map<std::array<int, 4>, int> counts;
  for (const Cell4& c : t.cells)
    for (int pos = 0; pos < 5; ++pos) ++counts[omit_vertex(c.vertices, pos)];
  return counts;
}

// Every sub-simplex of a boundary 3-face is boundary; the rest is inner.
template <std::size_t N>
std::vector<std::array<int, N>> inner_simplices(const Cluster4& t) {
  const std::vector<std::array<int, 4>> boundary = boundary_tetrahedra(t);
  std::set<std::array<int, N>> all;
  for (const Cell4& c : t.cells) {
    const std::array<int, 5>& verts = c.vertices;
    // enumerate N-subsets via sorted selector permutations
    std::array<int, 5> sel{};
    for (int p = 0; p < 5; ++p) sel[static_cast<std::size_t>(p)] = p < static_cast<int>(N) ? 1 : 0;
    std::sort(sel.begin(), sel.end(), std::greater<int>());
    do {
      std::array<int, N> s{};
      int at = 0;
      for (int p = 0; p < 5; ++p)
        if (sel[static_cast<std::size_t>(p)]) s[static_cast<std::size_t>(at++)] = verts[static_cast<std::size_t>(p)];
      all.insert(s);
    } while (std::prev_permutation(sel.begin(), sel.end()));
  }
  std::vector<std::array<int, N>> inner;
  for (const auto& s : all) {
    bool on_boundary = false;
    for (const auto& r : boundary)
      if (contains_all(r, s)) {
        on_boundary = true;
        break;
      }
    if (!on_boundary) inner.push_back(s);
  }
  return inner;
}

int reuse_or_add(GeneratorRegistry& reg, const std::string& name) {
  return reg.has(name) ? reg.index(name) : reg.add(name);
}

std::string tetra_name(char prefix, const std::array<int, 4>& r) {
  std::string name(1, prefix);
  for (int v : r) name += "_" + std::to_string(v);
  return name;
}

void require_no_inner_vertices(const Cluster4& t) {
  if (!inner_vertices_4d(t).empty())
    throw std::invalid_argument("the short complex needs a cluster without inner vertices");
}

MoveCheck finish(GrassmannElement lhs, GrassmannElement rhs) {
  MoveCheck check;
  check.difference = lhs - rhs;
  check.equal = check.difference.is_zero();
  check.lhs = std::move(lhs);
  check.rhs = std::move(rhs);
  return check;
}

// Oriented link contributions of 2-face s: one (simplex labels, zeta of the
// oriented opposite edge) pair per containing 4-simplex. The edge (i, j) is
// oriented so that the permutation (i, j, k, l, m) of the simplex has the
// sign of its epsilon.
std::vector<std::pair<std::array<int, 5>, Rational>> link_terms(const Cluster4& side,
                                                                const ZetaAssignment& z,
                                                                const std::array<int, 3>& s) {
  std::vector<std::pair<std::array<int, 5>, Rational>> terms;
  for (const Cell4& c : side.cells) {
    if (!contains_all(c.vertices, s)) continue;
    std::array<int, 2> rest{};
    int at = 0;
    for (int v : c.vertices)
      if (std::find(s.begin(), s.end(), v) == s.end()) rest[static_cast<std::size_t>(at++)] = v;
    const std::array<int, 5> arrangement = {rest[0], rest[1], s[0], s[1], s[2]};
    int inversions = 0;
    auto position = [&](int v) {
      return static_cast<int>(std::find(c.vertices.begin(), c.vertices.end(), v) - c.vertices.begin());
    };
    for (int a = 0; a < 5; ++a)
      for (int b = a + 1; b < 5; ++b)
        if (position(arrangement[static_cast<std::size_t>(a)]) >
            position(arrangement[static_cast<std::size_t>(b)]))
          ++inversions;
    const int orient = (inversions % 2 == 0 ? 1 : -1) * c.epsilon;
    terms.emplace_back(c.vertices, orient > 0 ? z.diff(rest[0], rest[1]) : z.diff(rest[1], rest[0]));
  }
  return terms;
}

std::set<std::array<int, 3>> all_faces_4d(const Cluster4& t) {
  std::set<std::array<int, 3>> faces;
  for (const Cell4& c : t.cells)
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 4; ++b)
        for (int d = b + 1; d < 5; ++d)
          faces.insert({c.vertices[static_cast<std::size_t>(a)], c.vertices[static_cast<std::size_t>(b)],
                        c.vertices[static_cast<std::size_t>(d)]});
  return faces;
}

// Shared core of the move verifiers: integrate the deformed weights of one
// side against w over its inner tetrahedra, ascending, each pair divided by
// its zeta_{kl}.
GrassmannElement move_side(const Cluster4& side, const ZetaAssignment& z,
                           const ChainGenerators4& g, const AlphaSystem4& alpha,
                           const std::vector<GrassmannElement>& w_factors) {
  std::vector<GrassmannElement> factors;
  for (const Cell4& c : side.cells) factors.push_back(deformed_weight_4d(z, g, c.vertices, alpha));
  for (const GrassmannElement& w : w_factors) factors.push_back(w);
  const std::map<std::array<int, 4>, int> counts = tetra_multiplicity(side);
  std::vector<int> measures;
  Rational denominator(1);
  for (const auto& [r, count] : counts) {
    if (count != 2) continue;
    measures.push_back(g.a_of(r));
    measures.push_back(g.b_of(r));
    denominator *= z.diff(r[2], r[3]);
  }
  return integrate_factor_product(factors, measures) * (1 / denominator);
}

}  // namespace

void validate_cluster(const Cluster4& t) {
  std::set<std::array<int, 5>> seen;
  for (const Cell4& c : t.cells) {
    for (int p = 0; p + 1 < 5; ++p)
      if (c.vertices[static_cast<std::size_t>(p)] >= c.vertices[static_cast<std::size_t>(p + 1)])
        throw std::invalid_argument("cell vertices must be strictly ascending");
    if (c.epsilon != 1 && c.epsilon != -1) throw std::invalid_argument("cell orientation must be +-1");
    if (!seen.insert(c.vertices).second)
      throw std::invalid_argument("duplicate cell label set in a label-glued cluster");
  }
  for (const auto& [r, count] : tetra_multiplicity(t))
    if (count > 2) throw std::invalid_argument("3-face shared by more than two cells");
}

std::vector<std::array<int, 4>> cluster_tetrahedra(const Cluster4& t) {
  std::vector<std::array<int, 4>> out;
  for (const auto& [r, count] : tetra_multiplicity(t)) out.push_back(r);
  return out;
}

std::vector<std::array<int, 4>> boundary_tetrahedra(const Cluster4& t) {
  std::vector<std::array<int, 4>> out;
  for (const auto& [r, count] : tetra_multiplicity(t))
    if (count == 1) out.push_back(r);
  return out;
}

std::vector<std::array<int, 3>> inner_faces_4d(const Cluster4& t) { return inner_simplices<3>(t); }

std::vector<std::array<int, 2>> inner_edges_4d(const Cluster4& t) { return inner_simplices<2>(t); }

std::vector<int> inner_vertices_4d(const Cluster4& t) {
  std::vector<int> out;
  for (const auto& v : inner_simplices<1>(t)) out.push_back(v[0]);
  return out;
}

int ChainBasis4::face_column(const std::array<int, 3>& s) const {
  auto it = std::find(inner_faces.begin(), inner_faces.end(), s);
  return it == inner_faces.end() ? -1 : static_cast<int>(it - inner_faces.begin());
}

int ChainBasis4::tetra_index(const std::array<int, 4>& r) const {
  auto it = std::find(tetrahedra.begin(), tetrahedra.end(), r);
  return it == tetrahedra.end() ? -1 : static_cast<int>(it - tetrahedra.begin());
}

ChainBasis4 chain_basis_4d(const Cluster4& t) {
  validate_cluster(t);
  ChainBasis4 basis;
  basis.inner_faces = inner_faces_4d(t);
  basis.tetrahedra = cluster_tetrahedra(t);
  basis.cell_count = static_cast<int>(t.cells.size());
  return basis;
}

Mat build_f3_4d(const Cluster4& t, const ZetaAssignment& z) {
  require_no_inner_vertices(t);
  const ChainBasis4 basis = chain_basis_4d(t);
  Mat m = zero_matrix(2 * static_cast<Eigen::Index>(basis.tetrahedra.size()),
                      static_cast<Eigen::Index>(basis.inner_faces.size()));
  for (std::size_t ri = 0; ri < basis.tetrahedra.size(); ++ri) {
    const std::array<int, 4>& r = basis.tetrahedra[ri];
    const auto block = cell_face_block(z, {r[0], r[1], r[2], r[3]});
    const std::array<std::array<int, 3>, 4> faces = {
        {{r[0], r[1], r[2]}, {r[0], r[1], r[3]}, {r[0], r[2], r[3]}, {r[1], r[2], r[3]}}};
    for (std::size_t c = 0; c < 4; ++c) {
      const int col = basis.face_column(faces[c]);
      if (col < 0) continue;
      m(static_cast<Eigen::Index>(2 * ri), col) += block[0][c];
      m(static_cast<Eigen::Index>(2 * ri + 1), col) += block[1][c];
    }
  }
  return m;
}

Mat build_f4_4d(const Cluster4& t, const ZetaAssignment& z) {
  require_no_inner_vertices(t);
  const ChainBasis4 basis = chain_basis_4d(t);
  Mat m = zero_matrix(3 * static_cast<Eigen::Index>(t.cells.size()),
                      2 * static_cast<Eigen::Index>(basis.tetrahedra.size()));
  for (std::size_t ci = 0; ci < t.cells.size(); ++ci) {
    const std::array<int, 5>& u = t.cells[ci].vertices;
    for (int row = 0; row < 3; ++row) {
      const int v = u[static_cast<std::size_t>(row)];
      for (int pos = 0; pos < 5; ++pos) {
        const std::array<int, 4> r = omit_vertex(u, pos);
        if (std::find(r.begin(), r.end(), v) == r.end()) continue;
        const Rational sign = pos % 2 == 0 ? 1 : -1;
        const auto f = tetra_coordinate_factors(z, {r[0], r[1], r[2], r[3]}, v);
        const Eigen::Index col = 2 * static_cast<Eigen::Index>(basis.tetra_index(r));
        m(static_cast<Eigen::Index>(3 * ci + static_cast<std::size_t>(row)), col) += sign * f[0];
        m(static_cast<Eigen::Index>(3 * ci + static_cast<std::size_t>(row)), col + 1) += sign * f[1];
      }
    }
  }
  return m;
}

std::pair<Mat, Mat> gauge_transform(const ChainBasis4& basis, const Mat& f3, const Mat& f4,
                                    const ZetaAssignment& z) {
  Mat g3 = f3, g4 = f4;
  for (std::size_t ri = 0; ri < basis.tetrahedra.size(); ++ri) {
    const std::array<int, 4>& r = basis.tetrahedra[ri];
    const Rational zkl = z.diff(r[2], r[3]);
    for (int which = 0; which < 2; ++which) {
      const Eigen::Index line = static_cast<Eigen::Index>(2 * ri) + which;
      g4.col(line) *= zkl;
      g3.row(line) *= 1 / zkl;
    }
  }
  for (std::size_t si = 0; si < basis.inner_faces.size(); ++si) {
    const std::array<int, 3>& s = basis.inner_faces[si];
    g3.col(static_cast<Eigen::Index>(si)) *= z.diff(s[1], s[2]);
  }
  return {g3, g4};
}

ChainGenerators4 chain_generators_4d(const Cluster4& t) {
  return chain_generators_4d(t, make_registry());
}

ChainGenerators4 chain_generators_4d(const Cluster4& t, RegistryPtr reg) {
  ChainGenerators4 g;
  g.reg = std::move(reg);
  for (const std::array<int, 4>& r : cluster_tetrahedra(t))
    g.tetra_gen[r] = {reuse_or_add(*g.reg, tetra_name('a', r)),
                      reuse_or_add(*g.reg, tetra_name('b', r))};
  g.e_gen = reuse_or_add(*g.reg, "e");
  return g;
}

GrassmannElement weight_W_4d(const ZetaAssignment& z, const ChainGenerators4& g,
                             const std::array<int, 5>& u) {
  for (int p = 0; p + 1 < 5; ++p)
    if (u[static_cast<std::size_t>(p)] >= u[static_cast<std::size_t>(p + 1)])
      throw std::invalid_argument("simplex vertices must be strictly ascending");
  GrassmannElement w = GrassmannElement::scalar(g.reg, 1 / z.diff(u[3], u[4]));
  for (int row = 0; row < 3; ++row) {
    const int v = u[static_cast<std::size_t>(row)];
    GrassmannElement form = GrassmannElement::zero(g.reg);
    for (int pos = 0; pos < 5; ++pos) {
      const std::array<int, 4> r = omit_vertex(u, pos);
      if (std::find(r.begin(), r.end(), v) == r.end()) continue;
      const Rational scale = (pos % 2 == 0 ? 1 : -1) * z.diff(r[2], r[3]);
      const auto f = tetra_coordinate_factors(z, {r[0], r[1], r[2], r[3]}, v);
      const auto& ab = g.tetra_gen.at(r);
      if (f[0] != 0) form += scale * f[0] * GrassmannElement::generator(g.reg, ab[0]);
      if (f[1] != 0) form += scale * f[1] * GrassmannElement::generator(g.reg, ab[1]);
    }
    w = w * form;
  }
  return w;
}

FirstOrderOperator face_operator_4d(const Cluster4& t, const ZetaAssignment& z,
                                    const ChainGenerators4& g, const std::array<int, 3>& s) {
  FirstOrderOperator d;
  d.reg = g.reg;
  for (const std::array<int, 4>& r : cluster_tetrahedra(t)) {
    if (!contains_all(r, s)) continue;
    int pos = 0;
    while (std::find(s.begin(), s.end(), r[static_cast<std::size_t>(pos)]) != s.end()) ++pos;
    const auto& ab = g.tetra_gen.at(r);
    const Rational zkl = z.diff(r[2], r[3]);
    switch (pos) {
      case 0:
        d.add(ab[1], -1);
        break;
      case 1:
        d.add(ab[0], 1);
        break;
      case 2:
        d.add(ab[0], -z.diff(r[1], r[3]) / zkl);
        d.add(ab[1], z.diff(r[0], r[3]) / zkl);
        break;
      default:
        d.add(ab[0], z.diff(r[1], r[2]) / zkl);
        d.add(ab[1], -z.diff(r[0], r[2]) / zkl);
        break;
    }
  }
  return d;
}

void AlphaSystem4::set(std::array<int, 5> labels, const Rational& value) {
  std::sort(labels.begin(), labels.end());
  values_[labels] = value;
}

bool AlphaSystem4::has(std::array<int, 5> labels) const {
  std::sort(labels.begin(), labels.end());
  return values_.count(labels) != 0;
}

Rational AlphaSystem4::at(std::array<int, 5> labels) const {
  std::sort(labels.begin(), labels.end());
  auto it = values_.find(labels);
  if (it == values_.end()) throw std::out_of_range("no deformation value for this simplex");
  return it->second;
}

GrassmannElement deformed_weight_4d(const ZetaAssignment& z, const ChainGenerators4& g,
                                    const std::array<int, 5>& cell, const AlphaSystem4& alpha) {
  return weight_W_4d(z, g, cell) +
         alpha.at(cell) * GrassmannElement::generator(g.reg, g.e_gen);
}

MoveConfig4 move_config_33() {
  MoveConfig4 cfg;
  cfg.lhs.cells = {{{1, 2, 3, 4, 5}, 1}, {{1, 2, 3, 4, 6}, -1}, {{1, 2, 3, 5, 6}, 1}};
  cfg.rhs.cells = {{{1, 2, 4, 5, 6}, 1}, {{1, 3, 4, 5, 6}, -1}, {{2, 3, 4, 5, 6}, 1}};
  return cfg;
}

MoveConfig4 move_config_24() {
  MoveConfig4 cfg;
  cfg.lhs.cells = {{{1, 2, 3, 4, 5}, -1}, {{1, 2, 3, 4, 6}, 1}};
  cfg.rhs.cells = {
      {{1, 2, 3, 5, 6}, 1}, {{1, 2, 4, 5, 6}, -1}, {{1, 3, 4, 5, 6}, 1}, {{2, 3, 4, 5, 6}, -1}};
  return cfg;
}

std::vector<std::array<int, 5>> move_alpha_keys_4d(const MoveConfig4& cfg) {
  std::set<std::array<int, 5>> keys;
  for (const Cell4& c : cfg.lhs.cells) keys.insert(c.vertices);
  for (const Cell4& c : cfg.rhs.cells) keys.insert(c.vertices);
  return {keys.begin(), keys.end()};
}

Rational alpha_link_sum_4d(const Cluster4& side, const ZetaAssignment& z,
                           const AlphaSystem4& alpha, const std::array<int, 3>& s) {
  Rational sum(0);
  for (const auto& [cell, value] : link_terms(side, z, s)) sum += value * alpha.at(cell);
  return sum;
}

bool alpha_consistent_4d(const MoveConfig4& cfg, const ZetaAssignment& z,
                         const AlphaSystem4& alpha) {
  std::set<std::array<int, 3>> faces = all_faces_4d(cfg.lhs);
  const std::set<std::array<int, 3>> rhs_faces = all_faces_4d(cfg.rhs);
  faces.insert(rhs_faces.begin(), rhs_faces.end());
  for (const auto& s : faces)
    if (alpha_link_sum_4d(cfg.lhs, z, alpha, s) != alpha_link_sum_4d(cfg.rhs, z, alpha, s))
      return false;
  return true;
}

bool alpha_balanced_4d(const Cluster4& t, const ZetaAssignment& z, const AlphaSystem4& alpha) {
  for (const auto& s : inner_faces_4d(t))
    if (alpha_link_sum_4d(t, z, alpha, s) != 0) return false;
  return true;
}

AlphaSystem4 random_consistent_alpha_4d(const MoveConfig4& cfg, const ZetaAssignment& z, Rng& rng) {
  const std::vector<std::array<int, 5>> keys = move_alpha_keys_4d(cfg);
  std::map<std::array<int, 5>, int> col;
  for (std::size_t i = 0; i < keys.size(); ++i) col[keys[i]] = static_cast<int>(i);

  std::set<std::array<int, 3>> faces = all_faces_4d(cfg.lhs);
  const std::set<std::array<int, 3>> rhs_faces = all_faces_4d(cfg.rhs);
  faces.insert(rhs_faces.begin(), rhs_faces.end());

  Mat m = zero_matrix(static_cast<Eigen::Index>(faces.size()), static_cast<Eigen::Index>(keys.size()));
  Eigen::Index row = 0;
  for (const auto& s : faces) {
    for (const auto& [cell, value] : link_terms(cfg.lhs, z, s)) m(row, col.at(cell)) += value;
    for (const auto& [cell, value] : link_terms(cfg.rhs, z, s)) m(row, col.at(cell)) -= value;
    ++row;
  }

  const std::vector<Vec> basis = nullspace_basis(m);
  Vec v = Vec::Constant(static_cast<Eigen::Index>(keys.size()), Rational(0));
  for (const Vec& b : basis) {
    const Rational c(static_cast<long>(rng.below(19)) - 9);
    v += b * c;
  }
  AlphaSystem4 a;
  for (std::size_t i = 0; i < keys.size(); ++i) a.set(keys[i], v(static_cast<Eigen::Index>(i)));
  return a;
}

AlphaSystem4 uniform_alpha_4d(const MoveConfig4& cfg, const Rational& value) {
  AlphaSystem4 a;
  for (const std::array<int, 5>& key : move_alpha_keys_4d(cfg)) a.set(key, value);
  return a;
}

AlphaSystem4 zeta_alpha_33(const ZetaAssignment& z) {
  AlphaSystem4 a;
  for (int missing = 1; missing <= 6; ++missing) {
    std::array<int, 5> key{};
    int at = 0;
    for (int v = 1; v <= 6; ++v)
      if (v != missing) key[static_cast<std::size_t>(at++)] = v;
    a.set(key, z.at(missing));
  }
  return a;
}

MoveCheck evaluate_move_33(const ZetaAssignment& z, const AlphaSystem4& alpha) {
  const MoveConfig4 cfg = move_config_33();
  RegistryPtr reg = make_registry();
  const ChainGenerators4 gl = chain_generators_4d(cfg.lhs, reg);
  const ChainGenerators4 gr = chain_generators_4d(cfg.rhs, reg);
  const GrassmannElement wl = invert_operator_product_on_one({face_operator_4d(cfg.lhs, z, gl, {1, 2, 3})});
  const GrassmannElement wr = invert_operator_product_on_one({face_operator_4d(cfg.rhs, z, gr, {4, 5, 6})});
  return finish(move_side(cfg.lhs, z, gl, alpha, {wl}), move_side(cfg.rhs, z, gr, alpha, {wr}));
}

MoveCheck verify_move_33(const ZetaAssignment& z, const AlphaSystem4& alpha) {
  if (!alpha_consistent_4d(move_config_33(), z, alpha))
    throw std::invalid_argument("inconsistent deformation system for the 3-3 move");
  return evaluate_move_33(z, alpha);
}

MoveCheck evaluate_move_24(const ZetaAssignment& z, const AlphaSystem4& alpha) {
  const MoveConfig4 cfg = move_config_24();
  RegistryPtr reg = make_registry();
  const ChainGenerators4 gl = chain_generators_4d(cfg.lhs, reg);
  const ChainGenerators4 gr = chain_generators_4d(cfg.rhs, reg);
  std::vector<FirstOrderOperator> ds;
  for (int v = 1; v <= 4; ++v) ds.push_back(face_operator_4d(cfg.rhs, z, gr, {v, 5, 6}));
  const GrassmannElement wr = invert_operator_product_on_one(ds);
  const GrassmannElement lhs = move_side(cfg.lhs, z, gl, alpha, {});
  const GrassmannElement rhs = move_side(cfg.rhs, z, gr, alpha, {wr}) * -z.diff(5, 6);
  return finish(lhs, rhs);
}

MoveCheck verify_move_24(const ZetaAssignment& z, const AlphaSystem4& alpha) {
  if (!alpha_consistent_4d(move_config_24(), z, alpha))
    throw std::invalid_argument("inconsistent deformation system for the 2-4 move");
  return evaluate_move_24(z, alpha);
}

GrassmannElement conjectured_invariant_4d(const Cluster4& t, const ZetaAssignment& z,
                                          const ChainGenerators4& g, const AlphaSystem4& alpha) {
  validate_cluster(t);
  Rational prefactor(1);
  for (const std::array<int, 2>& edge : inner_edges_4d(t)) prefactor *= z.diff(edge[0], edge[1]);
  std::vector<FirstOrderOperator> ds;
  for (const std::array<int, 3>& s : inner_faces_4d(t)) ds.push_back(face_operator_4d(t, z, g, s));
  std::vector<GrassmannElement> w_factors;
  if (!ds.empty()) w_factors.push_back(invert_operator_product_on_one(ds));
  return move_side(t, z, g, alpha, w_factors) * prefactor;
}

}  // namespace pachner
