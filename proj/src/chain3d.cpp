#include "pachner/chain3d.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pachner {

namespace {

// Position bitmask of the face of cell `c` spanning the vertex positions
// other than `omit`.
unsigned face_mask(int dim, int omit) {
  return ((1u << (dim + 1)) - 1) & ~(1u << omit);
}

int require_inner_column(const ChainBasis3& basis, int vertex_class) {
  const int col = basis.vertex_column(vertex_class);
  if (col < 0) throw std::invalid_argument("vertex is not inner");
  return col;
}

}  // namespace

int ChainBasis3::vertex_column(int vertex_class) const {
  auto it = std::find(inner_vertices.begin(), inner_vertices.end(), vertex_class);
  return it == inner_vertices.end() ? -1 : static_cast<int>(it - inner_vertices.begin());
}

int ChainBasis3::face_column(int face_class) const {
  auto it = std::find(faces.begin(), faces.end(), face_class);
  if (it == faces.end()) throw std::out_of_range("unknown face class");
  return static_cast<int>(it - faces.begin());
}

ChainBasis3 chain_basis(const Triangulation& t) {
  if (t.dimension() != 3) throw std::invalid_argument("3d complex required");
  ChainBasis3 basis;
  const auto& vertices = t.simplices(0);
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (!vertices[i].boundary) basis.inner_vertices.push_back(static_cast<int>(i));
  const auto& faces = t.simplices(2);
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (!faces[i].boundary) basis.faces.push_back(static_cast<int>(i));
  basis.inner_face_count = static_cast<int>(basis.faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].boundary) basis.faces.push_back(static_cast<int>(i));
  return basis;
}

Rational face_coordinate_factor(const ZetaAssignment& z, const std::vector<int>& face, int v) {
  if (face.size() != 3) throw std::invalid_argument("face needs three vertices");
  if (v == face[0]) return 1;
  // Unknowns x_v at the two non-leading vertices, given x at the leader = 1:
  //   x_a + x_b = -1,   zeta_a x_a + zeta_b x_b = -zeta_leader.
  const int a = face[1], b = face[2];
  Mat m = zero_matrix(2, 2);
  m(0, 0) = 1;
  m(0, 1) = 1;
  m(1, 0) = z.at(a);
  m(1, 1) = z.at(b);
  const Rational d = det(m);
  if (d == 0) throw std::invalid_argument("coinciding zeta values on a face");
  const Rational rhs0 = -1, rhs1 = -z.at(face[0]);
  if (v == a) return (rhs0 * m(1, 1) - rhs1 * m(0, 1)) / d;
  if (v == b) return (m(0, 0) * rhs1 - m(1, 0) * rhs0) / d;
  throw std::invalid_argument("vertex not on face");
}

std::array<Rational, 2> tetra_coordinate_factors(const ZetaAssignment& z,
                                                 const std::vector<int>& tetra, int v) {
  if (tetra.size() != 4) throw std::invalid_argument("cell needs four vertices");
  if (v == tetra[0]) return {Rational(1), Rational(0)};
  if (v == tetra[1]) return {Rational(0), Rational(1)};
  // Solve for the two trailing coordinates given (y_1, y_2) = basis vectors:
  //   y_c + y_d = -(y_1 + y_2),  zeta_c y_c + zeta_d y_d = -(z1 y_1 + z2 y_2).
  const int c = tetra[2], d = tetra[3];
  const Rational zc = z.at(c), zd = z.at(d);
  const Rational dd = zd - zc;
  if (dd == 0) throw std::invalid_argument("coinciding zeta values on a cell");
  auto solve = [&](const Rational& s0, const Rational& s1) {
    // [1 1; zc zd] [yc; yd] = [s0; s1]
    return std::array<Rational, 2>{(s0 * zd - s1) / dd, (s1 - s0 * zc) / dd};
  };
  const auto from_y1 = solve(-1, -z.at(tetra[0]));
  const auto from_y2 = solve(-1, -z.at(tetra[1]));
  if (v == c) return {from_y1[0], from_y2[0]};
  if (v == d) return {from_y1[1], from_y2[1]};
  throw std::invalid_argument("vertex not in cell");
}

Mat vertex_to_face(const Triangulation& t, const ZetaAssignment& z) {
  const ChainBasis3 basis = chain_basis(t);
  const auto& face_classes = t.simplices(2);
  Mat m = zero_matrix(basis.faces.size(), basis.inner_vertices.size());
  for (std::size_t row = 0; row < basis.faces.size(); ++row) {
    const SubSimplex& s = face_classes[static_cast<std::size_t>(basis.faces[row])];
    const auto& [ci, mask] = s.members.front();
    const Cell& cell = t.cells()[static_cast<std::size_t>(ci)];
    const int i = s.labels[0], j = s.labels[1], k = s.labels[2];
    const Rational cij = 1 / zeta_diff(z, i, j), cik = 1 / zeta_diff(z, i, k);
    struct Entry {
      int label;
      Rational value;
    };
    const Entry entries[3] = {{i, cij - cik}, {j, -cij}, {k, cik}};
    for (const Entry& e : entries) {
      int pos = -1;
      for (int p = 0; p <= 3; ++p)
        if ((mask & (1u << p)) && cell.vertices[static_cast<std::size_t>(p)] == e.label) pos = p;
      const int vclass = t.simplex_class(cell.id, 1u << pos);
      const int col = basis.vertex_column(vclass);
      if (col >= 0) m(static_cast<Eigen::Index>(row), col) += e.value;
    }
  }
  return m;
}

std::array<int, 4> cell_face_classes(const Triangulation& t, int cell_id) {
  return {t.simplex_class(cell_id, face_mask(3, 3)), t.simplex_class(cell_id, face_mask(3, 2)),
          t.simplex_class(cell_id, face_mask(3, 1)), t.simplex_class(cell_id, face_mask(3, 0))};
}

std::array<std::array<Rational, 4>, 2> cell_face_block(const ZetaAssignment& z,
                                                       const std::vector<int>& v) {
  return {{{Rational(1), Rational(-1), Rational(1), Rational(0)},
           {face_coordinate_factor(z, {v[0], v[1], v[2]}, v[1]),
            -face_coordinate_factor(z, {v[0], v[1], v[3]}, v[1]), Rational(0), Rational(-1)}}};
}

Mat face_to_tetra(const Triangulation& t, const ZetaAssignment& z) {
  const ChainBasis3 basis = chain_basis(t);
  Mat m = zero_matrix(2 * t.cells().size(), basis.faces.size());
  for (std::size_t ci = 0; ci < t.cells().size(); ++ci) {
    const Cell& cell = t.cells()[ci];
    const auto face_class = cell_face_classes(t, cell.id);
    const auto block = cell_face_block(z, cell.vertices);
    for (int c = 0; c < 4; ++c) {
      const int col = basis.face_column(face_class[static_cast<std::size_t>(c)]);
      m(static_cast<Eigen::Index>(2 * ci), col) += block[0][static_cast<std::size_t>(c)];
      m(static_cast<Eigen::Index>(2 * ci + 1), col) += block[1][static_cast<std::size_t>(c)];
    }
  }
  return m;
}

Mat tetra_to_vertex(const Triangulation& t, const ZetaAssignment& z) {
  const ChainBasis3 basis = chain_basis(t);
  Mat m = zero_matrix(basis.inner_vertices.size(), 2 * t.cells().size());
  for (std::size_t ci = 0; ci < t.cells().size(); ++ci) {
    const Cell& cell = t.cells()[ci];
    if (cell.epsilon == 0) throw std::invalid_argument("oriented complex required");
    for (int p = 0; p <= 3; ++p) {
      const int vclass = t.simplex_class(cell.id, 1u << p);
      const int row = basis.vertex_column(vclass);
      if (row < 0) continue;
      const auto f =
          tetra_coordinate_factors(z, cell.vertices, cell.vertices[static_cast<std::size_t>(p)]);
      m(row, static_cast<Eigen::Index>(2 * ci)) += Rational(cell.epsilon) * f[0];
      m(row, static_cast<Eigen::Index>(2 * ci + 1)) += Rational(cell.epsilon) * f[1];
    }
  }
  return m;
}

Rational chain_prefactor(const Triangulation& t, const ZetaAssignment& z) {
  Rational numerator = 1, denominator = 1;
  for (const SubSimplex& s : t.simplices(2))
    if (!s.boundary) numerator *= zeta_diff(z, s.labels[1], s.labels[2]);
  for (const SubSimplex& e : t.simplices(1))
    if (!e.boundary) denominator *= zeta_diff(z, e.labels[0], e.labels[1]);
  for (const Cell& c : t.cells()) denominator *= zeta_diff(z, c.vertices[2], c.vertices[3]);
  return numerator / denominator;
}

TorsionContext make_torsion_context(const Triangulation& t, const ZetaAssignment& z) {
  TorsionContext ctx;
  ctx.basis = chain_basis(t);
  ctx.f2 = vertex_to_face(t, z);
  ctx.f3 = face_to_tetra(t, z);
  ctx.f4 = tetra_to_vertex(t, z);
  ctx.f2_rows = lex_first_independent_rows(ctx.f2);
  ctx.f4_cols = lex_first_independent_cols(ctx.f4);
  const int n_inner = static_cast<int>(ctx.basis.inner_vertices.size());
  if (static_cast<int>(ctx.f2_rows.size()) != n_inner ||
      static_cast<int>(ctx.f4_cols.size()) != n_inner)
    return ctx;  // rank deficient: no torsion chain
  std::set<int> used_cols(ctx.f4_cols.begin(), ctx.f4_cols.end());
  for (int r = 0; r < static_cast<int>(ctx.f3.rows()); ++r)
    if (!used_cols.count(r)) ctx.f3_rows.push_back(r);
  std::set<int> used_rows(ctx.f2_rows.begin(), ctx.f2_rows.end());
  for (int c = 0; c < ctx.basis.inner_face_count; ++c)
    if (!used_rows.count(c)) ctx.f3_base_cols.push_back(c);
  ctx.minor_f2 = minor_det(ctx.f2, ctx.f2_rows, [&] {
    std::vector<int> all(ctx.basis.inner_vertices.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return all;
  }());
  ctx.minor_f4 = minor_det(ctx.f4,
                           [&] {
                             std::vector<int> all(ctx.basis.inner_vertices.size());
                             for (std::size_t i = 0; i < all.size(); ++i)
                               all[i] = static_cast<int>(i);
                             return all;
                           }(),
                           ctx.f4_cols);
  ctx.defined = ctx.minor_f2 != 0 && ctx.minor_f4 != 0;
  // Parity relating the measure order (tetra coordinates in storage order,
  // then inner faces in basis order, leftmost innermost) to the ascending
  // row/column order of the minors: striking the inner-face block costs
  // N(N+1)/2 + N*NV, merging the picked rows into the base columns costs
  // one transposition per inverted (base, picked) pair, and extracting the
  // picked tetra coordinates costs their column positions.
  {
    const int n = ctx.basis.inner_face_count;
    long par = static_cast<long>(n) * (n + 1) / 2 + static_cast<long>(n) * n_inner;
    for (int c : ctx.f4_cols) par += c;
    for (int b : ctx.f3_base_cols)
      for (int p : ctx.f2_rows)
        if (b > p) ++par;
    ctx.sign = par % 2 == 0 ? 1 : -1;
  }
  return ctx;
}

int boundary_subset_size(const TorsionContext& ctx) {
  return static_cast<int>(ctx.f3.rows()) - ctx.basis.inner_face_count;
}

std::vector<std::vector<int>> boundary_subsets(const TorsionContext& ctx) {
  const int want = boundary_subset_size(ctx);
  std::vector<int> boundary;
  for (int c = ctx.basis.inner_face_count; c < static_cast<int>(ctx.basis.faces.size()); ++c)
    boundary.push_back(c);
  std::vector<std::vector<int>> out;
  if (want < 0 || want > static_cast<int>(boundary.size())) return out;
  std::vector<int> pick;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (static_cast<int>(pick.size()) == want) {
      out.push_back(pick);
      return;
    }
    for (std::size_t i = from; i < boundary.size(); ++i) {
      pick.push_back(boundary[i]);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::optional<Rational> torsion_tau(const TorsionContext& ctx, const std::vector<int>& C) {
  if (!ctx.defined) return std::nullopt;
  if (static_cast<int>(C.size()) != boundary_subset_size(ctx))
    throw std::invalid_argument("boundary subset has the wrong cardinality");
  std::vector<int> cols = ctx.f3_base_cols;
  for (int c : C) {
    if (c < ctx.basis.inner_face_count || c >= static_cast<int>(ctx.basis.faces.size()))
      throw std::invalid_argument("subset entry is not a boundary face column");
    cols.push_back(c);
  }
  const Rational numerator = ctx.sign * minor_det(ctx.f3, ctx.f3_rows, cols);
  return numerator / (ctx.minor_f2 * ctx.minor_f4);
}

std::optional<Rational> invariant_I0(const TorsionContext& ctx, const Triangulation& t,
                                     const ZetaAssignment& z, const std::vector<int>& C) {
  auto tau = torsion_tau(ctx, C);
  if (!tau) return std::nullopt;
  return chain_prefactor(t, z) * *tau;
}

namespace {

int reuse_or_add(GeneratorRegistry& reg, const std::string& name) {
  if (reg.has(name)) return reg.index(name);
  return reg.add(name);
}

}  // namespace

ChainGenerators chain_generators(const Triangulation& t) {
  return chain_generators(t, make_registry());
}

ChainGenerators chain_generators(const Triangulation& t, RegistryPtr reg) {
  ChainGenerators g;
  g.reg = std::move(reg);
  const ChainBasis3 basis = chain_basis(t);
  g.face_gen.assign(t.simplices(2).size(), -1);
  // Boundary classes claim bare names first, so two complexes with the same
  // boundary agree on its generator names even when a label set also occurs
  // on an inner face. Registration order stays the basis order.
  std::map<std::string, int> seen;
  std::map<int, std::string> name_of;
  for (int pass = 0; pass < 2; ++pass) {
    for (int face_class : basis.faces) {
      const SubSimplex& s = t.simplices(2)[static_cast<std::size_t>(face_class)];
      if ((pass == 0) != s.boundary) continue;
      std::string name = "a";
      for (int v : s.labels) name += "_" + std::to_string(v);
      const int copy = seen[name]++;
      if (copy > 0) name += "#" + std::to_string(copy);
      name_of[face_class] = name;
    }
  }
  for (int face_class : basis.faces)
    g.face_gen[static_cast<std::size_t>(face_class)] =
        reuse_or_add(*g.reg, name_of.at(face_class));
  for (const Cell& c : t.cells())
    g.cell_gen.push_back({reuse_or_add(*g.reg, "b1@" + std::to_string(c.id)),
                          reuse_or_add(*g.reg, "b2@" + std::to_string(c.id))});
  return g;
}

GrassmannElement chain_exponent(const Triangulation& t, const ZetaAssignment& z,
                                const ChainGenerators& g) {
  const ChainBasis3 basis = chain_basis(t);
  const Mat f3 = face_to_tetra(t, z);
  GrassmannElement expo = GrassmannElement::zero(g.reg);
  for (std::size_t ci = 0; ci < t.cells().size(); ++ci) {
    for (int which = 0; which < 2; ++which) {
      const int b = g.cell_gen[ci][static_cast<std::size_t>(which)];
      for (int col = 0; col < static_cast<int>(f3.cols()); ++col) {
        const Rational& c = f3(static_cast<Eigen::Index>(2 * ci + static_cast<std::size_t>(which)),
                               col);
        if (c == 0) continue;
        const int a = g.face_gen[static_cast<std::size_t>(basis.faces[static_cast<std::size_t>(col)])];
        expo += c * GrassmannElement::generator(g.reg, b) * GrassmannElement::generator(g.reg, a);
      }
    }
  }
  return expo;
}

FirstOrderOperator vertex_face_operator(const Triangulation& t, const ZetaAssignment& z,
                                        const ChainGenerators& g, int vertex_class) {
  const ChainBasis3 basis = chain_basis(t);
  const Mat f2 = vertex_to_face(t, z);
  const int col = require_inner_column(basis, vertex_class);
  FirstOrderOperator d;
  d.reg = g.reg;
  for (int row = 0; row < static_cast<int>(f2.rows()); ++row)
    if (f2(row, col) != 0)
      d.add(g.face_gen[static_cast<std::size_t>(basis.faces[static_cast<std::size_t>(row)])],
            f2(row, col));
  return d;
}

FirstOrderOperator vertex_tetra_operator(const Triangulation& t, const ZetaAssignment& z,
                                         const ChainGenerators& g, int vertex_class) {
  const ChainBasis3 basis = chain_basis(t);
  const Mat f4 = tetra_to_vertex(t, z);
  const int row = require_inner_column(basis, vertex_class);
  FirstOrderOperator d;
  d.reg = g.reg;
  for (int col = 0; col < static_cast<int>(f4.cols()); ++col)
    if (f4(row, col) != 0)
      d.add(g.cell_gen[static_cast<std::size_t>(col / 2)][static_cast<std::size_t>(col % 2)],
            f4(row, col));
  return d;
}

Monomial subset_monomial(const ChainBasis3& basis, const ChainGenerators& g,
                         const std::vector<int>& C) {
  Monomial m = 0;
  for (int col : C)
    m |= Monomial(1)
         << g.face_gen[static_cast<std::size_t>(basis.faces[static_cast<std::size_t>(col)])];
  return m;
}

GrassmannElement generating_function_T(const Triangulation& t, const ZetaAssignment& z,
                                       const ChainGenerators& g) {
  const TorsionContext ctx = make_torsion_context(t, z);
  if (!ctx.defined && !ctx.basis.inner_vertices.empty())
    throw std::runtime_error("operator product has no inverse: no torsion chain");
  // One exponential per cell instead of exp(chain_exponent): the factors are
  // even, so the product is the same element, but the factor list lets the
  // integration retire variables early and intermediate sizes stay bounded.
  std::vector<GrassmannElement> factors;
  const Mat f3 = ctx.f3;
  for (std::size_t ci = 0; ci < t.cells().size(); ++ci) {
    GrassmannElement expo = GrassmannElement::zero(g.reg);
    for (int which = 0; which < 2; ++which) {
      const int b = g.cell_gen[ci][static_cast<std::size_t>(which)];
      for (int col = 0; col < static_cast<int>(f3.cols()); ++col) {
        const Rational& c =
            f3(static_cast<Eigen::Index>(2 * ci + static_cast<std::size_t>(which)), col);
        if (c == 0) continue;
        const int a = g.face_gen[static_cast<std::size_t>(
            ctx.basis.faces[static_cast<std::size_t>(col)])];
        expo += c * GrassmannElement::generator(g.reg, b) * GrassmannElement::generator(g.reg, a);
      }
    }
    factors.push_back(exp(expo));
  }
  if (!ctx.basis.inner_vertices.empty()) {
    std::vector<FirstOrderOperator> ops_a, ops_b;
    for (int vclass : ctx.basis.inner_vertices) {
      ops_a.push_back(vertex_face_operator(t, z, g, vclass));
      ops_b.push_back(vertex_tetra_operator(t, z, g, vclass));
    }
    std::vector<int> picks_a, picks_b;
    for (int row : ctx.f2_rows)
      picks_a.push_back(
          g.face_gen[static_cast<std::size_t>(ctx.basis.faces[static_cast<std::size_t>(row)])]);
    for (int col : ctx.f4_cols)
      picks_b.push_back(
          g.cell_gen[static_cast<std::size_t>(col / 2)][static_cast<std::size_t>(col % 2)]);
    factors.push_back(invert_operator_product_on_one(ops_a, picks_a));
    factors.push_back(invert_operator_product_on_one(ops_b, picks_b));
  }
  std::vector<int> measures;
  for (const auto& pair : g.cell_gen) {
    measures.push_back(pair[0]);
    measures.push_back(pair[1]);
  }
  for (int c = 0; c < ctx.basis.inner_face_count; ++c)
    measures.push_back(
        g.face_gen[static_cast<std::size_t>(ctx.basis.faces[static_cast<std::size_t>(c)])]);
  return integrate_factor_product(factors, measures);
}

GrassmannElement generating_function_F(const Triangulation& t, const ZetaAssignment& z,
                                       const ChainGenerators& g) {
  return chain_prefactor(t, z) * generating_function_T(t, z, g);
}

}  // namespace pachner
