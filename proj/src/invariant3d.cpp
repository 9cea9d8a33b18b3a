#include "pachner/invariant3d.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace pachner {

namespace {

std::set<int> inner_vertex_classes(const Triangulation& t) {
  std::set<int> inner;
  const auto& classes = t.simplices(0);
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (!classes[i].boundary) inner.insert(static_cast<int>(i));
  return inner;
}

std::map<int, std::set<int>> star_table(const Triangulation& t, const OrderlyMapping& m) {
  std::map<int, std::set<int>> stars;
  for (const auto& [v, r] : m.assignment) {
    (void)r;
    const auto cells = star_cells(t, v);
    stars[v] = std::set<int>(cells.begin(), cells.end());
  }
  return stars;
}

}  // namespace

std::vector<int> star_cells(const Triangulation& t, int vertex_class) {
  const SubSimplex& s = t.simplices(0).at(static_cast<std::size_t>(vertex_class));
  std::set<int> ids;
  for (const auto& member : s.members)
    ids.insert(t.cells()[static_cast<std::size_t>(member.first)].id);
  return {ids.begin(), ids.end()};
}

bool is_orderly(const Triangulation& t, const OrderlyMapping& m) {
  const std::set<int> inner = inner_vertex_classes(t);
  if (m.assignment.size() != inner.size()) return false;
  const auto stars = star_table(t, m);
  std::set<int> used;
  for (const auto& [v, r] : m.assignment) {
    if (!inner.count(v)) return false;
    if (!used.insert(r).second) return false;
    if (!stars.at(v).count(r)) return false;
  }
  // Cycle search over the precedence digraph: v before w when the cell
  // assigned to v lies in the star of w.
  std::map<int, int> colour;
  std::function<bool(int)> has_cycle = [&](int v) {
    colour[v] = 1;
    const int r = m.assignment.at(v);
    for (const auto& [w, star] : stars) {
      if (w == v || !star.count(r)) continue;
      if (colour[w] == 1) return true;
      if (colour[w] == 0 && has_cycle(w)) return true;
    }
    colour[v] = 2;
    return false;
  };
  for (const auto& [v, r] : m.assignment) {
    (void)r;
    if (colour[v] == 0 && has_cycle(v)) return false;
  }
  return true;
}

OrderlyMapping construct_orderly(const Triangulation& t, const std::set<int>& avoid) {
  auto restrict_to = [&](const std::set<int>& ids) {
    std::vector<Cell> cells;
    for (const Cell& c : t.cells())
      if (ids.count(c.id)) cells.push_back(c);
    std::vector<Gluing> gluings;
    for (const Gluing& g : t.gluings())
      if (ids.count(g.cell_a) && ids.count(g.cell_b)) gluings.push_back(g);
    return Triangulation(t.dimension(), std::move(cells), std::move(gluings));
  };
  // Inner vertex classes of the shrinking complex, named by the classes of
  // the full one so assignments survive the peeling.
  auto inner_in_original_names = [&](const Triangulation& cur) {
    std::set<int> result;
    for (const SubSimplex& s : cur.simplices(0)) {
      if (s.boundary) continue;
      const auto& member = s.members.front();
      result.insert(
          t.simplex_class(cur.cells()[static_cast<std::size_t>(member.first)].id, member.second));
    }
    return result;
  };

  OrderlyMapping m;
  std::set<int> live;
  for (const Cell& c : t.cells()) live.insert(c.id);
  Triangulation current = restrict_to(live);
  std::set<int> inner = inner_in_original_names(current);
  while (!inner.empty()) {
    std::set<int> candidates;
    for (const auto& facet : current.boundary_facets()) candidates.insert(facet.first);
    bool stripped = false;
    for (int id : candidates) {
      if (avoid.count(id)) continue;
      std::set<int> next_live = live;
      next_live.erase(id);
      Triangulation next = restrict_to(next_live);
      std::set<int> next_inner = inner_in_original_names(next);
      std::vector<int> released;
      for (int v : inner)
        if (!next_inner.count(v)) released.push_back(v);
      // A strip releasing two vertices at once cannot be recorded injectively.
      if (released.size() > 1) continue;
      if (released.size() == 1) m.assignment[released.front()] = id;
      live = std::move(next_live);
      current = std::move(next);
      inner = std::move(next_inner);
      stripped = true;
      break;
    }
    if (!stripped)
      throw std::runtime_error("peeling stalled: no strippable cell with a boundary facet");
  }
  return m;
}

std::vector<int> reachable_targets(const Triangulation& t, const OrderlyMapping& m,
                                   int vertex_class) {
  if (!m.assignment.count(vertex_class))
    throw std::invalid_argument("vertex is not in the mapping");
  const auto stars = star_table(t, m);
  // Strict predecessors: reverse reachability over the precedence digraph.
  std::set<int> preceding;
  std::vector<int> frontier = {vertex_class};
  while (!frontier.empty()) {
    const int w = frontier.back();
    frontier.pop_back();
    for (const auto& [v, r] : m.assignment) {
      if (v == w || v == vertex_class || preceding.count(v)) continue;
      if (stars.at(w).count(r)) {
        preceding.insert(v);
        frontier.push_back(v);
      }
    }
  }
  std::set<int> excluded;
  for (int v : preceding) excluded.insert(stars.at(v).begin(), stars.at(v).end());
  std::vector<int> result;
  for (int c : star_cells(t, vertex_class))
    if (!excluded.count(c)) result.push_back(c);
  return result;
}

OrderlyMapping elementary_move(const Triangulation& t, const OrderlyMapping& m, int vertex_class,
                               int cell_id) {
  const auto targets = reachable_targets(t, m, vertex_class);
  if (std::find(targets.begin(), targets.end(), cell_id) == targets.end())
    throw std::invalid_argument("target cell is not reachable for this vertex");
  OrderlyMapping moved = m;
  moved.assignment[vertex_class] = cell_id;
  return moved;
}

QuadraticFormData quadratic_form_data(const Triangulation& t, const ZetaAssignment& z,
                                      const Rational& alpha) {
  const ChainBasis3 basis = chain_basis(t);
  if (!basis.inner_vertices.empty())
    throw std::invalid_argument("quadratic form needs a complex without inner vertices");
  const std::size_t nb = 2 * t.cells().size();
  const std::size_t na = static_cast<std::size_t>(basis.inner_face_count);
  QuadraticFormData data;
  data.b_count = static_cast<int>(nb);
  data.prefactor = chain_prefactor(t, z);
  data.form = zero_matrix(nb + na, nb + na);
  const Mat f3 = face_to_tetra(t, z);
  for (std::size_t row = 0; row < nb; ++row)
    for (std::size_t col = 0; col < na; ++col) {
      const Rational& c = f3(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
      if (c == 0) continue;
      data.form(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(nb + col)) = c;
      data.form(static_cast<Eigen::Index>(nb + col), static_cast<Eigen::Index>(row)) = -c;
    }
  for (std::size_t ci = 0; ci < t.cells().size(); ++ci) {
    const Cell& cell = t.cells()[ci];
    if (cell.epsilon == 0) throw std::invalid_argument("complex must be oriented");
    // The cell deformation reads c b2 b1, so the ascending-pair entry is -c.
    const Rational c =
        -Rational(cell.epsilon) * alpha * z.diff(cell.vertices[2], cell.vertices[3]);
    data.form(static_cast<Eigen::Index>(2 * ci), static_cast<Eigen::Index>(2 * ci + 1)) = c;
    data.form(static_cast<Eigen::Index>(2 * ci + 1), static_cast<Eigen::Index>(2 * ci)) = -c;
  }
  return data;
}

GrassmannElement invariant_G(const Triangulation& t, const ZetaAssignment& z,
                             const OrderlyMapping& m, const ChainGenerators& g,
                             const Rational& alpha) {
  if (!is_orderly(t, m)) throw std::invalid_argument("mapping is not orderly");
  const ChainBasis3 basis = chain_basis(t);
  std::vector<GrassmannElement> factors;
  // The weights go in front of the cell exponentials; those are even, so the
  // product is the same element either way, and leading with the single
  // monomials keeps the progressive integration small.
  // Face weights first, then cell weights, each in ascending vertex order.
  std::set<int> used_faces;
  for (const auto& [v, cell_id] : m.assignment) {
    const FirstOrderOperator d = vertex_face_operator(t, z, g, v);
    const auto faces = cell_face_classes(t, cell_id);
    std::set<int> cell_face_gens;
    for (int fc : faces) cell_face_gens.insert(g.face_gen[static_cast<std::size_t>(fc)]);
    int pick = -1;
    Rational coef;
    for (const auto& [gen, c] : d.terms) {
      if (!cell_face_gens.count(gen) || used_faces.count(gen)) continue;
      pick = gen;
      coef = c;
      break;
    }
    if (pick < 0) throw std::runtime_error("no usable face weight in the assigned cell");
    used_faces.insert(pick);
    factors.push_back(GrassmannElement::generator(g.reg, pick) * (1 / coef));
  }
  for (const auto& [v, cell_id] : m.assignment) {
    const FirstOrderOperator d = vertex_tetra_operator(t, z, g, v);
    const int ci = t.cell_index(cell_id);
    int pick = -1;
    Rational coef;
    for (int which : {0, 1}) {
      const int target = g.cell_gen[static_cast<std::size_t>(ci)][static_cast<std::size_t>(which)];
      for (const auto& [gen, c] : d.terms)
        if (gen == target) {
          pick = gen;
          coef = c;
          break;
        }
      if (pick >= 0) break;
    }
    if (pick < 0) throw std::runtime_error("no usable cell weight in the assigned cell");
    factors.push_back(GrassmannElement::generator(g.reg, pick) * (1 / coef));
  }
  // One exponential factor per cell: its two rows of the face map plus the
  // deformation term.
  const Mat f3 = face_to_tetra(t, z);
  for (std::size_t ci = 0; ci < t.cells().size(); ++ci) {
    const Cell& cell = t.cells()[ci];
    if (cell.epsilon == 0) throw std::invalid_argument("complex must be oriented");
    GrassmannElement expo = GrassmannElement::zero(g.reg);
    for (int which = 0; which < 2; ++which) {
      const int b = g.cell_gen[ci][static_cast<std::size_t>(which)];
      const auto row = static_cast<Eigen::Index>(2 * ci + static_cast<std::size_t>(which));
      for (Eigen::Index col = 0; col < f3.cols(); ++col) {
        const Rational& c = f3(row, col);
        if (c == 0) continue;
        const int a = g.face_gen[static_cast<std::size_t>(
            basis.faces[static_cast<std::size_t>(col)])];
        expo += c * GrassmannElement::generator(g.reg, b) * GrassmannElement::generator(g.reg, a);
      }
    }
    const Rational c = Rational(cell.epsilon) * alpha * z.diff(cell.vertices[2], cell.vertices[3]);
    if (c != 0)
      expo += c * GrassmannElement::generator(g.reg, g.cell_gen[ci][1]) *
              GrassmannElement::generator(g.reg, g.cell_gen[ci][0]);
    factors.push_back(exp(expo));
  }
  std::vector<int> measures;
  for (const auto& pair : g.cell_gen) {
    measures.push_back(pair[0]);
    measures.push_back(pair[1]);
  }
  for (int c = 0; c < basis.inner_face_count; ++c)
    measures.push_back(
        g.face_gen[static_cast<std::size_t>(basis.faces[static_cast<std::size_t>(c)])]);
  return chain_prefactor(t, z) * integrate_factor_product(factors, measures);
}

Rational invariant_G_pfaffian(const Triangulation& t, const ZetaAssignment& z,
                              const Rational& alpha) {
  const QuadraticFormData data = quadratic_form_data(t, z, alpha);
  const Eigen::Index n = data.form.rows();
  if (n % 2 != 0) return 0;
  // Integrating the Gaussian against ascending measures costs the sign of
  // reversing the top monomial, (-1)^(n(n-1)/2).
  const Rational sign = (n / 2) % 2 == 0 ? 1 : -1;
  return data.prefactor * sign * pfaffian(data.form);
}

Rational lens_table(int p, int q, int n, const ZetaAssignment& z) {
  const Triangulation cut = excise_chain_and_double(build_lens(p, q), n);
  // The reference tables take the cell block of the quadratic form with
  // coefficient epsilon * zeta_{r3 r4} as is, which is alpha = 1 here.
  Rational value = invariant_G_pfaffian(cut, z, 1);
  return value < 0 ? Rational(-value) : value;
}

}  // namespace pachner
