#include "pachner/weights3d.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "pachner/linalg.hpp"

namespace pachner {

namespace {

std::array<int, 4> sorted(std::array<int, 4> labels) {
  std::sort(labels.begin(), labels.end());
  return labels;
}

std::array<int, 4> cell_labels(const Cell& c) {
  return sorted({c.vertices[0], c.vertices[1], c.vertices[2], c.vertices[3]});
}

}  // namespace

void AlphaSystem3::set(std::array<int, 4> labels, const Rational& value) {
  values_[sorted(labels)] = value;
}

bool AlphaSystem3::has(std::array<int, 4> labels) const {
  return values_.count(sorted(labels)) > 0;
}

Rational AlphaSystem3::at(std::array<int, 4> labels) const {
  return values_.at(sorted(labels));
}

MoveConfig3 move_config_23() {
  Triangulation lhs(3,
                    {{0, {1, 2, 3, 4}, 1}, {1, {1, 2, 3, 5}, -1}},
                    {{0, 3, 1, 3}});
  Triangulation rhs(3,
                    {{2, {1, 2, 4, 5}, -1}, {3, {1, 3, 4, 5}, 1}, {4, {2, 3, 4, 5}, -1}},
                    {{2, 1, 3, 1}, {2, 0, 4, 1}, {3, 0, 4, 0}});
  return {std::move(lhs), std::move(rhs)};
}

MoveConfig3 move_config_14() {
  Triangulation lhs(3, {{0, {1, 2, 3, 4}, -1}}, {});
  Triangulation rhs(3,
                    {{1, {1, 2, 3, 5}, -1},
                     {2, {1, 2, 4, 5}, 1},
                     {3, {1, 3, 4, 5}, -1},
                     {4, {2, 3, 4, 5}, 1}},
                    {{1, 2, 2, 2},
                     {1, 1, 3, 2},
                     {1, 0, 4, 2},
                     {2, 1, 3, 1},
                     {2, 0, 4, 1},
                     {3, 0, 4, 0}});
  return {std::move(lhs), std::move(rhs)};
}

std::vector<std::array<int, 4>> move_alpha_keys() {
  return {{1, 2, 3, 4}, {1, 2, 3, 5}, {1, 2, 4, 5}, {1, 3, 4, 5}, {2, 3, 4, 5}};
}

GrassmannElement phi(const Triangulation& t, const ZetaAssignment& z,
                     const ChainGenerators& g, std::size_t ci) {
  const Cell& cell = t.cells()[ci];
  const auto face_class = cell_face_classes(t, cell.id);
  const auto block = cell_face_block(z, cell.vertices);
  GrassmannElement x = GrassmannElement::zero(g.reg);
  for (std::size_t m = 0; m < 2; ++m) {
    const GrassmannElement b = GrassmannElement::generator(g.reg, g.cell_gen[ci][m]);
    for (std::size_t c = 0; c < 4; ++c) {
      if (block[m][c] == Rational(0)) continue;
      const int a = g.face_gen[static_cast<std::size_t>(face_class[c])];
      x += b * GrassmannElement::generator(g.reg, a) * block[m][c];
    }
  }
  return x;
}

GrassmannElement weight_W(const Triangulation& t, const ZetaAssignment& z,
                          const ChainGenerators& g, std::size_t ci) {
  return exp(phi(t, z, g, ci));
}

namespace {

// The two linear forms in the face generators whose product is the
// b-integrated weight.
std::array<GrassmannElement, 2> weight_forms(const ZetaAssignment& z,
                                             const std::vector<int>& vertices,
                                             const std::array<int, 4>& face_gens,
                                             const RegistryPtr& reg) {
  const auto block = cell_face_block(z, vertices);
  std::array<GrassmannElement, 2> forms = {GrassmannElement::zero(reg),
                                           GrassmannElement::zero(reg)};
  for (std::size_t m = 0; m < 2; ++m)
    for (std::size_t c = 0; c < 4; ++c)
      forms[m] += GrassmannElement::generator(reg, face_gens[c]) * block[m][c];
  return forms;
}

std::array<int, 4> cell_face_gens(const Triangulation& t, const ChainGenerators& g, int cell_id) {
  const auto face_class = cell_face_classes(t, cell_id);
  return {g.face_gen[static_cast<std::size_t>(face_class[0])],
          g.face_gen[static_cast<std::size_t>(face_class[1])],
          g.face_gen[static_cast<std::size_t>(face_class[2])],
          g.face_gen[static_cast<std::size_t>(face_class[3])]};
}

}  // namespace

GrassmannElement integrated_weight(const Triangulation& t, const ZetaAssignment& z,
                                   const ChainGenerators& g, std::size_t ci) {
  const Cell& cell = t.cells()[ci];
  const auto forms = weight_forms(z, cell.vertices, cell_face_gens(t, g, cell.id), g.reg);
  return forms[0] * forms[1];
}

GrassmannElement deformed_weight(const Triangulation& t, const ZetaAssignment& z,
                                 const ChainGenerators& g, std::size_t ci,
                                 const AlphaSystem3& alpha) {
  const Cell& cell = t.cells()[ci];
  if (cell.epsilon == 0) throw std::invalid_argument("deformed_weight: unoriented cell");
  const Rational c = Rational(cell.epsilon) * z.diff(cell.vertices[2], cell.vertices[3]) *
                     alpha.at(cell_labels(cell));
  const GrassmannElement b1 = GrassmannElement::generator(g.reg, g.cell_gen[ci][0]);
  const GrassmannElement b2 = GrassmannElement::generator(g.reg, g.cell_gen[ci][1]);
  return exp(phi(t, z, g, ci) + b2 * b1 * c);
}

GrassmannElement deformed_integrated_weight(const Triangulation& t, const ZetaAssignment& z,
                                            const ChainGenerators& g, std::size_t ci,
                                            const AlphaSystem3& alpha) {
  const Cell& cell = t.cells()[ci];
  if (cell.epsilon == 0)
    throw std::invalid_argument("deformed_integrated_weight: unoriented cell");
  const Rational c = Rational(cell.epsilon) * z.diff(cell.vertices[2], cell.vertices[3]) *
                     alpha.at(cell_labels(cell));
  return integrated_weight(t, z, g, ci) + GrassmannElement::scalar(g.reg, c);
}

GrassmannElement deformed_integrated_weight_deg4_labeled(
    const ZetaAssignment& z, const std::array<int, 4>& labels,
    const std::array<int, 4>& face_gens, RegistryPtr reg, int eps) {
  const std::vector<int> v(labels.begin(), labels.end());
  const auto forms = weight_forms(z, v, face_gens, reg);
  // Coefficient in the gauge of the bilinear form above: product of the
  // differences from the first vertex to the other three.
  Rational c = Rational(eps) * z.diff(labels[0], labels[1]) * z.diff(labels[0], labels[2]) *
               z.diff(labels[0], labels[3]);
  GrassmannElement tail = GrassmannElement::scalar(reg, c);
  for (int fg : face_gens) tail = tail * GrassmannElement::generator(reg, fg);
  return forms[0] * forms[1] + tail;
}

GrassmannElement deformed_integrated_weight_deg4(const Triangulation& t, const ZetaAssignment& z,
                                                 const ChainGenerators& g, std::size_t ci) {
  const Cell& cell = t.cells()[ci];
  if (cell.epsilon == 0)
    throw std::invalid_argument("deformed_integrated_weight_deg4: unoriented cell");
  return deformed_integrated_weight_deg4_labeled(z, cell_labels(cell),
                                                 cell_face_gens(t, g, cell.id), g.reg,
                                                 cell.epsilon);
}

AlphaSystem3 solve_alpha_move(const ZetaAssignment& z, const Rational& alpha_1234,
                              const Rational& alpha_1235) {
  AlphaSystem3 a;
  a.set({1, 2, 3, 4}, alpha_1234);
  a.set({1, 2, 3, 5}, alpha_1235);
  const Rational z45 = z.diff(4, 5);
  a.set({1, 2, 4, 5}, (z.diff(3, 5) * alpha_1235 - z.diff(3, 4) * alpha_1234) / z45);
  a.set({1, 3, 4, 5}, (z.diff(2, 5) * alpha_1235 - z.diff(2, 4) * alpha_1234) / z45);
  a.set({2, 3, 4, 5}, (z.diff(1, 5) * alpha_1235 - z.diff(1, 4) * alpha_1234) / z45);
  return a;
}

Rational alpha_link_sum(const Triangulation& t, const ZetaAssignment& z,
                        const AlphaSystem3& alpha, int k, int l) {
  Rational sum(0);
  for (int cls : t.classes_with_labels(1, {std::min(k, l), std::max(k, l)})) {
    const CodimTwoLink link = link_around_class(t, cls);
    for (const LinkStep& step : link.steps)
      sum += z.diff(step.from, step.to) * alpha.at(cell_labels(t.cell_by_id(step.cell_id)));
  }
  return sum;
}

namespace {

std::set<std::pair<int, int>> edge_label_pairs(const Triangulation& t) {
  std::set<std::pair<int, int>> pairs;
  for (const SubSimplex& e : t.simplices(1)) pairs.insert({e.labels[0], e.labels[1]});
  return pairs;
}

}  // namespace

bool alpha_consistent(const MoveConfig3& cfg, const ZetaAssignment& z,
                      const AlphaSystem3& alpha) {
  std::set<std::pair<int, int>> pairs = edge_label_pairs(cfg.lhs);
  std::set<std::pair<int, int>> rhs_pairs = edge_label_pairs(cfg.rhs);
  pairs.insert(rhs_pairs.begin(), rhs_pairs.end());
  for (const auto& [k, l] : pairs)
    if (alpha_link_sum(cfg.lhs, z, alpha, k, l) != alpha_link_sum(cfg.rhs, z, alpha, k, l))
      return false;
  return true;
}

AlphaSystem3 random_consistent_alpha(const MoveConfig3& cfg, const ZetaAssignment& z, Rng& rng) {
  const std::vector<std::array<int, 4>> keys = move_alpha_keys();
  std::map<std::array<int, 4>, int> col;
  for (std::size_t i = 0; i < keys.size(); ++i) col[keys[i]] = static_cast<int>(i);

  std::set<std::pair<int, int>> pairs = edge_label_pairs(cfg.lhs);
  std::set<std::pair<int, int>> rhs_pairs = edge_label_pairs(cfg.rhs);
  pairs.insert(rhs_pairs.begin(), rhs_pairs.end());

  Mat m = zero_matrix(static_cast<Eigen::Index>(pairs.size()), static_cast<Eigen::Index>(keys.size()));
  Eigen::Index row = 0;
  for (const auto& [k, l] : pairs) {
    const std::array<const Triangulation*, 2> sides = {&cfg.lhs, &cfg.rhs};
    for (int side = 0; side < 2; ++side) {
      const Triangulation& t = *sides[static_cast<std::size_t>(side)];
      const Rational sign(side == 0 ? 1 : -1);
      for (int cls : t.classes_with_labels(1, {k, l})) {
        const CodimTwoLink link = link_around_class(t, cls);
        for (const LinkStep& step : link.steps)
          m(row, col.at(cell_labels(t.cell_by_id(step.cell_id)))) +=
              sign * z.diff(step.from, step.to);
      }
    }
    ++row;
  }

  const std::vector<Vec> basis = nullspace_basis(m);
  Vec v = Vec::Constant(static_cast<Eigen::Index>(keys.size()), Rational(0));
  for (const Vec& b : basis) {
    const Rational c(static_cast<long>(rng.below(19)) - 9);
    v += b * c;
  }
  AlphaSystem3 a;
  for (std::size_t i = 0; i < keys.size(); ++i) a.set(keys[i], v(static_cast<Eigen::Index>(i)));
  return a;
}

namespace {

int unique_class(const Triangulation& t, int k, const std::vector<int>& labels) {
  const std::vector<int> found = t.classes_with_labels(k, labels);
  if (found.size() != 1) throw std::logic_error("expected a unique simplex class");
  return found[0];
}

int face_gen_of(const Triangulation& t, const ChainGenerators& g, const std::vector<int>& labels) {
  return g.face_gen[static_cast<std::size_t>(unique_class(t, 2, labels))];
}

MoveCheck finish(GrassmannElement lhs, GrassmannElement rhs) {
  MoveCheck check;
  check.difference = lhs - rhs;
  check.equal = check.difference.is_zero();
  check.lhs = std::move(lhs);
  check.rhs = std::move(rhs);
  return check;
}

void require_consistent(const MoveConfig3& cfg, const ZetaAssignment& z,
                        const AlphaSystem3& alpha) {
  if (!alpha_consistent(cfg, z, alpha))
    throw std::invalid_argument("alpha system is not consistent for the move");
}

}  // namespace

MoveCheck evaluate_move_23(const ZetaAssignment& z, const AlphaSystem3& alpha) {
  const MoveConfig3 cfg = move_config_23();
  RegistryPtr reg = make_registry();
  const ChainGenerators gl = chain_generators(cfg.lhs, reg);
  const ChainGenerators gr = chain_generators(cfg.rhs, reg);

  GrassmannElement lhs = deformed_integrated_weight(cfg.lhs, z, gl, 0, alpha) *
                         deformed_integrated_weight(cfg.lhs, z, gl, 1, alpha);
  lhs = integrate_measures(lhs, {face_gen_of(cfg.lhs, gl, {1, 2, 3})});
  lhs *= z.diff(2, 3) / (z.diff(3, 4) * z.diff(3, 5));

  GrassmannElement rhs = deformed_integrated_weight(cfg.rhs, z, gr, 0, alpha) *
                         deformed_integrated_weight(cfg.rhs, z, gr, 1, alpha) *
                         deformed_integrated_weight(cfg.rhs, z, gr, 2, alpha);
  rhs = integrate_measures(rhs, {face_gen_of(cfg.rhs, gr, {1, 4, 5}),
                                 face_gen_of(cfg.rhs, gr, {2, 4, 5}),
                                 face_gen_of(cfg.rhs, gr, {3, 4, 5})});
  rhs *= Rational(-1) / z.diff(4, 5);
  return finish(std::move(lhs), std::move(rhs));
}

MoveCheck verify_move_23(const ZetaAssignment& z, const AlphaSystem3& alpha) {
  require_consistent(move_config_23(), z, alpha);
  return evaluate_move_23(z, alpha);
}

MoveCheck evaluate_move_14(const ZetaAssignment& z, const AlphaSystem3& alpha,
                           std::optional<int> pick_a, std::optional<int> pick_b) {
  const MoveConfig3 cfg = move_config_14();
  RegistryPtr reg = make_registry();
  const ChainGenerators gl = chain_generators(cfg.lhs, reg);
  const ChainGenerators gr = chain_generators(cfg.rhs, reg);

  GrassmannElement lhs = deformed_integrated_weight(cfg.lhs, z, gl, 0, alpha);
  lhs *= Rational(1) / z.diff(3, 4);

  const int apex = unique_class(cfg.rhs, 0, {5});
  const FirstOrderOperator da = vertex_face_operator(cfg.rhs, z, gr, apex);
  const FirstOrderOperator db = vertex_tetra_operator(cfg.rhs, z, gr, apex);
  const GrassmannElement u5 = pick_a ? invert_operator_product_on_one({da}, {*pick_a})
                                     : invert_operator_product_on_one({da});
  const GrassmannElement w5 = pick_b ? invert_operator_product_on_one({db}, {*pick_b})
                                     : invert_operator_product_on_one({db});

  std::vector<GrassmannElement> factors;
  for (std::size_t ci = 0; ci < cfg.rhs.cells().size(); ++ci)
    factors.push_back(deformed_weight(cfg.rhs, z, gr, ci, alpha));
  factors.push_back(u5);
  factors.push_back(w5);

  std::vector<int> measures;
  for (std::size_t ci = 0; ci < cfg.rhs.cells().size(); ++ci) {
    measures.push_back(gr.cell_gen[ci][0]);
    measures.push_back(gr.cell_gen[ci][1]);
  }
  for (const std::vector<int>& s :
       {std::vector<int>{1, 2, 5}, {1, 3, 5}, {1, 4, 5}, {2, 3, 5}, {2, 4, 5}, {3, 4, 5}})
    measures.push_back(face_gen_of(cfg.rhs, gr, s));

  GrassmannElement rhs = integrate_factor_product(factors, measures);
  rhs *= Rational(-1) / (z.diff(1, 5) * z.diff(4, 5));
  return finish(std::move(lhs), std::move(rhs));
}

MoveCheck verify_move_14(const ZetaAssignment& z, const AlphaSystem3& alpha) {
  require_consistent(move_config_14(), z, alpha);
  return evaluate_move_14(z, alpha);
}

MoveCheck evaluate_move_23_deg4(const ZetaAssignment& z, const std::array<int, 5>& eps) {
  const MoveConfig3 cfg = move_config_23();
  RegistryPtr reg = make_registry();
  const ChainGenerators gl = chain_generators(cfg.lhs, reg);
  const ChainGenerators gr = chain_generators(cfg.rhs, reg);

  const auto weight = [&](const Triangulation& t, const ChainGenerators& g, std::size_t ci,
                          int sign) {
    const Cell& cell = t.cells()[ci];
    return deformed_integrated_weight_deg4_labeled(z, cell_labels(cell),
                                                   cell_face_gens(t, g, cell.id), reg, sign);
  };

  GrassmannElement lhs = weight(cfg.lhs, gl, 0, eps[0]) * weight(cfg.lhs, gl, 1, eps[1]);
  lhs = integrate_measures(lhs, {face_gen_of(cfg.lhs, gl, {1, 2, 3})});
  lhs *= z.diff(2, 3) / (z.diff(3, 4) * z.diff(3, 5));

  GrassmannElement rhs =
      weight(cfg.rhs, gr, 0, eps[2]) * weight(cfg.rhs, gr, 1, eps[3]) * weight(cfg.rhs, gr, 2, eps[4]);
  rhs = integrate_measures(rhs, {face_gen_of(cfg.rhs, gr, {1, 4, 5}),
                                 face_gen_of(cfg.rhs, gr, {2, 4, 5}),
                                 face_gen_of(cfg.rhs, gr, {3, 4, 5})});
  rhs *= Rational(-1) / z.diff(4, 5);
  return finish(std::move(lhs), std::move(rhs));
}

MoveCheck verify_move_23_deg4(const ZetaAssignment& z) {
  return evaluate_move_23_deg4(z, {1, -1, -1, 1, -1});
}

}  // namespace pachner
