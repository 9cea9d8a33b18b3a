#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "pachner/chain3d.hpp"
#include "pachner/grassmann.hpp"
#include "pachner/rational.hpp"
#include "pachner/triangulation.hpp"

namespace pachner {

// Deformation parameter per tetrahedron, addressed by its vertex labels in any
// order. Symmetry in the four indices holds by construction since keys are
// stored sorted.
class AlphaSystem3 {
 public:
  void set(std::array<int, 4> labels, const Rational& value);
  bool has(std::array<int, 4> labels) const;
  // Throws std::out_of_range when the tetrahedron has no assigned value.
  Rational at(std::array<int, 4> labels) const;
  const std::map<std::array<int, 4>, Rational>& values() const { return values_; }

 private:
  std::map<std::array<int, 4>, Rational> values_;
};

// The two sides of a bistellar move on vertex labels 1..5, built with the one
// orientation assignment whose boundary faces agree across the sides.
struct MoveConfig3 {
  Triangulation lhs;
  Triangulation rhs;
};

// Two tetrahedra (1234)(1235) versus three (1245)(1345)(2345).
MoveConfig3 move_config_23();
// One tetrahedron (1234) versus the cone (1235)(1245)(1345)(2345) over 5.
MoveConfig3 move_config_14();

// The five tetrahedra taking part in either move, sorted.
std::vector<std::array<int, 4>> move_alpha_keys();

// Bilinear form (b1, b2) block (a-faces) of the cell at index ci.
GrassmannElement phi(const Triangulation& t, const ZetaAssignment& z,
                     const ChainGenerators& g, std::size_t ci);
// exp of the bilinear form.
GrassmannElement weight_W(const Triangulation& t, const ZetaAssignment& z,
                          const ChainGenerators& g, std::size_t ci);
// Berezin integral of weight_W over the cell's two b generators, innermost
// b1. Closed form: the product of the two form rows.
GrassmannElement integrated_weight(const Triangulation& t, const ZetaAssignment& z,
                                   const ChainGenerators& g, std::size_t ci);
// exp of the bilinear form shifted by eps * zeta_{r3 r4} * alpha_r * b2 b1.
GrassmannElement deformed_weight(const Triangulation& t, const ZetaAssignment& z,
                                 const ChainGenerators& g, std::size_t ci,
                                 const AlphaSystem3& alpha);
// integrated_weight + eps * zeta_{r3 r4} * alpha_r.
GrassmannElement deformed_integrated_weight(const Triangulation& t, const ZetaAssignment& z,
                                            const ChainGenerators& g, std::size_t ci,
                                            const AlphaSystem3& alpha);
// integrated_weight + eps * zeta_{r3 r4} * (prod_{i<j} zeta_{ri rj}) * product
// of the four face generators in face order. Deformation of degree 4.
GrassmannElement deformed_integrated_weight_deg4(const Triangulation& t, const ZetaAssignment& z,
                                                 const ChainGenerators& g, std::size_t ci);
// Same weight built from labels alone with an explicit orientation sign, so
// sign patterns that no oriented complex realizes can be evaluated too.
GrassmannElement deformed_integrated_weight_deg4_labeled(
    const ZetaAssignment& z, const std::array<int, 4>& labels,
    const std::array<int, 4>& face_gens, RegistryPtr reg, int eps);

// Propagation of the deformation parameters from the left side of a move to
// the right: alpha_1245, alpha_1345, alpha_2345 from alpha_1234, alpha_1235.
// The same linear relations govern both the 2-3 and the 1-4 configuration.
AlphaSystem3 solve_alpha_move(const ZetaAssignment& z, const Rational& alpha_1234,
                              const Rational& alpha_1235);

// Balance sum over the oriented link of edge (k, l): sum of zeta_{from,to} *
// alpha_{cell}. Zero when the complex has no such edge.
Rational alpha_link_sum(const Triangulation& t, const ZetaAssignment& z,
                        const AlphaSystem3& alpha, int k, int l);
// Whether every edge of the configuration balances between the two sides.
bool alpha_consistent(const MoveConfig3& cfg, const ZetaAssignment& z,
                      const AlphaSystem3& alpha);
// Random element of the consistent-system solution space (a two-parameter
// family for both moves).
AlphaSystem3 random_consistent_alpha(const MoveConfig3& cfg, const ZetaAssignment& z, Rng& rng);

struct MoveCheck {
  bool equal = false;
  GrassmannElement lhs;
  GrassmannElement rhs;
  GrassmannElement difference;
};

// Two-tetrahedron side versus three-tetrahedron side, as elements in the six
// boundary face generators. evaluate_ computes both sides as given;
// verify_ additionally demands a consistent alpha system first and throws
// std::invalid_argument otherwise.
MoveCheck evaluate_move_23(const ZetaAssignment& z, const AlphaSystem3& alpha);
MoveCheck verify_move_23(const ZetaAssignment& z, const AlphaSystem3& alpha);

// One-tetrahedron side versus the cone side, which integrates the full
// weights against the two vertex weights of the cone apex. The optional picks
// select which face and cell generator carry the vertex weights.
MoveCheck evaluate_move_14(const ZetaAssignment& z, const AlphaSystem3& alpha,
                           std::optional<int> pick_a = std::nullopt,
                           std::optional<int> pick_b = std::nullopt);
MoveCheck verify_move_14(const ZetaAssignment& z, const AlphaSystem3& alpha);

// The degree-4 deformation obeys the same two-versus-three relation with the
// fixed sign pattern + - - + - on (1234)(1235)(1245)(1345)(2345). The
// evaluate_ form takes the five signs explicitly for negative controls.
MoveCheck evaluate_move_23_deg4(const ZetaAssignment& z, const std::array<int, 5>& eps);
MoveCheck verify_move_23_deg4(const ZetaAssignment& z);

}  // namespace pachner
