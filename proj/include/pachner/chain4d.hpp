#pragma once

#include "pachner/chain3d.hpp"
#include "pachner/grassmann.hpp"
#include "pachner/linalg.hpp"
#include "pachner/rational.hpp"
#include "pachner/weights3d.hpp"

#include <array>
#include <map>
#include <utility>
#include <vector>

namespace pachner {

// One 4-simplex with an orientation sign.
struct Cell4 {
  std::array<int, 5> vertices;  // ascending labels
  int epsilon = 1;
};

// A cluster of 4-simplices glued along 3-faces that share vertex labels.
// Label incidence determines the gluing, so no label set may appear twice
// among the cells. A 3-face contained in two cells is inner; lower simplices
// are inner when no boundary 3-face contains them.
struct Cluster4 {
  std::vector<Cell4> cells;
};

// Throws std::invalid_argument on unsorted cells, bad epsilon, or a 3-face
// shared by more than two cells.
void validate_cluster(const Cluster4& t);

std::vector<std::array<int, 4>> cluster_tetrahedra(const Cluster4& t);  // ascending
std::vector<std::array<int, 4>> boundary_tetrahedra(const Cluster4& t);
std::vector<std::array<int, 3>> inner_faces_4d(const Cluster4& t);
std::vector<std::array<int, 2>> inner_edges_4d(const Cluster4& t);
std::vector<int> inner_vertices_4d(const Cluster4& t);

// Row/column bookkeeping for the two chain maps: one x column per inner
// 2-face, two y coordinates per 3-face, three z coordinates per 4-simplex.
struct ChainBasis4 {
  std::vector<std::array<int, 3>> inner_faces;  // ascending label order
  std::vector<std::array<int, 4>> tetrahedra;   // all 3-faces, ascending
  int cell_count = 0;
  int face_column(const std::array<int, 3>& s) const;  // -1 when absent
  int tetra_index(const std::array<int, 4>& r) const;  // -1 when absent
};

ChainBasis4 chain_basis_4d(const Cluster4& t);

// The two chain maps; their composition vanishes identically. Both throw
// std::invalid_argument when the cluster has an inner vertex, since the short
// complex only covers triangulations without them.
Mat build_f3_4d(const Cluster4& t, const ZetaAssignment& z);  // 2N3 x N2'
Mat build_f4_4d(const Cluster4& t, const ZetaAssignment& z);  // 3N4 x 2N3

// Column pair of 3-face (ijkl) scaled by zeta_{kl} in f4; matching row pair
// of f3 divided by zeta_{kl}; column of inner 2-face (ijk) scaled by
// zeta_{jk}. Returns {f3, f4} transformed; the composition still vanishes.
std::pair<Mat, Mat> gauge_transform(const ChainBasis4& basis, const Mat& f3, const Mat& f4,
                                    const ZetaAssignment& z);

// Grassmann generators: one (a, b) pair per 3-face plus the shared odd
// generator e carrying the deformation.
struct ChainGenerators4 {
  RegistryPtr reg;
  std::map<std::array<int, 4>, std::array<int, 2>> tetra_gen;
  int e_gen = -1;
  int a_of(const std::array<int, 4>& r) const { return tetra_gen.at(r)[0]; }
  int b_of(const std::array<int, 4>& r) const { return tetra_gen.at(r)[1]; }
};

ChainGenerators4 chain_generators_4d(const Cluster4& t);
// Registers into an existing registry; generators with known names are
// shared, so two clusters with a common boundary compare directly.
ChainGenerators4 chain_generators_4d(const Cluster4& t, RegistryPtr reg);

// Product of three linear forms divided by zeta of the two last vertices.
// The forms carry the gauge-transformed simplex rows: coefficients at the
// (a, b) pair of each 3-face, denominator free.
GrassmannElement weight_W_4d(const ZetaAssignment& z, const ChainGenerators4& g,
                             const std::array<int, 5>& cell);

// Differential operator of a 2-face: sum over the 3-faces containing it of
// the four-case derivative table, coefficients from the transformed f3.
FirstOrderOperator face_operator_4d(const Cluster4& t, const ZetaAssignment& z,
                                    const ChainGenerators4& g, const std::array<int, 3>& s);

// Deformation parameter per 4-simplex, addressed by its unordered labels.
class AlphaSystem4 {
 public:
  void set(std::array<int, 5> labels, const Rational& value);
  bool has(std::array<int, 5> labels) const;
  // Throws std::out_of_range when the simplex has no assigned value.
  Rational at(std::array<int, 5> labels) const;
  const std::map<std::array<int, 5>, Rational>& values() const { return values_; }

 private:
  std::map<std::array<int, 5>, Rational> values_;
};

// weight + alpha * e.
GrassmannElement deformed_weight_4d(const ZetaAssignment& z, const ChainGenerators4& g,
                                    const std::array<int, 5>& cell, const AlphaSystem4& alpha);

// The two sides of a bistellar move on vertex labels 1..6, with the one
// orientation assignment agreeing on the boundary across the sides.
struct MoveConfig4 {
  Cluster4 lhs;
  Cluster4 rhs;
};

// Three 4-simplices (12345)(12346)(12356) versus (12456)(13456)(23456).
MoveConfig4 move_config_33();
// Two 4-simplices (12345)(12346) versus (12356)(12456)(13456)(23456).
MoveConfig4 move_config_24();

// The simplices taking part in either side, sorted.
std::vector<std::array<int, 5>> move_alpha_keys_4d(const MoveConfig4& cfg);

// Sum over 4-simplices containing the 2-face s of zeta_{ij} * alpha, where
// (i, j) is the opposite edge oriented by the simplex orientation.
Rational alpha_link_sum_4d(const Cluster4& side, const ZetaAssignment& z,
                           const AlphaSystem4& alpha, const std::array<int, 3>& s);
// Whether every 2-face of the configuration balances between the two sides.
bool alpha_consistent_4d(const MoveConfig4& cfg, const ZetaAssignment& z,
                         const AlphaSystem4& alpha);
// Whether every inner 2-face of a single cluster balances to zero.
bool alpha_balanced_4d(const Cluster4& t, const ZetaAssignment& z, const AlphaSystem4& alpha);

// Random element of the consistent-system solution space.
AlphaSystem4 random_consistent_alpha_4d(const MoveConfig4& cfg, const ZetaAssignment& z, Rng& rng);
// The same value on every simplex of the configuration; always consistent.
AlphaSystem4 uniform_alpha_4d(const MoveConfig4& cfg, const Rational& value);
// alpha of each quintuple out of vertices 1..6 equals zeta at the missing
// vertex; consistent for the 3-3 configuration.
AlphaSystem4 zeta_alpha_33(const ZetaAssignment& z);

// Three-simplex side versus three-simplex side, as elements in the nine
// boundary generator pairs plus e. evaluate_ computes both sides as given;
// verify_ additionally demands a consistent alpha system first and throws
// std::invalid_argument otherwise.
MoveCheck evaluate_move_33(const ZetaAssignment& z, const AlphaSystem4& alpha);
MoveCheck verify_move_33(const ZetaAssignment& z, const AlphaSystem4& alpha);
// Two-simplex side versus four-simplex side over the eight boundary pairs.
MoveCheck evaluate_move_24(const ZetaAssignment& z, const AlphaSystem4& alpha);
MoveCheck verify_move_24(const ZetaAssignment& z, const AlphaSystem4& alpha);

// Product of inner-edge zetas times the integral of all deformed weights
// against the joint inverse of the inner-2-face operators, over the measure
// pairs of the inner 3-faces each divided by its zeta_{kl}. Well defined up
// to one overall sign, which product order fixes arbitrarily here.
GrassmannElement conjectured_invariant_4d(const Cluster4& t, const ZetaAssignment& z,
                                          const ChainGenerators4& g, const AlphaSystem4& alpha);

}  // namespace pachner
