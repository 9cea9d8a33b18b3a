#pragma once

#include "pachner/grassmann.hpp"
#include "pachner/linalg.hpp"
#include "pachner/rational.hpp"
#include "pachner/triangulation.hpp"

#include <array>
#include <optional>
#include <vector>

namespace pachner {

// Row/column bookkeeping shared by the three chain maps.
//   vertex coordinates: one per inner vertex class, canonical class order;
//   face coordinates:   one per 2-face class, inner classes first;
//   tetra coordinates:  two per cell, cells in stored order.
struct ChainBasis3 {
  std::vector<int> inner_vertices;  // vertex class indices
  std::vector<int> faces;           // face class indices, inner first
  int inner_face_count = 0;
  int vertex_column(int vertex_class) const;  // -1 when not inner
  int face_column(int face_class) const;
};

ChainBasis3 chain_basis(const Triangulation& t);

// x_{s,v} as a multiple of the leading coordinate x_{s,s1}, obtained by
// solving the two linear conditions attached to the face.
Rational face_coordinate_factor(const ZetaAssignment& z, const std::vector<int>& face, int v);

// y_{r,v} through the two leading coordinates (y_{r,r1}, y_{r,r2}).
std::array<Rational, 2> tetra_coordinate_factors(const ZetaAssignment& z,
                                                 const std::vector<int>& tetra, int v);

// Face classes of a cell in the canonical column order
// (r1r2r3), (r1r2r4), (r1r3r4), (r2r3r4).
std::array<int, 4> cell_face_classes(const Triangulation& t, int cell_id);

// The 2x4 coefficient block tying a cell's two coordinates to its four faces'
// leading coordinates, columns in cell_face_classes order.
std::array<std::array<Rational, 4>, 2> cell_face_block(const ZetaAssignment& z,
                                                       const std::vector<int>& vertices);

// The three chain maps. Compositions face_to_tetra * vertex_to_face and
// tetra_to_vertex * face_to_tetra vanish identically.
Mat vertex_to_face(const Triangulation& t, const ZetaAssignment& z);    // faces x inner vertices
Mat face_to_tetra(const Triangulation& t, const ZetaAssignment& z);    // tetra coords x faces
Mat tetra_to_vertex(const Triangulation& t, const ZetaAssignment& z);  // inner vertices x tetra coords

// Scalar prefactor relating torsions to the multicomponent invariant:
// product of zeta_{s2 s3} over inner faces divided by the products of
// zeta_{l1 l2} over inner edges and zeta_{r3 r4} over all cells.
Rational chain_prefactor(const Triangulation& t, const ZetaAssignment& z);

// Deterministic minor selection reused across every boundary subset:
// lexicographically first independent rows of vertex_to_face and columns of
// tetra_to_vertex. defined = false when either map is rank deficient, in
// which case no torsion value exists for any subset.
struct TorsionContext {
  ChainBasis3 basis;
  Mat f2, f3, f4;
  std::vector<int> f2_rows;
  std::vector<int> f4_cols;
  std::vector<int> f3_rows;       // tetra coordinates not in f4_cols
  std::vector<int> f3_base_cols;  // inner face columns not in f2_rows
  Rational minor_f2 = 1, minor_f4 = 1;
  // Orientation of the chosen minor bases relative to the iterated-integral
  // measure order; makes coefficient(T, C) equal to torsion_tau(C) exactly.
  int sign = 1;
  bool defined = false;
};

TorsionContext make_torsion_context(const Triangulation& t, const ZetaAssignment& z);

// Cardinality every boundary subset C must have.
int boundary_subset_size(const TorsionContext& ctx);

// All ascending subsets of boundary face classes of the required size.
std::vector<std::vector<int>> boundary_subsets(const TorsionContext& ctx);

// Torsion for the ordered boundary subset C, given as basis column indices
// (boundary columns start at inner_face_count). nullopt when the context is
// undefined; plain zero values are legitimate.
std::optional<Rational> torsion_tau(const TorsionContext& ctx, const std::vector<int>& C);

// prefactor * torsion.
std::optional<Rational> invariant_I0(const TorsionContext& ctx, const Triangulation& t,
                                     const ZetaAssignment& z, const std::vector<int>& C);

// Grassmann generators for a complex: one per face class ("a"), a pair per
// cell ("b1", "b2"), registered faces first in basis order.
struct ChainGenerators {
  RegistryPtr reg;
  std::vector<int> face_gen;                // face class -> generator index
  std::vector<std::array<int, 2>> cell_gen; // cell order -> generator pair
};

ChainGenerators chain_generators(const Triangulation& t);
// Same, but registering into an existing registry. Generators whose names are
// already present are shared, so two complexes with a common boundary get
// identical boundary generators and their results compare directly.
ChainGenerators chain_generators(const Triangulation& t, RegistryPtr reg);

// Bilinear exponent sum_r (b_r block_r a): all cell weights at once.
GrassmannElement chain_exponent(const Triangulation& t, const ZetaAssignment& z,
                                const ChainGenerators& g);

// First-order operators attached to an inner vertex: coefficients are the
// vertex's column of vertex_to_face resp. row of tetra_to_vertex.
FirstOrderOperator vertex_face_operator(const Triangulation& t, const ZetaAssignment& z,
                                        const ChainGenerators& g, int vertex_class);
FirstOrderOperator vertex_tetra_operator(const Triangulation& t, const ZetaAssignment& z,
                                         const ChainGenerators& g, int vertex_class);

// Generating function of torsions: an element in the boundary-face
// generators whose coefficient at the ascending product over C equals
// torsion_tau(C). Throws when the operator inverses do not exist.
GrassmannElement generating_function_T(const Triangulation& t, const ZetaAssignment& z,
                                       const ChainGenerators& g);

// prefactor * T: generating function of the multicomponent invariant.
GrassmannElement generating_function_F(const Triangulation& t, const ZetaAssignment& z,
                                       const ChainGenerators& g);

// Monomial bitmask of the ascending product over the subset C (basis column
// indices, as accepted by torsion_tau).
Monomial subset_monomial(const ChainBasis3& basis, const ChainGenerators& g,
                         const std::vector<int>& C);

}  // namespace pachner
