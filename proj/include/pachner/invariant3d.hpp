#pragma once

#include "pachner/chain3d.hpp"
#include "pachner/grassmann.hpp"
#include "pachner/linalg.hpp"
#include "pachner/rational.hpp"
#include "pachner/triangulation.hpp"

#include <map>
#include <set>
#include <vector>

namespace pachner {

// One star tetrahedron per inner vertex: vertex class index -> cell id.
// The chosen cell must lie in the star of its vertex.
struct OrderlyMapping {
  std::map<int, int> assignment;
};

// Cell ids whose vertex set meets the given vertex class.
std::vector<int> star_cells(const Triangulation& t, int vertex_class);

// True when the assignment covers exactly the inner vertices, is injective,
// picks cells inside the stars, and the precedence relation (i precedes j
// when the cell assigned to i lies in the star of j) has no directed cycle.
bool is_orderly(const Triangulation& t, const OrderlyMapping& m);

// Peeling construction: repeatedly strip a cell owning a boundary facet,
// assigning it to the vertex whose star stops being fully surrounded by that
// removal. Cells in avoid are never stripped. Throws when peeling stalls.
OrderlyMapping construct_orderly(const Triangulation& t, const std::set<int>& avoid = {});

// Star of the vertex minus every star strictly preceding it: the legal
// reassignment targets for this vertex.
std::vector<int> reachable_targets(const Triangulation& t, const OrderlyMapping& m,
                                   int vertex_class);

// Reassign one vertex to a cell from reachable_targets. The result is again
// orderly; injectivity is automatic. Throws on an illegal target.
OrderlyMapping elementary_move(const Triangulation& t, const OrderlyMapping& m, int vertex_class,
                               int cell_id);

// Gaussian data of the integrand. Variables are b1, b2 per cell in stored
// order, then one per inner face class in basis order; form holds the
// coefficient of v_i v_j at (i, j), i < j, and is skew. Boundary face
// variables do not enter the degree-0 term and are left out.
struct QuadraticFormData {
  Mat form;
  Rational prefactor;  // inner-face over (inner-edge times cell) zeta products
  int b_count = 0;
};

// alpha is the same deformation constant for every cell; the invariant's own
// normalization is alpha = -2.
QuadraticFormData quadratic_form_data(const Triangulation& t, const ZetaAssignment& z,
                                      const Rational& alpha);

// Deformed invariant of the complex: an element in the boundary face
// generators. Vertex weights are the single-monomial inverses selected by
// the orderly mapping. Well defined up to one overall sign.
GrassmannElement invariant_G(const Triangulation& t, const ZetaAssignment& z,
                             const OrderlyMapping& m, const ChainGenerators& g,
                             const Rational& alpha = -2);

// Degree-0 component for complexes without inner vertices: prefactor times
// the Pfaffian of the quadratic form. Zero when the variable count is odd.
Rational invariant_G_pfaffian(const Triangulation& t, const ZetaAssignment& z,
                              const Rational& alpha = -2);

// Absolute value of the degree-0 invariant of the lens space L(p, q) with
// the length-n two-cell chain excised.
Rational lens_table(int p, int q, int n, const ZetaAssignment& z);

}  // namespace pachner
