#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pachner {

// Top-dimensional cell. Vertices are global labels, stored ascending and
// pairwise distinct within the cell. Distinct cells may carry the same label
// set: the complexes here are not required to be combinatorial.
struct Cell {
  int id = -1;
  std::vector<int> vertices;
  int epsilon = 0;  // orientation sign, 0 = not yet oriented
};

// Facet identification. Slot k of a cell is the facet omitting the cell's
// k-th vertex. Glued facets must carry equal label sets; vertices are
// identified label-to-label.
struct Gluing {
  int cell_a = -1, slot_a = -1;
  int cell_b = -1, slot_b = -1;
};

// Equivalence class of (cell, vertex subset) pairs under the gluings.
// Doubled simplices (same labels, different classes) arise naturally, e.g.
// after excising cells whose stars wrapped around an edge.
struct SubSimplex {
  std::vector<int> labels;
  bool boundary = false;
  std::vector<std::pair<int, unsigned>> members;  // (cell index, position bitmask)
};

std::vector<std::string> validate_triangulation(int dimension, const std::vector<Cell>& cells,
                                                const std::vector<Gluing>& gluings);

class Triangulation {
 public:
  Triangulation(int dimension, std::vector<Cell> cells, std::vector<Gluing> gluings);

  int dimension() const { return dim_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }
  int cell_index(int id) const;
  const Cell& cell_by_id(int id) const { return cells_[static_cast<std::size_t>(cell_index(id))]; }

  bool slot_glued(int cell_id, int slot) const;
  // Glued partner of (cell id, slot), as (cell id, slot).
  std::optional<std::pair<int, int>> neighbor(int cell_id, int slot) const;
  std::vector<std::pair<int, int>> boundary_facets() const;
  bool closed() const { return boundary_facets().empty(); }

  // Classes of k-dimensional sub-simplices, 0 <= k < dimension, in canonical
  // order (sorted by labels, then by first member).
  const std::vector<SubSimplex>& simplices(int k) const;
  int simplex_class(int cell_id, unsigned position_mask) const;
  std::vector<int> classes_with_labels(int k, const std::vector<int>& labels) const;

  int count(int k) const { return static_cast<int>(simplices(k).size()); }
  int count_inner(int k) const;

  std::vector<int> vertex_labels() const;
  int max_vertex_label() const;
  int max_cell_id() const;

  // Breadth-first propagation of orientation signs from the first cell.
  // Throws when the complex is disconnected or not orientable.
  void orient();
  bool oriented() const;

 private:
  void derive();
  int dim_;
  std::vector<Cell> cells_;
  std::vector<Gluing> gluings_;
  std::map<int, int> index_of_id_;
  std::map<std::pair<int, int>, std::pair<int, int>> glue_map_;
  std::vector<std::vector<SubSimplex>> classes_;
  std::vector<std::map<std::pair<int, unsigned>, int>> class_of_;
};

// One tetrahedron (3d) or 4-simplex (4d) around a codimension-2 simplex,
// together with the opposite vertex pair oriented so that appending it to the
// ascending simplex labels gives a permutation whose sign is the cell's
// orientation sign.
struct LinkStep {
  int cell_id = -1;
  int from = -1, to = -1;
};

struct CodimTwoLink {
  std::vector<LinkStep> steps;
  bool cycle = false;
};

// Walk around a codimension-2 class through the facet gluings. Requires an
// oriented triangulation. steps are in traversal order; cycle tells whether
// the walk closed up (inner simplex) or stopped at the boundary.
CodimTwoLink link_around_class(const Triangulation& t, int class_index);

// 3d convenience: link of the edge with labels {k, l}, which must name a
// unique edge class.
CodimTwoLink oriented_link_of_edge(const Triangulation& t, int k, int l);

enum class PachnerMove { TwoThree, ThreeTwo, OneFour, FourOne, ThreeThree, TwoFour, FourTwo };

// Bistellar move at the given site. site_cells lists the cell ids to be
// replaced; new_vertex is required for OneFour and must be fresh. The
// complex must be oriented; replacement cells are oriented compatibly.
// Throws when the site does not match the move pattern.
Triangulation pachner_move(const Triangulation& t, PachnerMove move,
                           const std::vector<int>& site_cells,
                           std::optional<int> new_vertex = std::nullopt);

// Rename vertex labels everywhere (total injective map on the labels used).
// Cells are re-sorted; orientation signs pick up the permutation sign.
Triangulation relabel_vertices(const Triangulation& t, const std::map<int, int>& rename);

// Closed lens space L(p, q), 0 < q < p, gcd(q, p) = 1, as a bipyramid over a
// 2p-gon: 2p cells in the upper fan (ids 0..2p-1, cell i spanning polygon
// vertices i, i+1), 2p in the lower fan (ids 2p..4p-1), upper boundary cone
// glued to the lower one twisted by q polygon steps. Four vertex labels:
// the two apexes are identified with each other, the polygon rim alternates
// between two labels, the center keeps its own.
Triangulation build_lens(int p, int q);

// Removes the two-cell chain {upper cell 0, upper cell 2n} from a build_lens
// result. The two cells meet along two opposite edges; their removal splits
// those edge classes in two, which the orbit-based class derivation yields
// automatically. 0 < n < p.
Triangulation excise_chain_and_double(const Triangulation& lens, int n);

std::string to_json(const Triangulation& t);
Triangulation triangulation_from_json(const std::string& text);
void save_triangulation(const Triangulation& t, const std::string& path);
Triangulation load_triangulation(const std::string& path);

namespace detail {
// Labeled variant backing build_lens: labels = {apex, center, rim even, rim
// odd}; reverse flips the direction of the twist.
Triangulation build_lens_labeled(int p, int q, const std::array<int, 4>& labels, bool reverse);
}  // namespace detail

}  // namespace pachner
