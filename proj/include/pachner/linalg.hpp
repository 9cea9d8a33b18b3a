#pragma once

#include "pachner/rational.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace pachner {

using Mat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

inline Mat zero_matrix(Eigen::Index rows, Eigen::Index cols) {
  return Mat::Constant(rows, cols, Rational(0));
}

// Matrix with basis annotations, used for the chain maps so rows and columns
// stay identifiable in diagnostics.
struct LabeledMatrix {
  Mat m;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
};

// Determinant by fraction-free (Bareiss) elimination. det of 0x0 is 1.
Rational det(const Mat& a);

Mat submatrix(const Mat& a, const std::vector<int>& rows, const std::vector<int>& cols);

inline Rational minor_det(const Mat& a, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  return det(submatrix(a, rows, cols));
}

int rank(const Mat& a);

// Greedy scan in index order; the result is the lexicographically first
// maximal independent set of rows (resp. columns).
std::vector<int> lex_first_independent_rows(const Mat& a);
std::vector<int> lex_first_independent_cols(const Mat& a);

bool is_skew_symmetric(const Mat& a);

// Pfaffian of a skew-symmetric matrix via congruence elimination; squares to
// the determinant. Odd size gives 0, size 0 gives 1.
Rational pfaffian(const Mat& a);

// Kernel basis (column vectors), computed by exact Gauss-Jordan reduction.
// Deterministic: free variables in ascending column order, each basis vector
// has a 1 at its free column.
std::vector<Vec> nullspace_basis(const Mat& a);

}  // namespace pachner
