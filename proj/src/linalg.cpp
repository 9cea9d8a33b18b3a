#include "pachner/linalg.hpp"

#include <stdexcept>

namespace pachner {

Rational det(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of nonsquare matrix");
  const Eigen::Index n = a.rows();
  if (n == 0) return 1;
  Mat m = a;
  int sign = 1;
  Rational prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      Eigen::Index r = k + 1;
      while (r < n && m(r, k) == 0) ++r;
      if (r == n) return 0;
      m.row(k).swap(m.row(r));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

Mat submatrix(const Mat& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  Mat out = zero_matrix(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  return out;
}

namespace {

// Incremental row reduction; keeps the reduced independent rows found so far.
struct GreedyBasis {
  std::vector<Vec> rows;    // reduced rows
  std::vector<int> pivots;  // pivot column of each reduced row

  // Returns true when v is independent of the rows collected so far.
  bool try_add(Vec v) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (v(pivots[i]) == 0) continue;
      const Rational f = v(pivots[i]) / rows[i](pivots[i]);
      v -= f * rows[i];
    }
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (v(j) != 0) {
        rows.push_back(std::move(v));
        pivots.push_back(static_cast<int>(j));
        return true;
      }
    }
    return false;
  }
};

}  // namespace

int rank(const Mat& a) { return static_cast<int>(lex_first_independent_rows(a).size()); }

std::vector<int> lex_first_independent_rows(const Mat& a) {
  GreedyBasis basis;
  std::vector<int> picked;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    if (basis.try_add(a.row(i).transpose())) picked.push_back(static_cast<int>(i));
  return picked;
}

std::vector<int> lex_first_independent_cols(const Mat& a) {
  GreedyBasis basis;
  std::vector<int> picked;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (basis.try_add(a.col(j))) picked.push_back(static_cast<int>(j));
  return picked;
}

bool is_skew_symmetric(const Mat& a) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i; j < a.cols(); ++j)
      if (a(i, j) != -a(j, i)) return false;
  return true;
}

Rational pfaffian(const Mat& a) {
  if (!is_skew_symmetric(a)) throw std::invalid_argument("pfaffian of non-skew matrix");
  const Eigen::Index n = a.rows();
  if (n % 2 != 0) return 0;
  if (n == 0) return 1;
  Mat m = a;
  Rational result = 1;
  for (Eigen::Index k = 0; k < n; k += 2) {
    Eigen::Index j = k + 1;
    while (j < n && m(k, j) == 0) ++j;
    if (j == n) return 0;
    if (j != k + 1) {
      // Simultaneous row and column swap: congruence by a transposition.
      m.row(j).swap(m.row(k + 1));
      m.col(j).swap(m.col(k + 1));
      result = -result;
    }
    const Rational pivot = m(k, k + 1);
    result *= pivot;
    for (Eigen::Index i = k + 2; i < n; ++i) {
      // Congruence transforms preserve the pfaffian up to the factors above.
      const Rational t = m(i, k) / pivot;
      if (t != 0) {
        m.row(i) += t * m.row(k + 1);
        m.col(i) += t * m.col(k + 1);
      }
      const Rational s = -m(i, k + 1) / pivot;
      if (s != 0) {
        m.row(i) += s * m.row(k);
        m.col(i) += s * m.col(k);
      }
    }
  }
  return result;
}

std::vector<Vec> nullspace_basis(const Mat& a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  Mat m = a;
  std::vector<int> pivot_col_of_row;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index p = row;
    while (p < rows && m(p, col) == 0) ++p;
    if (p == rows) continue;
    m.row(p).swap(m.row(row));
    const Rational inv = 1 / m(row, col);
    m.row(row) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == row || m(i, col) == 0) continue;
      m.row(i) -= m(i, col) * m.row(row);
    }
    pivot_col_of_row.push_back(static_cast<int>(col));
    ++row;
  }
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int c : pivot_col_of_row) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<Vec> basis;
  for (Eigen::Index free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    Vec v = Vec::Constant(cols, Rational(0));
    v(free) = 1;
    for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r)
      v(pivot_col_of_row[r]) = -m(static_cast<Eigen::Index>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace pachner
