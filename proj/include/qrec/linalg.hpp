#pragma once

// Exact Gaussian elimination over a field descriptor. Dense matrices are Eigen
// containers of field elements; nothing here pivots on magnitude.

#include <optional>
#include <utility>
#include <vector>

#include "qrec/error.hpp"
#include "qrec/field.hpp"

namespace qrec {

template <class Field>
struct EliminationResult {
  Matrix<typename Field::Element> reduced;  ///< reduced row echelon form
  std::vector<Eigen::Index> pivot_columns;
  Eigen::Index rank() const { return static_cast<Eigen::Index>(pivot_columns.size()); }
};

template <class Field>
EliminationResult<Field> row_reduce(const Field& field, Matrix<typename Field::Element> m) {
  using E = typename Field::Element;
  EliminationResult<Field> out;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index pivot = row;
    while (pivot < m.rows() && field.is_zero(m(pivot, col))) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) m.row(pivot).swap(m.row(row));
    const E inv = field.one() / m(row, col);
    for (Eigen::Index j = col; j < m.cols(); ++j) m(row, j) = E(m(row, j) * inv);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == row || field.is_zero(m(i, col))) continue;
      const E factor = m(i, col);
      for (Eigen::Index j = col; j < m.cols(); ++j) m(i, j) = E(m(i, j) - factor * m(row, j));
    }
    out.pivot_columns.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

/// Solution of A x = b. `consistent` is false when no solution exists; when the
/// system is consistent but underdetermined, free variables are set to zero and
/// `unique` is false.
template <class Field>
struct LinearSolution {
  bool consistent = false;
  bool unique = false;
  Vector<typename Field::Element> x;
};

template <class Field>
LinearSolution<Field> solve(const Field& field,
                            const Matrix<typename Field::Element>& a,
                            const Vector<typename Field::Element>& b) {
  using E = typename Field::Element;
  Matrix<E> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  auto red = row_reduce(field, std::move(aug));

  LinearSolution<Field> sol;
  sol.consistent = red.pivot_columns.empty() || red.pivot_columns.back() != a.cols();
  if (!sol.consistent) return sol;
  sol.unique = red.rank() == a.cols();
  sol.x = Vector<E>::Constant(a.cols(), field.zero());
  for (Eigen::Index i = 0; i < red.rank(); ++i) {
    sol.x(red.pivot_columns[i]) = red.reduced(i, a.cols());
  }
  return sol;
}

template <class Field>
Matrix<typename Field::Element> inverse(const Field& field,
                                        const Matrix<typename Field::Element>& a) {
  using E = typename Field::Element;
  if (a.rows() != a.cols()) throw Error(ErrorCode::invalid_input, "inverse of non-square matrix");
  const Eigen::Index n = a.rows();
  Matrix<E> aug(n, 2 * n);
  aug.leftCols(n) = a;
  aug.rightCols(n) = Matrix<E>::Constant(n, n, field.zero());
  for (Eigen::Index i = 0; i < n; ++i) aug(i, n + i) = field.one();
  auto red = row_reduce(field, std::move(aug));
  if (red.rank() < n || red.pivot_columns.back() >= n) {
    throw Error(ErrorCode::invalid_input, "singular matrix");
  }
  return red.reduced.rightCols(n);
}

inline Rational determinant(const RationalMatrix& a) {
  RationalMatrix m = a;
  const Eigen::Index n = m.rows();
  Rational det = 1;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      m.row(p).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      const Rational f = m(i, c) / m(c, c);
      for (Eigen::Index j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

}  // namespace qrec
