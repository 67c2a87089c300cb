#pragma once

// Builder for the support-margin certificate program, shared by the
// binary64 and exact instantiations.
//
// Given min c'x, Ax = b, x >= 0 with optimal support S, the certificate
// seeks the largest t <= cap with a dual y satisfying
//     y'A_j  = c_j          (j in S)
//     y'A_j + t <= c_j      (j not in S).
// In standard form the variables are y = yp - ym (both >= 0), t >= 0, one
// slack per non-support column, and one slack for the cap row.

#include <vector>

#include "mmot/errors.hpp"
#include "mmot/simplex.hpp"

namespace mmot::lp::detail {

template <class T>
struct MarginAux {
  ColMatrix<T> A;
  std::vector<T> b;
  std::vector<T> c;  // minimizes -t
  int t_column = 0;
};

template <class T>
MarginAux<T> build_margin_aux(const ColMatrix<T>& A, const std::vector<T>& c_min,
                              const std::vector<char>& in_support, const T& cap) {
  const int m = A.rows;
  const int n = A.cols;
  int outside = 0;
  for (int j = 0; j < n; ++j)
    if (!in_support[static_cast<std::size_t>(j)]) ++outside;

  const int rows = n + 1;
  const int t_col = 2 * m;
  const int cols = 2 * m + 1 + outside + 1;

  MarginAux<T> aux;
  aux.A = ColMatrix<T>(rows, cols);
  aux.b.resize(static_cast<std::size_t>(rows));
  aux.c.assign(static_cast<std::size_t>(cols), T(0));
  aux.c[static_cast<std::size_t>(t_col)] = T(-1);
  aux.t_column = t_col;

  int slack = t_col + 1;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const T& a = A.at(i, j);
      if (a == T(0)) continue;
      aux.A.at(j, i) = a;
      aux.A.at(j, m + i) = -a;
    }
    aux.b[static_cast<std::size_t>(j)] = c_min[static_cast<std::size_t>(j)];
    if (!in_support[static_cast<std::size_t>(j)]) {
      aux.A.at(j, t_col) = T(1);
      aux.A.at(j, slack) = T(1);
      ++slack;
    }
  }
  aux.A.at(n, t_col) = T(1);
  aux.A.at(n, slack) = T(1);
  aux.b[static_cast<std::size_t>(n)] = cap;
  return aux;
}

}  // namespace mmot::lp::detail
