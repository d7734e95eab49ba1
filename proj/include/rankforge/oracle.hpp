#pragma once

#include <cstddef>
#include <vector>

#include "rankforge/error.hpp"
#include "rankforge/matrix.hpp"
#include "rankforge/tolerance.hpp"

namespace rankforge {

namespace detail {

// Determinant by cofactor expansion along the first remaining row.
// Deliberately free of elimination so the rank oracle shares no code path
// with rref; addition, subtraction and multiplication only.
template <typename T>
T det_expand(const Matrix<T>& a, std::size_t row, unsigned col_mask) {
  if (col_mask == 0) return T(1);
  T acc(0);
  bool negate = false;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (!(col_mask & (1u << j))) continue;
    const T& aij = a(row, j);
    if (!(aij == T(0))) {
      T minor = det_expand(a, row + 1, col_mask & ~(1u << j));
      acc = negate ? acc - aij * minor : acc + aij * minor;
    }
    negate = !negate;
  }
  return acc;
}

inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] + (k - i) < n) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::vector<std::size_t> first_combination(std::size_t k) {
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  return c;
}

}  // namespace detail

template <typename T>
T determinant_cofactor(const Matrix<T>& a) {
  if (a.rows() != a.cols())
    throw DimensionError("determinant of a non-square matrix");
  if (a.rows() > 16)
    throw PreconditionError("cofactor determinant guarded to order <= 16");
  return detail::det_expand(a, 0, a.cols() ? (1u << a.cols()) - 1u : 0u);
}

// Ground-truth rank: the largest k for which some k x k submatrix has a
// nonzero determinant. Levels are swept upward; once every k x k minor
// vanishes, all larger minors do too (expand any (k+1)-minor along a row),
// so the sweep stops at the first all-zero level. Cost is exponential,
// hence the size guard.
template <typename T>
std::size_t rank_oracle(const Matrix<T>& a, const Tolerance& tol = {}) {
  const std::size_t m = a.rows(), n = a.cols();
  if (std::min(m, n) > 8)
    throw PreconditionError("rank_oracle guarded to min(m, n) <= 8");
  const double scale = max_abs(a);
  std::size_t rank = 0;
  for (std::size_t k = 1; k <= std::min(m, n); ++k) {
    bool found = false;
    auto rows = detail::first_combination(k);
    do {
      auto cols = detail::first_combination(k);
      do {
        T d = determinant_cofactor(a.submatrix(rows, cols));
        if (!tol.is_zero(d, scale)) {
          found = true;
          break;
        }
      } while (detail::next_combination(cols, n));
      if (found) break;
    } while (detail::next_combination(rows, m));
    if (!found) break;
    rank = k;
  }
  return rank;
}

}  // namespace rankforge
