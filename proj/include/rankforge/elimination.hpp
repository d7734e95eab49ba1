#pragma once

#include <chrono>
#include <cstddef>
#include <vector>

#include "rankforge/error.hpp"
#include "rankforge/matrix.hpp"
#include "rankforge/report.hpp"
#include "rankforge/tolerance.hpp"

namespace rankforge {

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

inline std::vector<std::size_t> complement_of(
    const std::vector<std::size_t>& idx, std::size_t n) {
  std::vector<bool> in(n, false);
  for (std::size_t i : idx) in[i] = true;
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n; ++j)
    if (!in[j]) out.push_back(j);
  return out;
}

}  // namespace detail

template <typename T>
struct RrefResult {
  Matrix<T> r0;                         // the reduced row echelon form
  std::vector<std::size_t> pivot_cols;  // strictly increasing
  Matrix<T> row_ops;                    // row_ops * input == r0 (exact mode)

  std::size_t rank() const { return pivot_cols.size(); }
};

// Gauss-Jordan to reduced row echelon form with full bookkeeping of the row
// operations. Pivot choice: first nonzero in the column (exact regime),
// largest magnitude above the scaled threshold (float regime). Pivot-column
// entries are assigned their structural 0/1 values rather than computed, so
// the echelon structure holds exactly in both regimes.
template <typename T>
RrefResult<T> rref(const Matrix<T>& a, const Tolerance& tol = {}) {
  const std::size_t m = a.rows(), n = a.cols();
  RrefResult<T> out{a, {}, Matrix<T>::identity(m)};
  Matrix<T>& r0 = out.r0;
  Matrix<T>& ops = out.row_ops;
  const double scale = max_abs(a);

  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t piv = m;
    if constexpr (is_exact_v<T>) {
      for (std::size_t i = row; i < m; ++i)
        if (!(r0(i, col) == T(0))) {
          piv = i;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t i = row; i < m; ++i) {
        const double v = abs_to_double(r0(i, col));
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (piv < m && tol.is_zero(r0(piv, col), scale)) piv = m;
    }
    if (piv == m) continue;  // no pivot in this column

    r0.swap_rows(row, piv);
    ops.swap_rows(row, piv);

    const T p = r0(row, col);
    for (std::size_t j = col + 1; j < n; ++j) r0(row, j) = r0(row, j) / p;
    r0(row, col) = T(1);
    for (std::size_t j = 0; j < m; ++j) ops(row, j) = ops(row, j) / p;

    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      const T f = r0(i, col);
      if (f == T(0)) continue;
      for (std::size_t j = col + 1; j < n; ++j)
        r0(i, j) = r0(i, j) - f * r0(row, j);
      r0(i, col) = T(0);
      for (std::size_t j = 0; j < m; ++j)
        ops(i, j) = ops(i, j) - f * ops(row, j);
    }

    out.pivot_cols.push_back(col);
    ++row;
  }

  if constexpr (!is_exact_v<T>) {
    // Sub-threshold residue from skipped columns: rows below the last pivot
    // are zero by the rank decision, and a pivot row leads with its pivot.
    for (std::size_t i = out.pivot_cols.size(); i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) r0(i, j) = T(0);
    for (std::size_t i = 0; i < out.pivot_cols.size(); ++i)
      for (std::size_t j = 0; j < out.pivot_cols[i]; ++j) r0(i, j) = T(0);
  }
  return out;
}

// Inverse via the accumulated row operations: rank n makes r0 the identity,
// so row_ops itself is the inverse.
template <typename T>
Matrix<T> inverse(const Matrix<T>& a, const Tolerance& tol = {}) {
  if (a.rows() != a.cols())
    throw DimensionError("inverse of a non-square matrix " + a.shape_string());
  auto rr = rref(a, tol);
  if (rr.rank() != a.rows())
    throw SingularMatrixError("matrix of order " +
                              std::to_string(a.rows()) + " has rank " +
                              std::to_string(rr.rank()));
  return rr.row_ops;
}

// X with a * X = b for square nonsingular a.
template <typename T>
Matrix<T> solve_linear(const Matrix<T>& a, const Matrix<T>& b,
                       const Tolerance& tol = {}) {
  return matmul(inverse(a, tol), b);
}

template <typename T>
struct CRFactors {
  Matrix<T> c;  // pivot columns of the input, verbatim
  Matrix<T> r;  // nonzero rows of the rref
  std::vector<std::size_t> pivot_cols;

  std::size_t rank() const { return pivot_cols.size(); }
  // r(m+n) entries instead of mn.
  std::size_t storage_entries() const {
    return c.rows() * c.cols() + r.rows() * r.cols();
  }
};

// A = C*R with C the pivot columns of A and R the nonzero rows of rref(A).
// R contains I_r at the pivot column positions, so its rows are visibly
// independent; C's columns are independent by the pivot construction.
template <typename T>
CRFactors<T> cr_decompose(const Matrix<T>& a, const Tolerance& tol = {}) {
  auto rr = rref(a, tol);
  const std::size_t r = rr.rank();
  return CRFactors<T>{a.select_columns(rr.pivot_cols),
                      rr.r0.block(0, 0, r, a.cols()), rr.pivot_cols};
}

namespace detail {

template <typename T>
Matrix<T> null_space_from_rref(const RrefResult<T>& rr, std::size_t n) {
  const auto& piv = rr.pivot_cols;
  const auto free_cols = complement_of(piv, n);
  Matrix<T> basis(n, free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    basis(free_cols[k], k) = T(1);
    for (std::size_t i = 0; i < piv.size(); ++i)
      basis(piv[i], k) = -rr.r0(i, free_cols[k]);
  }
  return basis;
}

}  // namespace detail

// One basis vector per free column: entry 1 at the free column, the negated
// rref coefficients at the pivot positions. n x (n-r), columns independent
// by the unit entries at distinct free positions.
template <typename T>
Matrix<T> null_space_basis(const Matrix<T>& a, const Tolerance& tol = {}) {
  return detail::null_space_from_rref(rref(a, tol), a.cols());
}

template <typename T>
struct RankNormalForm {
  Matrix<T> e1;  // m x m invertible
  std::size_t core_rank = 0;
  Matrix<T> e2;  // n x n invertible

  // input == e1 * [I_r 0; 0 0] * e2
};

// Factor A = E1 * [I_r 0; 0 0] * E2. E1 undoes the row operations; E2 is the
// nonzero rref rows completed to an invertible matrix by unit rows at the
// free column positions (invertible because each row leads at a distinct
// column).
template <typename T>
RankNormalForm<T> rank_normal_form(const Matrix<T>& a,
                                   const Tolerance& tol = {}) {
  const std::size_t n = a.cols();
  auto rr = rref(a, tol);
  const std::size_t r = rr.rank();

  RankNormalForm<T> out;
  out.core_rank = r;
  out.e1 = inverse(rr.row_ops, tol);
  out.e2 = Matrix<T>(n, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) out.e2(i, j) = rr.r0(i, j);
  const auto free_cols = detail::complement_of(rr.pivot_cols, n);
  for (std::size_t k = 0; k < free_cols.size(); ++k)
    out.e2(r + k, free_cols[k]) = T(1);
  return out;
}

// Rank-equality argument through the column-row factorization: the column
// rank is the number of pivot columns; R exhibits r independent rows via its
// embedded identity, and A = C*R lets both ranks transport between A and R.
// The row rank of A is determined independently by eliminating A^T.
template <typename T>
RankReportEntry prove_rank_equality_via_cr(const Matrix<T>& a,
                                           const Tolerance& tol = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  RankReportEntry entry;
  entry.route = RankRoute::cr;

  auto cr = cr_decompose(a, tol);
  const std::size_t r = cr.rank();
  entry.col_rank = r;
  entry.row_rank = rref(a.transpose(), tol).rank();

  // R's pivot-position columns assemble I_r exactly, in both regimes.
  bool embedded_ok = cr.r.select_columns(cr.pivot_cols) ==
                     Matrix<T>::identity(r);

  auto recon = matmul(cr.c, cr.r);
  bool recon_ok;
  if constexpr (is_exact_v<T>) {
    recon_ok = recon == a;
  } else {
    const double rel = relative_residual(recon, a);
    entry.residuals.push_back({"cr_reconstruction", rel});
    recon_ok = rel <= bounds::cr_reconstruction;
  }

  entry.pass = embedded_ok && recon_ok && entry.row_rank == entry.col_rank;
  entry.timing_ms = detail::elapsed_ms(t0);
  return entry;
}

}  // namespace rankforge
