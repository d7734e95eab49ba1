#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "rankforge/elimination.hpp"
#include "rankforge/error.hpp"
#include "rankforge/matrix.hpp"
#include "rankforge/orthogonalization.hpp"
#include "rankforge/report.hpp"
#include "rankforge/tolerance.hpp"

namespace rankforge {

// Bases of the four fundamental subspaces, each as a full-column-rank block:
// column space (m x r), row space (n x r), null space (n x (n-r)), left null
// space (m x (m-r)). Dimensions pair up to n and m by construction.
template <typename T>
struct SubspaceBases {
  Matrix<T> col_basis;
  Matrix<T> row_basis;
  Matrix<T> null_basis;
  Matrix<T> left_null_basis;
  std::size_t rank = 0;
};

namespace detail {

// Nonzero rref rows, transposed into columns: the canonical row-space basis.
template <typename T>
Matrix<T> row_basis_from_rref(const RrefResult<T>& rr, std::size_t n) {
  const std::size_t r = rr.rank();
  Matrix<T> basis(n, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) basis(j, i) = rr.r0(i, j);
  return basis;
}

}  // namespace detail

template <typename T>
SubspaceBases<T> four_subspaces(const Matrix<T>& a, const Tolerance& tol = {}) {
  auto rr = rref(a, tol);
  SubspaceBases<T> out;
  out.rank = rr.rank();
  out.col_basis = a.select_columns(rr.pivot_cols);
  out.row_basis = detail::row_basis_from_rref(rr, a.cols());
  out.null_basis = detail::null_space_from_rref(rr, a.cols());
  out.left_null_basis = null_space_basis(a.transpose(), tol);
  return out;
}

// Carry a row-space basis into the column space: the images A*r_1 .. A*r_r
// stay independent, exhibiting r independent vectors inside C(A). The input
// is verified to actually be a row-space basis (full rank, every column a
// residual-free projection onto the canonical row space).
template <typename T>
Matrix<T> transport_row_basis(const Matrix<T>& a, const Matrix<T>& row_basis,
                              const Tolerance& tol = {}) {
  if (row_basis.rows() != a.cols())
    throw DimensionError("row basis height must match the column count");
  auto rr = rref(a, tol);
  const std::size_t r = rr.rank();
  if (row_basis.cols() != r)
    throw PreconditionError("row basis has " +
                            std::to_string(row_basis.cols()) +
                            " columns, rank is " + std::to_string(r));
  if (rref(row_basis, tol).rank() != r)
    throw PreconditionError("row basis columns are dependent");

  auto canonical = detail::row_basis_from_rref(rr, a.cols());
  const double scale = max_abs(row_basis);
  for (std::size_t j = 0; j < row_basis.cols(); ++j) {
    auto fit = project_onto_subspace(row_basis.column(j), canonical, tol);
    for (std::size_t i = 0; i < fit.residual.rows(); ++i)
      if (!tol.is_zero(fit.residual(i, 0), scale))
        throw PreconditionError("column " + std::to_string(j) +
                                " is outside the row space");
  }

  auto images = matmul(a, row_basis);
  if (rref(images, tol).rank() != r)
    throw Error("transported basis lost independence");
  if (rref(hcat(images, a.select_columns(rr.pivot_cols)), tol).rank() != r)
    throw Error("transported basis does not span the column space");
  return images;
}

template <typename T>
struct SplitVector {
  Matrix<T> row_component;   // x_r, in C(A^T)
  Matrix<T> null_component;  // x_n, in N(A)
};

// x = x_r + x_n with x_r the projection onto the row space; A annihilates
// x_n, so A*x == A*x_r.
template <typename T>
SplitVector<T> split_vector(const Matrix<T>& a, const Matrix<T>& x,
                            const Tolerance& tol = {}) {
  if (x.rows() != a.cols() || x.cols() != 1)
    throw DimensionError("split expects a column vector of length " +
                         std::to_string(a.cols()));
  auto rr = rref(a, tol);
  if (rr.rank() == 0) return {Matrix<T>(a.cols(), 1), x};

  auto basis = detail::row_basis_from_rref(rr, a.cols());
  auto fit = project_onto_subspace(x, basis, tol);
  SplitVector<T> out{fit.projection, x - fit.projection};

  if constexpr (is_exact_v<T>) {
    if (!is_zero_matrix(matmul(a, out.null_component)))
      throw Error("null component escaped the null space");
    if (matmul(a, x) != matmul(a, out.row_component))
      throw Error("row component changed the image");
  }
  return out;
}

// The elementary route: read the row rank off rref(A) (count of nonzero
// rows), transport that basis through A and confirm the images stay
// independent, which exhibits row-rank many independent columns. The same
// argument on A^T bounds the ranks the other way; together they force
// equality.
template <typename T>
RankReportEntry prove_rank_equality_elementary(const Matrix<T>& a,
                                               const Tolerance& tol = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  RankReportEntry entry;
  entry.route = RankRoute::elementary;

  auto count_nonzero_rows = [](const Matrix<T>& m) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!(m(i, j) == T(0))) {
          ++count;
          break;
        }
    return count;
  };

  auto rr = rref(a, tol);
  auto rrt = rref(a.transpose(), tol);
  const std::size_t row_rank = count_nonzero_rows(rr.r0);
  const std::size_t col_rank = count_nonzero_rows(rrt.r0);
  entry.row_rank = row_rank;
  entry.col_rank = col_rank;

  // row_rank independent vectors survive transport through A, landing in
  // C(A): row_rank <= col_rank. Dually through A^T.
  auto row_images = matmul(a, detail::row_basis_from_rref(rr, a.cols()));
  auto col_images =
      matmul(a.transpose(), detail::row_basis_from_rref(rrt, a.rows()));
  const bool forward = rref(row_images, tol).rank() == row_rank &&
                       row_rank <= col_rank;
  const bool backward = rref(col_images, tol).rank() == col_rank &&
                        col_rank <= row_rank;

  entry.pass = forward && backward && row_rank == col_rank;
  entry.timing_ms = detail::elapsed_ms(t0);
  return entry;
}

}  // namespace rankforge
