#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rankforge/elimination.hpp"
#include "rankforge/error.hpp"
#include "rankforge/matrix.hpp"
#include "rankforge/tolerance.hpp"

namespace rankforge {

// Skeleton factors: C and R are rows/columns of A copied verbatim, U is the
// r x r submatrix on their intersection, and A == C * U^{-1} * R.
template <typename T>
struct CURFactors {
  Matrix<T> c;  // m x r, A[:, J]
  Matrix<T> u;  // r x r, A[I, J], nonsingular
  Matrix<T> r;  // r x n, A[I, :]
  std::vector<std::size_t> row_idx;  // I, ascending
  std::vector<std::size_t> col_idx;  // J, ascending

  std::size_t rank() const { return col_idx.size(); }
};

// First r independent columns, greedily: exactly the rref pivot set.
template <typename T>
std::vector<std::size_t> select_independent_columns(const Matrix<T>& a,
                                                    const Tolerance& tol = {}) {
  return rref(a, tol).pivot_cols;
}

template <typename T>
std::vector<std::size_t> select_independent_rows(const Matrix<T>& a,
                                                 const Tolerance& tol = {}) {
  return rref(a.transpose(), tol).pivot_cols;
}

// Two-stage selection mirroring the constructive argument: pick independent
// columns J of A, then independent rows I of N = A[:, J]. N's full column
// rank makes N[I, :] = A[I, J] = U square and nonsingular by construction.
// For rank 0 every factor is empty and the empty product is the zero matrix.
template <typename T>
CURFactors<T> cur_decompose(const Matrix<T>& a, const Tolerance& tol = {}) {
  CURFactors<T> out;
  out.col_idx = select_independent_columns(a, tol);
  auto n = a.select_columns(out.col_idx);
  out.row_idx = select_independent_rows(n, tol);
  out.c = std::move(n);
  out.r = a.select_rows(out.row_idx);
  out.u = a.submatrix(out.row_idx, out.col_idx);

  if constexpr (is_exact_v<T>) {
    // Per-column identity from the existence proof: a_i == C * U^{-1} * r_i.
    auto cui = matmul(out.c, inverse(out.u, tol));
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (matmul(cui, out.r.column(j)) != a.column(j))
        throw Error("skeleton reconstruction failed at column " +
                    std::to_string(j));
  }
  return out;
}

template <typename T>
struct IntersectionWitness {
  bool invertible = false;
  Matrix<T> u;          // A[I, J]
  Matrix<T> u_inverse;  // empty unless invertible
};

// Validates an arbitrary selection (I, J) against the intersection
// invertibility claim: whenever |I| == |J| == rank(A) with A[I,:] of full
// row rank and A[:,J] of full column rank, A[I,J] must be invertible. A
// false return with valid preconditions would disprove the claim (i.e.
// expose a bug), so callers may treat it as fatal.
template <typename T>
IntersectionWitness<T> check_intersection_invertible(
    const Matrix<T>& a, const std::vector<std::size_t>& row_idx,
    const std::vector<std::size_t>& col_idx, const Tolerance& tol = {}) {
  const std::size_t r = rref(a, tol).rank();
  if (row_idx.size() != r || col_idx.size() != r)
    throw PreconditionError(
        "selection sizes (" + std::to_string(row_idx.size()) + ", " +
        std::to_string(col_idx.size()) + ") do not match rank " +
        std::to_string(r));
  for (std::size_t i : row_idx)
    if (i >= a.rows()) throw PreconditionError("row index out of range");
  for (std::size_t j : col_idx)
    if (j >= a.cols()) throw PreconditionError("column index out of range");

  const std::size_t col_rank = rref(a.select_columns(col_idx), tol).rank();
  if (col_rank != r)
    throw PreconditionError("selected columns have rank " +
                            std::to_string(col_rank) + ", need " +
                            std::to_string(r));
  const std::size_t row_rank = rref(a.select_rows(row_idx), tol).rank();
  if (row_rank != r)
    throw PreconditionError("selected rows have rank " +
                            std::to_string(row_rank) + ", need " +
                            std::to_string(r));

  IntersectionWitness<T> out;
  out.u = a.submatrix(row_idx, col_idx);
  try {
    out.u_inverse = inverse(out.u, tol);
    out.invertible = true;
  } catch (const SingularMatrixError&) {
    out.invertible = false;
  }
  return out;
}

}  // namespace rankforge
