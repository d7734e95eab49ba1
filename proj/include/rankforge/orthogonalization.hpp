#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rankforge/elimination.hpp"
#include "rankforge/error.hpp"
#include "rankforge/matrix.hpp"
#include "rankforge/tolerance.hpp"

// Orthogonalization without square roots in the exact regime: the rationals
// are not closed under sqrt, so exact-mode factors keep orthogonal but
// unnormalized columns (their squared lengths travel alongside) and every
// invariant is stated root-free: pairwise inner products are exactly zero
// and reconstruction holds with a rational coefficient matrix. The float
// regime normalizes conventionally.

namespace rankforge {

enum class FactorMode { reduced, full };

template <typename T>
struct ProjectionResult {
  Matrix<T> coefficients;  // 1x1 for a line, rx1 for a subspace
  Matrix<T> projection;
  Matrix<T> residual;  // orthogonal to the projection target
};

// Projection of a onto the line through b: coefficient a.b / b.b.
template <typename T>
ProjectionResult<T> project_onto_vector(const Matrix<T>& a,
                                        const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != 1 || b.cols() != 1)
    throw DimensionError("project_onto_vector expects two equal-length "
                         "column vectors");
  if (is_zero_matrix(b))
    throw PreconditionError("cannot project onto the zero vector");
  const T xhat = dot(a, b) / dot(b, b);
  auto proj = xhat * b;
  return {Matrix<T>{{xhat}}, proj, a - proj};
}

// Projection onto the column span of basis via the normal equations
// (B^T B) x = B^T a. The Gram matrix is invertible because the basis
// columns are verified independent first.
template <typename T>
ProjectionResult<T> project_onto_subspace(const Matrix<T>& a,
                                          const Matrix<T>& basis,
                                          const Tolerance& tol = {}) {
  if (a.rows() != basis.rows() || a.cols() != 1)
    throw DimensionError("project_onto_subspace expects a column vector "
                         "matching the basis height");
  const std::size_t computed = rref(basis, tol).rank();
  if (computed != basis.cols())
    throw PreconditionError(
        "projection basis has dependent columns: rank " +
        std::to_string(computed) + " of " + std::to_string(basis.cols()));
  if (basis.cols() == 0)
    return {Matrix<T>(0, 1), Matrix<T>(a.rows(), 1), a};
  auto bt = basis.transpose();
  auto xhat = solve_linear(matmul(bt, basis), matmul(bt, a), tol);
  auto proj = matmul(basis, xhat);
  return {xhat, proj, a - proj};
}

namespace detail {

template <typename T>
std::vector<T> matrix_column_vec(const Matrix<T>& a, std::size_t j) {
  std::vector<T> v(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) v[i] = a(i, j);
  return v;
}

template <typename T>
T dot_vec(const std::vector<T>& x, const std::vector<T>& y) {
  T acc(0);
  for (std::size_t i = 0; i < x.size(); ++i) acc = acc + x[i] * y[i];
  return acc;
}

// One classical Gram-Schmidt pass: all coefficients are measured before any
// subtraction. A single pass leaves an exactly orthogonal residual in exact
// arithmetic; float callers run a second pass below.
template <typename T>
std::vector<T> remove_components(std::vector<T>& v,
                                 const std::vector<std::vector<T>>& family,
                                 const std::vector<T>& norms_sq) {
  std::vector<T> c(family.size());
  for (std::size_t i = 0; i < family.size(); ++i)
    c[i] = dot_vec(family[i], v) / norms_sq[i];
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] = v[k] - c[i] * family[i][k];
  return c;
}

template <typename T>
std::vector<T> orthogonalize_against(std::vector<T>& v,
                                     const std::vector<std::vector<T>>& family,
                                     const std::vector<T>& norms_sq) {
  auto c = remove_components(v, family, norms_sq);
  if constexpr (!is_exact_v<T>) {
    // Re-orthogonalization pass; the correction folds into the coefficients.
    auto d = remove_components(v, family, norms_sq);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = c[i] + d[i];
  }
  return c;
}

template <typename T>
bool vector_is_zero(const std::vector<T>& v, const Tolerance& tol,
                    double scale) {
  for (const T& x : v)
    if (!tol.is_zero(x, scale)) return false;
  return true;
}

}  // namespace detail

template <typename T>
struct GramSchmidtResult {
  Matrix<T> basis;         // m x r; float: orthonormal, exact: orthogonal
  Matrix<T> coefficients;  // r x n with input == basis * coefficients
  std::vector<std::size_t> kept;  // input positions that produced a vector
  std::vector<T> norms_sq;        // squared column lengths of basis
};

// Classical Gram-Schmidt over the input columns, left to right. Dependent
// columns leave a zero residual: they are recorded in coefficients (their
// expansion over the earlier vectors) but contribute no basis column.
template <typename T>
GramSchmidtResult<T> gram_schmidt(const Matrix<T>& a,
                                  const Tolerance& tol = {}) {
  const std::size_t m = a.rows(), n = a.cols();
  const double scale = max_abs(a);

  std::vector<std::vector<T>> family;
  std::vector<T> norms_sq;
  std::vector<std::size_t> kept;
  std::vector<std::vector<T>> col_coeffs(n);

  for (std::size_t j = 0; j < n; ++j) {
    auto v = detail::matrix_column_vec(a, j);
    auto c = detail::orthogonalize_against(v, family, norms_sq);
    if (detail::vector_is_zero(v, tol, scale)) {
      col_coeffs[j] = std::move(c);
      continue;
    }
    if constexpr (is_exact_v<T>) {
      norms_sq.push_back(detail::dot_vec(v, v));
      c.push_back(T(1));
    } else {
      const T len = std::sqrt(detail::dot_vec(v, v));
      for (T& x : v) x = x / len;
      norms_sq.push_back(T(1));
      c.push_back(len);
    }
    family.push_back(std::move(v));
    kept.push_back(j);
    col_coeffs[j] = std::move(c);
  }

  const std::size_t r = family.size();
  GramSchmidtResult<T> out;
  out.basis = Matrix<T>(m, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < m; ++k) out.basis(k, i) = family[i][k];
  out.coefficients = Matrix<T>(r, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < col_coeffs[j].size(); ++i)
      out.coefficients(i, j) = col_coeffs[j][i];
  out.kept = std::move(kept);
  out.norms_sq = std::move(norms_sq);
  return out;
}

template <typename T>
struct QRFactors {
  Matrix<T> q;  // m x n reduced, m x m full
  Matrix<T> r;  // n x n reduced, m x n full; upper triangular
  FactorMode mode = FactorMode::reduced;
  std::vector<T> col_norms_sq;  // squared lengths of q's columns
};

template <typename T>
struct LQFactors {
  Matrix<T> l;  // lower triangular
  Matrix<T> q;  // orthonormal (float) / orthogonal (exact) rows
  FactorMode mode = FactorMode::reduced;
  std::vector<T> row_norms_sq;  // squared lengths of q's rows
};

// QR through the Gram-Schmidt pass. Q's column j corresponds to input
// column j; a dependent input column gets a replacement direction drawn
// from the canonical basis (processed through the same pass, dependents
// skipped) and a zero row in R, so A == Q*R still holds and the zero on
// R's diagonal flags the deficiency. Full mode appends further such
// columns as silent columns, with silent zero rows in R.
template <typename T>
QRFactors<T> qr(const Matrix<T>& a, FactorMode mode = FactorMode::reduced,
                const Tolerance& tol = {}) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n)
    throw DimensionError("qr expects rows >= cols, got " + a.shape_string() +
                         "; factor the transpose with lq");
  const double scale = max_abs(a);

  std::vector<std::vector<T>> family;  // kept vectors, then fillers
  std::vector<T> norms_sq;
  std::vector<std::ptrdiff_t> basis_of_pos(n, -1);
  std::vector<std::size_t> pos_of_basis;
  std::vector<std::vector<T>> col_coeffs(n);

  for (std::size_t j = 0; j < n; ++j) {
    auto v = detail::matrix_column_vec(a, j);
    auto c = detail::orthogonalize_against(v, family, norms_sq);
    if (detail::vector_is_zero(v, tol, scale)) {
      col_coeffs[j] = std::move(c);
      continue;
    }
    if constexpr (is_exact_v<T>) {
      norms_sq.push_back(detail::dot_vec(v, v));
      c.push_back(T(1));
    } else {
      const T len = std::sqrt(detail::dot_vec(v, v));
      for (T& x : v) x = x / len;
      norms_sq.push_back(T(1));
      c.push_back(len);
    }
    family.push_back(std::move(v));
    basis_of_pos[j] = static_cast<std::ptrdiff_t>(family.size()) - 1;
    pos_of_basis.push_back(j);
    col_coeffs[j] = std::move(c);
  }

  const std::size_t rank = family.size();
  const std::size_t q_cols = (mode == FactorMode::full) ? m : n;

  // Completion stream: canonical basis vectors orthogonalized against
  // everything accepted so far. The complement of a rank-r subspace meets
  // enough of them to fill q_cols - rank slots.
  for (std::size_t k = 0; k < m && family.size() < q_cols; ++k) {
    std::vector<T> v(m, T(0));
    v[k] = T(1);
    detail::orthogonalize_against(v, family, norms_sq);
    if (detail::vector_is_zero(v, tol, 1.0)) continue;
    if constexpr (is_exact_v<T>) {
      norms_sq.push_back(detail::dot_vec(v, v));
    } else {
      const T len = std::sqrt(detail::dot_vec(v, v));
      for (T& x : v) x = x / len;
      norms_sq.push_back(T(1));
    }
    family.push_back(std::move(v));
  }

  QRFactors<T> out;
  out.mode = mode;
  out.q = Matrix<T>(m, q_cols);
  out.col_norms_sq.resize(q_cols);
  std::size_t next_filler = rank;
  for (std::size_t j = 0; j < q_cols; ++j) {
    const std::size_t src =
        (j < n && basis_of_pos[j] >= 0)
            ? static_cast<std::size_t>(basis_of_pos[j])
            : next_filler++;
    for (std::size_t i = 0; i < m; ++i) out.q(i, j) = family[src][i];
    out.col_norms_sq[j] = norms_sq[src];
  }

  out.r = Matrix<T>(q_cols, n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < col_coeffs[l].size(); ++i)
      out.r(pos_of_basis[i], l) = col_coeffs[l][i];
  return out;
}

// LQ of a wide matrix is the QR of its transpose, transposed back.
template <typename T>
LQFactors<T> lq(const Matrix<T>& a, FactorMode mode = FactorMode::reduced,
                const Tolerance& tol = {}) {
  if (a.cols() < a.rows())
    throw DimensionError("lq expects cols >= rows, got " + a.shape_string() +
                         "; factor the transpose with qr");
  auto f = qr(a.transpose(), mode, tol);
  return LQFactors<T>{f.r.transpose(), f.q.transpose(), mode,
                      std::move(f.col_norms_sq)};
}

// Display-time normalization for exact-mode factors: columns divided by the
// square root of their stored squared length, leaving the rationals only
// here at the boundary.
template <typename T>
Matrix<double> normalized_columns_display(const Matrix<T>& q,
                                          const std::vector<T>& norms_sq) {
  Matrix<double> out(q.rows(), q.cols());
  for (std::size_t j = 0; j < q.cols(); ++j) {
    const double len = std::sqrt(to_double(norms_sq[j]));
    for (std::size_t i = 0; i < q.rows(); ++i)
      out(i, j) = len == 0.0 ? 0.0 : to_double(q(i, j)) / len;
  }
  return out;
}

}  // namespace rankforge
