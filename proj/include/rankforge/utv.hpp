#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "rankforge/elimination.hpp"
#include "rankforge/error.hpp"
#include "rankforge/matrix.hpp"
#include "rankforge/orthogonalization.hpp"
#include "rankforge/permutation.hpp"
#include "rankforge/report.hpp"
#include "rankforge/tolerance.hpp"

namespace rankforge {

enum class TriangularShape { lower, upper };

// Where the triangular core lands when collapsing U*T*V to two factors:
// absorb_left gives D = U0*L, F = V0; absorb_right gives D = U0, F = L*V0.
enum class RankDecompSplit { absorb_left, absorb_right };

// A = U * T * V with orthogonal U (columns) and V (rows), and T zero except
// for an r x r triangular leading block. Exact mode follows the root-free
// convention: U^T U and V V^T are diagonal with the recorded squared
// lengths; float mode has both equal to the identity.
template <typename T>
struct UTVFactors {
  Matrix<T> u;  // m x m
  Matrix<T> t;  // m x n
  Matrix<T> v;  // n x n
  std::size_t rank = 0;
  TriangularShape shape = TriangularShape::lower;
  std::vector<T> u_col_norms_sq;
  std::vector<T> v_row_norms_sq;

  Matrix<T> reduced_u() const { return u.block(0, 0, u.rows(), rank); }
  Matrix<T> reduced_v() const { return v.block(0, 0, rank, v.cols()); }
  Matrix<T> core() const { return t.block(0, 0, rank, rank); }
};

// ULV in four moves: (1) permute the rref pivot columns to the front, so
// A*P = [Z | Z*E] = Z*[I E]; (2) full QR of Z giving Z = U*[S; 0]; (3) form
// S*E, from the rref coefficients (exact) or as the top of U^T applied to
// the non-pivot columns (float); (4) full LQ of [S S*E] giving [L 0]*V0.
// Then A = U * [L 0; 0 0] * V0*P^T. Everything outside the core block of T
// is assigned zero, never computed.
template <typename T>
UTVFactors<T> ulv(const Matrix<T>& a, const Tolerance& tol = {}) {
  const std::size_t m = a.rows(), n = a.cols();
  auto rr = rref(a, tol);
  const std::size_t r = rr.rank();
  const auto nonpivots = detail::complement_of(rr.pivot_cols, n);

  std::vector<std::size_t> order = rr.pivot_cols;
  order.insert(order.end(), nonpivots.begin(), nonpivots.end());
  Permutation perm(order);

  auto z = a.select_columns(rr.pivot_cols);  // m x r, full column rank
  auto zq = qr(z, FactorMode::full, tol);
  auto s = zq.r.block(0, 0, r, r);

  Matrix<T> se(r, n - r);
  if constexpr (is_exact_v<T>) {
    // The rref already expresses each non-pivot column over the pivots.
    Matrix<T> e(r, n - r);
    for (std::size_t k = 0; k < nonpivots.size(); ++k)
      for (std::size_t i = 0; i < r; ++i) e(i, k) = rr.r0(i, nonpivots[k]);
    se = matmul(s, e);
  } else {
    // The non-pivot columns lie in the span of U's leading columns, so S*E
    // is the top of U^T applied to them; rows r..m-1 vanish up to roundoff
    // and are truncated. Solving for E itself would square the conditioning.
    se = matmul(zq.q.transpose(), a.select_columns(nonpivots))
             .block(0, 0, r, n - r);
  }
  auto lf = lq(hcat(s, se), FactorMode::full, tol);

  UTVFactors<T> out;
  out.rank = r;
  out.shape = TriangularShape::lower;
  out.u = std::move(zq.q);
  out.t = Matrix<T>(m, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j <= i; ++j) out.t(i, j) = lf.l(i, j);
  out.v = perm.inverse().apply_columns(lf.q);
  out.u_col_norms_sq = std::move(zq.col_norms_sq);
  out.v_row_norms_sq = std::move(lf.row_norms_sq);
  return out;
}

// URV is the ULV of the transpose, transposed back with the roles of U and
// V exchanged; the row permutation the dual proof asks for is the column
// permutation acting on A^T.
template <typename T>
UTVFactors<T> urv(const Matrix<T>& a, const Tolerance& tol = {}) {
  auto f = ulv(a.transpose(), tol);
  UTVFactors<T> out;
  out.rank = f.rank;
  out.shape = TriangularShape::upper;
  out.u = f.v.transpose();
  out.t = f.t.transpose();
  out.v = f.u.transpose();
  out.u_col_norms_sq = std::move(f.v_row_norms_sq);
  out.v_row_norms_sq = std::move(f.u_col_norms_sq);
  return out;
}

template <typename T>
struct RankDecompFactors {
  Matrix<T> d;  // m x r, full column rank
  Matrix<T> f;  // r x n, full row rank

  std::size_t rank() const { return d.cols(); }
  // r(m+n) entries instead of mn.
  std::size_t storage_entries() const {
    return d.rows() * d.cols() + f.rows() * f.cols();
  }
};

// Collapse U0 * L * V0 into two full-rank factors; both associativity
// choices are legitimate and produce different (related) factors.
template <typename T>
RankDecompFactors<T> rank_decompose(
    const Matrix<T>& a, const Tolerance& tol = {},
    RankDecompSplit split = RankDecompSplit::absorb_left) {
  auto f = ulv(a, tol);
  if (split == RankDecompSplit::absorb_left)
    return {matmul(f.reduced_u(), f.core()), f.reduced_v()};
  return {f.reduced_u(), matmul(f.core(), f.reduced_v())};
}

// Any two rank decompositions D1*F1 == D2*F2 of one matrix are linked by a
// nonsingular P = F2*F1^T*(F1*F1^T)^{-1} with D1 == D2*P and F1 == P^{-1}*F2;
// both identities are verified before returning.
template <typename T>
Matrix<T> connect_rank_decompositions(const Matrix<T>& d1, const Matrix<T>& f1,
                                      const Matrix<T>& d2, const Matrix<T>& f2,
                                      const Tolerance& tol = {}) {
  if (d1.cols() != f1.rows() || d2.cols() != f2.rows() ||
      d1.rows() != d2.rows() || f1.cols() != f2.cols())
    throw DimensionError("factor shapes do not compose");
  const std::size_t r = d1.cols();
  if (d2.cols() != r)
    throw PreconditionError("rank decompositions of one matrix must share "
                            "the same inner dimension");

  auto same = [&](const Matrix<T>& x, const Matrix<T>& y) {
    if constexpr (is_exact_v<T>) return x == y;
    else return relative_residual(x, y) <= bounds::rank_decomposition;
  };
  if (!same(matmul(d1, f1), matmul(d2, f2)))
    throw PreconditionError("factor pairs do not multiply to the same matrix");

  const struct {
    const Matrix<T>* mat;
    std::size_t want;
    const char* name;
  } checks[] = {{&d1, r, "d1"}, {&f1, r, "f1"}, {&d2, r, "d2"}, {&f2, r, "f2"}};
  for (const auto& c : checks)
    if (rref(*c.mat, tol).rank() != c.want)
      throw PreconditionError(std::string("factor ") + c.name +
                              " is not full rank");

  auto f1t = f1.transpose();
  auto p = matmul(f2, matmul(f1t, inverse(matmul(f1, f1t), tol)));

  if (!same(d1, matmul(d2, p)) || !same(f1, matmul(inverse(p, tol), f2)))
    throw Error("connection matrix failed its defining identities");
  return p;
}

// The middle-factor route to rank equality: B = U^T*A*V^T shares both ranks
// with A (orthogonal factors are invertible), and B's block structure makes
// rank(B) == rank(B^T) readable. Each rank below is an independent rref.
template <typename T>
RankReportEntry prove_rank_equality_via_ulv(const Matrix<T>& a,
                                            const Tolerance& tol = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  RankReportEntry entry;
  entry.route = RankRoute::ulv;

  auto f = ulv(a, tol);
  const std::size_t r = f.rank;
  const double scale = max_abs(a);

  bool structure_ok = true;
  for (std::size_t i = 0; i < f.t.rows() && structure_ok; ++i)
    for (std::size_t j = 0; j < f.t.cols(); ++j)
      if ((i >= r || j >= r || j > i) && !(f.t(i, j) == T(0))) {
        structure_ok = false;
        break;
      }
  for (std::size_t i = 0; i < r; ++i)
    if (tol.is_zero(f.t(i, i), scale)) structure_ok = false;

  auto middle = matmul(f.u.transpose(), matmul(a, f.v.transpose()));
  const std::size_t rank_a = rref(a, tol).rank();
  const std::size_t rank_ua = rref(matmul(f.u.transpose(), a), tol).rank();
  const std::size_t rank_mid = rref(middle, tol).rank();
  const std::size_t rank_mid_t = rref(middle.transpose(), tol).rank();
  const std::size_t rank_at = rref(a.transpose(), tol).rank();

  entry.col_rank = rank_a;
  entry.row_rank = rank_mid_t;

  bool recon_ok;
  if constexpr (is_exact_v<T>) {
    recon_ok = matmul(f.u, matmul(f.t, f.v)) == a;
  } else {
    const double rel = relative_residual(matmul(f.u, matmul(f.t, f.v)), a);
    entry.residuals.push_back({"ulv_reconstruction", rel});
    recon_ok = rel <= bounds::utv_reconstruction;
  }

  entry.pass = structure_ok && recon_ok && rank_a == r && rank_ua == r &&
               rank_mid == r && rank_mid_t == r && rank_at == r;
  entry.timing_ms = detail::elapsed_ms(t0);
  return entry;
}

}  // namespace rankforge
