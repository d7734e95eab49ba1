#pragma once

// Aggregated verification: every rank route plus reconstruction,
// orthogonality, and triangularity checks for each factorization, folded
// into one machine-readable report.  Nothing here throws on a failed check;
// failures are report contents.  Exceptions from degenerate inputs are
// caught and recorded as a failed entry.

#include <algorithm>
#include <string>

#include "rankforge/elimination.hpp"
#include "rankforge/io.hpp"
#include "rankforge/matrix.hpp"
#include "rankforge/oracle.hpp"
#include "rankforge/orthogonalization.hpp"
#include "rankforge/report.hpp"
#include "rankforge/skeleton.hpp"
#include "rankforge/subspaces.hpp"
#include "rankforge/tolerance.hpp"
#include "rankforge/utv.hpp"

namespace rankforge {

namespace detail {

inline void require_bound(FactorCheck& check, const char* name, double value,
                          double bound) {
  check.residuals.push_back({name, value});
  check.pass = check.pass && value <= bound;
}

template <typename T>
double max_abs_diff_from_identity(const Matrix<T>& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const double d = abs_to_double(g(i, j)) - (i == j ? 1.0 : 0.0);
      worst = std::max(worst, d < 0 ? -d : d);
    }
  return worst;
}

// Root-free orthogonality: the Gram matrix is diagonal and its diagonal
// matches the stored squared lengths, all of them nonzero.
template <typename T>
bool exact_orthogonal_columns(const Matrix<T>& b,
                              const std::vector<T>& norms_sq) {
  const Matrix<T> g = matmul(b.transpose(), b);
  if (g.rows() != norms_sq.size()) return false;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    if (g(i, i) != norms_sq[i] || norms_sq[i] == T(0)) return false;
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (i != j && g(i, j) != T(0)) return false;
  }
  return true;
}

template <typename T>
bool strictly_zero_below_diagonal(const Matrix<T>& r) {
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < std::min(i, r.cols()); ++j)
      if (r(i, j) != T(0)) return false;
  return true;
}

template <typename T>
bool strictly_zero_above_diagonal(const Matrix<T>& l) {
  for (std::size_t i = 0; i < l.rows(); ++i)
    for (std::size_t j = i + 1; j < l.cols(); ++j)
      if (l(i, j) != T(0)) return false;
  return true;
}

template <typename T>
FactorCheck check_qr_factor(const Matrix<T>& a, const Tolerance& tol) {
  FactorCheck check;
  check.pass = true;
  const auto f = qr(a, FactorMode::reduced, tol);
  check.pass = check.pass && strictly_zero_below_diagonal(f.r);
  if constexpr (is_exact_v<T>) {
    check.pass = check.pass && matmul(f.q, f.r) == a;
    check.pass =
        check.pass && exact_orthogonal_columns(f.q, f.col_norms_sq);
  } else {
    require_bound(check, "reconstruction",
                  relative_residual(matmul(f.q, f.r), a),
                  bounds::qr_reconstruction);
    require_bound(check, "orthogonality",
                  max_abs_diff_from_identity(matmul(f.q.transpose(), f.q)),
                  bounds::orthogonality);
  }
  return check;
}

template <typename T>
FactorCheck check_lq_factor(const Matrix<T>& a, const Tolerance& tol) {
  FactorCheck check;
  check.pass = true;
  const auto f = lq(a, FactorMode::reduced, tol);
  check.pass = check.pass && strictly_zero_above_diagonal(f.l);
  if constexpr (is_exact_v<T>) {
    check.pass = check.pass && matmul(f.l, f.q) == a;
    check.pass = check.pass &&
                 exact_orthogonal_columns(f.q.transpose(), f.row_norms_sq);
  } else {
    require_bound(check, "reconstruction",
                  relative_residual(matmul(f.l, f.q), a),
                  bounds::lq_reconstruction);
    require_bound(check, "orthogonality",
                  max_abs_diff_from_identity(matmul(f.q, f.q.transpose())),
                  bounds::orthogonality);
  }
  return check;
}

template <typename T>
FactorCheck check_utv_factor(const Matrix<T>& a, const UTVFactors<T>& f) {
  FactorCheck check;
  check.pass = true;
  check.pass = check.pass && (f.shape == TriangularShape::lower
                                  ? strictly_zero_above_diagonal(f.t)
                                  : strictly_zero_below_diagonal(f.t));
  const Matrix<T> recon = matmul(f.u, matmul(f.t, f.v));
  if constexpr (is_exact_v<T>) {
    check.pass = check.pass && recon == a;
    check.pass =
        check.pass && exact_orthogonal_columns(f.u, f.u_col_norms_sq);
    check.pass = check.pass && exact_orthogonal_columns(f.v.transpose(),
                                                        f.v_row_norms_sq);
  } else {
    require_bound(check, "reconstruction", relative_residual(recon, a),
                  bounds::utv_reconstruction);
    require_bound(check, "u_orthogonality",
                  max_abs_diff_from_identity(matmul(f.u.transpose(), f.u)),
                  bounds::orthogonality);
    require_bound(check, "v_orthogonality",
                  max_abs_diff_from_identity(matmul(f.v, f.v.transpose())),
                  bounds::orthogonality);
  }
  return check;
}

template <typename T>
FactorCheck check_cr_factor(const Matrix<T>& a, const Tolerance& tol) {
  FactorCheck check;
  check.pass = true;
  const auto f = cr_decompose(a, tol);
  check.pass = check.pass && f.r.select_columns(f.pivot_cols) ==
                                 Matrix<T>::identity(f.rank());
  if constexpr (is_exact_v<T>) {
    check.pass = check.pass && matmul(f.c, f.r) == a;
  } else {
    require_bound(check, "reconstruction",
                  relative_residual(matmul(f.c, f.r), a),
                  bounds::cr_reconstruction);
  }
  return check;
}

template <typename T>
FactorCheck check_cur_factor(const Matrix<T>& a, const Tolerance& tol) {
  FactorCheck check;
  check.pass = true;
  const auto f = cur_decompose(a, tol);
  const Matrix<T> recon = matmul(f.c, matmul(inverse(f.u, tol), f.r));
  if constexpr (is_exact_v<T>) {
    check.pass = check.pass && recon == a;
  } else {
    require_bound(check, "reconstruction", relative_residual(recon, a),
                  bounds::cur_reconstruction);
  }
  return check;
}

template <typename T>
FactorCheck check_rankdec_factor(const Matrix<T>& a, const Tolerance& tol) {
  FactorCheck check;
  check.pass = true;
  const auto f = rank_decompose(a, tol);
  const std::size_t r = f.rank();
  check.pass = check.pass && rref(f.d, tol).rank() == r;
  check.pass = check.pass && rref(f.f, tol).rank() == r;
  if constexpr (is_exact_v<T>) {
    check.pass = check.pass && matmul(f.d, f.f) == a;
  } else {
    require_bound(check, "reconstruction",
                  relative_residual(matmul(f.d, f.f), a),
                  bounds::rank_decomposition);
  }
  return check;
}

template <typename T>
RankReportEntry oracle_route_entry(const Matrix<T>& a, const Tolerance& tol) {
  const auto t0 = std::chrono::steady_clock::now();
  RankReportEntry entry;
  entry.route = RankRoute::oracle;
  entry.col_rank = rank_oracle(a, tol);
  entry.row_rank = rank_oracle(a.transpose(), tol);
  entry.pass = entry.row_rank == entry.col_rank;
  entry.timing_ms = elapsed_ms(t0);
  return entry;
}

}  // namespace detail

// Runs the rank routes (ordered by route name; the minor oracle only when
// min(m, n) <= 8) and the per-factorization checks, then folds everything
// into one report.  overall is the conjunction of every pass flag.
template <typename T>
VerificationReport verify_all(const Matrix<T>& a, const Tolerance& tol = {}) {
  VerificationReport report;
  report.input_digest = matrix_digest(a);
  report.mode = regime_name<T>();
  report.rows = a.rows();
  report.cols = a.cols();

  const auto run_route = [&](RankRoute route, auto&& prove) {
    try {
      report.entries.push_back(prove());
    } catch (const Error&) {
      RankReportEntry failed;
      failed.route = route;
      failed.pass = false;
      report.entries.push_back(failed);
    }
  };
  run_route(RankRoute::cr, [&] { return prove_rank_equality_via_cr(a, tol); });
  run_route(RankRoute::elementary,
            [&] { return prove_rank_equality_elementary(a, tol); });
  if (std::min(a.rows(), a.cols()) <= 8)
    run_route(RankRoute::oracle,
              [&] { return detail::oracle_route_entry(a, tol); });
  run_route(RankRoute::ulv, [&] { return prove_rank_equality_via_ulv(a, tol); });

  const auto run_factor = [&](const char* name, auto&& make_check) {
    try {
      report.factor_checks[name] = make_check();
    } catch (const Error&) {
      report.factor_checks[name] = FactorCheck{};
    }
  };
  if (a.rows() >= a.cols())
    run_factor("qr", [&] { return detail::check_qr_factor(a, tol); });
  if (a.cols() >= a.rows())
    run_factor("lq", [&] { return detail::check_lq_factor(a, tol); });
  run_factor("ulv", [&] { return detail::check_utv_factor(a, ulv(a, tol)); });
  run_factor("urv", [&] { return detail::check_utv_factor(a, urv(a, tol)); });
  run_factor("cr", [&] { return detail::check_cr_factor(a, tol); });
  run_factor("cur", [&] { return detail::check_cur_factor(a, tol); });
  run_factor("rankdec", [&] { return detail::check_rankdec_factor(a, tol); });

  report.overall = true;
  for (const auto& entry : report.entries)
    report.overall = report.overall && entry.pass;
  for (const auto& [name, check] : report.factor_checks)
    report.overall = report.overall && check.pass;
  return report;
}

}  // namespace rankforge
