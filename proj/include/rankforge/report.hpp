#pragma once

#include <map>
#include <string>
#include <vector>

namespace rankforge {

// Float-regime acceptance bounds. Reconstruction bounds are relative to the
// Frobenius norm of the input; orthogonality is a max-entry bound on
// Q^T*Q - I. Exact mode replaces all of them with equality checks.
namespace bounds {
inline constexpr double qr_reconstruction = 1e-10;
inline constexpr double lq_reconstruction = 1e-10;
inline constexpr double utv_reconstruction = 1e-9;
inline constexpr double cur_reconstruction = 1e-9;
inline constexpr double cr_reconstruction = 1e-10;
inline constexpr double rank_decomposition = 1e-9;
inline constexpr double orthogonality = 1e-10;
}  // namespace bounds

// Independent computational routes that determine row and column rank.
enum class RankRoute { cr, elementary, oracle, ulv };

inline const char* route_name(RankRoute r) {
  switch (r) {
    case RankRoute::cr: return "cr";
    case RankRoute::elementary: return "elementary";
    case RankRoute::oracle: return "oracle";
    case RankRoute::ulv: return "ulv";
  }
  return "?";
}

struct NamedResidual {
  std::string name;
  double value = 0.0;
};

// Outcome of one route: both ranks, whether every intermediate check held,
// float-regime residuals (empty in exact mode), wall time.
struct RankReportEntry {
  RankRoute route = RankRoute::cr;
  std::size_t row_rank = 0;
  std::size_t col_rank = 0;
  bool pass = false;
  std::vector<NamedResidual> residuals;
  double timing_ms = 0.0;
};

struct FactorCheck {
  bool pass = false;
  std::vector<NamedResidual> residuals;
};

struct VerificationReport {
  std::string input_digest;
  std::string mode;  // "exact" or "float"
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<RankReportEntry> entries;          // ordered by route name
  std::map<std::string, FactorCheck> factor_checks;
  bool overall = false;
};

}  // namespace rankforge
