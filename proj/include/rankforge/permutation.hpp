#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include "rankforge/error.hpp"
#include "rankforge/matrix.hpp"

namespace rankforge {

// A permutation of {0..n-1} stored as an index map. With P the matrix form
// (P[map[j], j] = 1), applying to columns computes A*P and applying to rows
// computes P^T*A; the inverse of a permutation matrix is its transpose.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t v : map_) {
      if (v >= map_.size() || seen[v])
        throw PreconditionError("permutation map is not a bijection");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> map(n);
    std::iota(map.begin(), map.end(), 0);
    return Permutation(std::move(map));
  }

  std::size_t size() const { return map_.size(); }
  std::size_t operator[](std::size_t j) const { return map_[j]; }
  const std::vector<std::size_t>& map() const { return map_; }

  Permutation inverse() const {
    std::vector<std::size_t> inv(map_.size());
    for (std::size_t j = 0; j < map_.size(); ++j) inv[map_[j]] = j;
    return Permutation(std::move(inv));
  }

  // B = A*P, i.e. B[:, j] = A[:, map[j]].
  template <typename T>
  Matrix<T> apply_columns(const Matrix<T>& a) const {
    if (a.cols() != map_.size())
      throw DimensionError("column permutation size mismatch");
    return a.select_columns(map_);
  }

  // B = P^T*A, i.e. B[i, :] = A[map[i], :].
  template <typename T>
  Matrix<T> apply_rows(const Matrix<T>& a) const {
    if (a.rows() != map_.size())
      throw DimensionError("row permutation size mismatch");
    return a.select_rows(map_);
  }

  template <typename T>
  Matrix<T> to_matrix() const {
    Matrix<T> p(map_.size(), map_.size());
    for (std::size_t j = 0; j < map_.size(); ++j) p(map_[j], j) = T(1);
    return p;
  }

 private:
  std::vector<std::size_t> map_;
};

}  // namespace rankforge
