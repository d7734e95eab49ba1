#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rankforge/error.hpp"
#include "rankforge/scalar.hpp"

namespace rankforge {

// Dense row-major matrix. Dimensions are fixed at construction; any of them
// may be zero (a 0xN or Nx0 matrix is a legitimate value, e.g. the basis of
// a trivial subspace). Indexing is assert-checked, shape mismatches between
// operands throw DimensionError.
template <typename T>
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  Matrix(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> init)
      : rows_(init.size()), cols_(rows_ ? init.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_)
        throw DimensionError("matrix initializer has ragged rows");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = T(1);
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  Matrix block(std::size_t i0, std::size_t j0, std::size_t nr,
               std::size_t nc) const {
    assert(i0 + nr <= rows_ && j0 + nc <= cols_);
    Matrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(i0 + i, j0 + j);
    return out;
  }

  Matrix column(std::size_t j) const { return block(0, j, rows_, 1); }
  Matrix row(std::size_t i) const { return block(i, 0, 1, cols_); }

  Matrix select_columns(const std::vector<std::size_t>& idx) const {
    Matrix out(rows_, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      assert(idx[k] < cols_);
      for (std::size_t i = 0; i < rows_; ++i) out(i, k) = (*this)(i, idx[k]);
    }
    return out;
  }

  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix out(idx.size(), cols_);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      assert(idx[k] < rows_);
      for (std::size_t j = 0; j < cols_; ++j) out(k, j) = (*this)(idx[k], j);
    }
    return out;
  }

  // A[I, J] for explicit index sets, in the given order.
  Matrix submatrix(const std::vector<std::size_t>& row_idx,
                   const std::vector<std::size_t>& col_idx) const {
    Matrix out(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i)
      for (std::size_t j = 0; j < col_idx.size(); ++j) {
        assert(row_idx[i] < rows_ && col_idx[j] < cols_);
        out(i, j) = (*this)(row_idx[i], col_idx[j]);
      }
    return out;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    assert(a < rows_ && b < rows_);
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j)
      std::swap(data_[a * cols_ + j], data_[b * cols_ + j]);
  }

  Matrix operator+(const Matrix& o) const {
    require_same_shape(o, "+");
    Matrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k)
      out.data_[k] = data_[k] + o.data_[k];
    return out;
  }

  Matrix operator-(const Matrix& o) const {
    require_same_shape(o, "-");
    Matrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k)
      out.data_[k] = data_[k] - o.data_[k];
    return out;
  }

  Matrix operator-() const {
    Matrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = -data_[k];
    return out;
  }

  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix out(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.data_.size(); ++k)
      out.data_[k] = s * a.data_[k];
    return out;
  }

  std::string shape_string() const {
    std::ostringstream os;
    os << rows_ << "x" << cols_;
    return os.str();
  }

 private:
  void require_same_shape(const Matrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionError(std::string("shape mismatch for '") + op + "': " +
                           shape_string() + " vs " + o.shape_string());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matmul shape mismatch: " + a.shape_string() + " * " +
                         b.shape_string());
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == T(0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        out(i, j) = out(i, j) + aik * b(k, j);
    }
  return out;
}

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  return matmul(a, b);
}

template <typename T>
Matrix<T> transpose(const Matrix<T>& a) {
  return a.transpose();
}

template <typename T>
Matrix<T> hcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows())
    throw DimensionError("hcat row mismatch: " + a.shape_string() + " | " +
                         b.shape_string());
  Matrix<T> out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

template <typename T>
Matrix<T> vcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.cols())
    throw DimensionError("vcat column mismatch: " + a.shape_string() + " / " +
                         b.shape_string());
  Matrix<T> out(a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) out(a.rows() + i, j) = b(i, j);
  }
  return out;
}

template <typename T>
Matrix<T> column_vector(const std::vector<T>& v) {
  Matrix<T> out(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) out(i, 0) = v[i];
  return out;
}

// m x n block diagonal [I_r 0; 0 0].
template <typename T>
Matrix<T> embedded_identity(std::size_t m, std::size_t n, std::size_t r) {
  assert(r <= m && r <= n);
  Matrix<T> out(m, n);
  for (std::size_t i = 0; i < r; ++i) out(i, i) = T(1);
  return out;
}

template <typename T>
bool is_zero_matrix(const Matrix<T>& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!(a(i, j) == T(0))) return false;
  return true;
}

// max |a_ij| as a double; 0 for an empty matrix. This is the scale fed to
// Tolerance::is_zero by every decomposition.
template <typename T>
double max_abs(const Matrix<T>& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      best = std::max(best, abs_to_double(a(i, j)));
  return best;
}

// Squared Frobenius norm, exact in the scalar type.
template <typename T>
T norm_fro_sq(const Matrix<T>& a) {
  T acc(0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) acc = acc + a(i, j) * a(i, j);
  return acc;
}

template <typename T>
double norm_fro(const Matrix<T>& a) {
  return std::sqrt(to_double(norm_fro_sq(a)));
}

// ||x - ref||_F / ||ref||_F, with an exact 0 numerator short-circuited so a
// zero reference matrix reconstructed exactly reports 0.
template <typename T>
double relative_residual(const Matrix<T>& x, const Matrix<T>& ref) {
  const double num = norm_fro(x - ref);
  if (num == 0.0) return 0.0;
  return num / std::max(norm_fro(ref), 1e-300);
}

template <typename T>
T dot(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != 1 || b.cols() != 1)
    throw DimensionError("dot expects two column vectors of equal length");
  T acc(0);
  for (std::size_t i = 0; i < a.rows(); ++i) acc = acc + a(i, 0) * b(i, 0);
  return acc;
}

}  // namespace rankforge
