#pragma once

#include <cassert>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "katofan/arith.hpp"
#include "katofan/rational.hpp"

namespace katofan {

/// Dense row-major matrix over Int or Rational.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  /// Builds a matrix whose rows are `rows`; `cols` is used when `rows` is empty.
  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols = 0) {
    if (!rows.empty()) cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  /// Builds a matrix whose columns are `cols`; `rows` is used when `cols` is empty.
  static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows = 0) {
    return from_rows(cols, rows).transpose();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  std::span<const T> row_view(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<std::vector<T>> row_list() const {
    std::vector<std::vector<T>> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }
  std::vector<std::vector<T>> column_list() const { return transpose().row_list(); }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Rows [first, first+count).
  Matrix row_block(std::size_t first, std::size_t count) const {
    Matrix m(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(first + i, j);
    return m;
  }

  /// Columns [first, first+count).
  Matrix column_block(std::size_t first, std::size_t count) const {
    Matrix m(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
    return m;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  bool is_zero() const {
    for (const T& x : data_)
      if (!(x == T{})) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rational>;
using RatVec = std::vector<Rational>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      if constexpr (std::is_same_v<T, Int>) {
        __int128 acc = 0;
        for (std::size_t k = 0; k < a.cols(); ++k) acc += static_cast<__int128>(a(i, k)) * b(k, j);
        c(i, j) = narrow(acc);
      } else {
        T acc{};
        for (std::size_t k = 0; k < a.cols(); ++k)
          if (!(a(i, k) == T{}) && !(b(k, j) == T{})) acc += a(i, k) * b(k, j);
        c(i, j) = acc;
      }
    }
  }
  return c;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix sum shape mismatch");
  Matrix<T> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if constexpr (std::is_same_v<T, Int>)
        c(i, j) = checked_add(a(i, j), b(i, j));
      else
        c(i, j) = a(i, j) + b(i, j);
    }
  return c;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix difference shape mismatch");
  Matrix<T> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if constexpr (std::is_same_v<T, Int>)
        c(i, j) = checked_sub(a(i, j), b(i, j));
      else
        c(i, j) = a(i, j) - b(i, j);
    }
  return c;
}

template <class T>
Matrix<T> scaled(const T& k, const Matrix<T>& a) {
  Matrix<T> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if constexpr (std::is_same_v<T, Int>)
        c(i, j) = checked_mul(k, a(i, j));
      else
        c(i, j) = k * a(i, j);
    }
  return c;
}

template <class T>
std::vector<T> apply(const Matrix<T>& a, std::span<const T> v) {
  if (a.cols() != v.size()) throw DimensionMismatch("matrix-vector shape mismatch");
  std::vector<T> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if constexpr (std::is_same_v<T, Int>) {
      __int128 acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += static_cast<__int128>(a(i, k)) * v[k];
      out[i] = narrow(acc);
    } else {
      T acc{};
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * v[k];
      out[i] = acc;
    }
  }
  return out;
}

inline Vec apply(const IntMatrix& a, const Vec& v) { return apply<Int>(a, std::span<const Int>(v)); }

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

inline RatVec to_rational(std::span<const Int> v) { return RatVec(v.begin(), v.end()); }

}  // namespace katofan
