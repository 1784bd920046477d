#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/error.hpp"
#include "gridsec/rational.hpp"

namespace gridsec {

/// Dense row-major matrix with value semantics. Used for the exact (integer and
/// rational) data paths; floating-point work goes through Eigen.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const T> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) throw DimensionMismatch("append_row: wrong length");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  Matrix select_rows(std::span<const std::size_t> which) const {
    Matrix out(which.size(), cols_);
    for (std::size_t i = 0; i < which.size(); ++i) {
      auto src = row(which[i]);
      std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
  }

  Matrix select_cols(std::span<const std::size_t> which) const {
    Matrix out(rows_, which.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t j = 0; j < which.size(); ++j) out(r, j) = (*this)(r, which[j]);
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<std::int64_t>;
using RationalMatrix = Matrix<Rational>;
using RationalVector = std::vector<Rational>;

RationalMatrix to_rational(const IntMatrix& m);
Eigen::MatrixXd to_eigen(const IntMatrix& m);
Eigen::MatrixXd to_eigen(const RationalMatrix& m);

/// Exact rank. The integer overload runs fraction-free elimination and falls back
/// to rationals if an intermediate would overflow.
std::size_t rank(const RationalMatrix& m);
std::size_t rank(const IntMatrix& m);

Rational determinant(const RationalMatrix& m);
/// Exact determinant of a square integer matrix (Bareiss). Throws SizeLimitExceeded
/// if the result does not fit in 64 bits.
std::int64_t determinant(const IntMatrix& m);

/// Greedy maximal set of linearly independent rows, scanning in index order.
std::vector<std::size_t> independent_rows(const RationalMatrix& m);

/// Reduced row echelon form; `pivots` receives the pivot column of each nonzero row.
RationalMatrix rref(const RationalMatrix& m, std::vector<std::size_t>* pivots = nullptr);

/// Basis of {v : m v = 0}, one basis vector per row, in canonical reduced echelon form.
RationalMatrix nullspace_basis(const RationalMatrix& m);

bool same_row_space(const RationalMatrix& a, const RationalMatrix& b);

RationalVector multiply(const RationalMatrix& m, std::span<const Rational> v);

}  // namespace gridsec
