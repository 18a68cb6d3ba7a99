#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ccq/errors.hpp"
#include "ccq/ff.hpp"

namespace ccq {

/// Dense row-major matrix used for node-local blocks and for observer-side
/// (gathered) views of distributed matrices.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  [[nodiscard]] std::span<const T> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  [[nodiscard]] std::vector<T> col(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  [[nodiscard]] std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }

  static Matrix identity(std::size_t n, T one, T zero = T{}) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  [[nodiscard]] Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using FieldMatrix = Matrix<Word>;

}  // namespace ccq
