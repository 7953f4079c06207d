#pragma once

// Exact (arbitrary precision) linear algebra over the rationals.
//
// Everything that decides a certificate (ranks, kernels, Gamma-minors) goes
// through here; floating point is reserved for kinetics and simulation.

#include <gmpxx.h>

#include <cassert>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace crncert {

using Integer = mpz_class;
using Rational = mpq_class;

/// Dense row-major matrix. Deliberately minimal: the exact code needs only
/// indexing and shape, and Eigen does not play well with gmpxx expression
/// templates.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<long long>;
using RationalMatrix = Matrix<Rational>;

RationalMatrix to_rational(const IntMatrix& m);

/// Rank by exact Gaussian elimination.
std::size_t exact_rank(const RationalMatrix& m);
std::size_t exact_rank(const IntMatrix& m);

/// Basis of {x : m x = 0}, one basis vector per returned row. Computed from
/// the reduced row echelon form, so the result is deterministic.
RationalMatrix right_kernel_basis(const RationalMatrix& m);

/// Basis of {y : y^T m = 0}.
inline RationalMatrix left_kernel_basis(const RationalMatrix& m) {
  return right_kernel_basis(m.transposed());
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
Integer bareiss_det(Matrix<Integer> m);

/// Determinant of the submatrix m[rows, cols] (|rows| == |cols|).
Integer sub_determinant(const IntMatrix& m, std::span<const std::size_t> rows,
                        std::span<const std::size_t> cols);

/// Scales a rational vector to coprime integers with the same direction.
/// The zero vector maps to zeros.
std::vector<Integer> to_coprime_integers(std::span<const Rational> v);

/// gcd-normalizes an integer vector in place (no sign change).
void normalize_coprime(std::vector<Integer>& v);

std::string to_string(const Integer& z);

}  // namespace crncert
