#pragma once

// Exact linear algebra over Q and Z: reduced row-echelon forms, canonical
// subspaces given by their normal spaces, and Smith normal form.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace comarr {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Dense row-major matrix of rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);

  static RatMatrix from_rows(const std::vector<std::vector<Rational>>& rows,
                             std::size_t cols);
  static RatMatrix from_integers(const std::vector<std::vector<std::int64_t>>& rows,
                                 std::size_t cols);
  static RatMatrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  [[nodiscard]] std::span<const Rational> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  /// Stacks the rows of `other` below this matrix. Column counts must agree.
  [[nodiscard]] RatMatrix stacked(const RatMatrix& other) const;
  /// First `n` rows.
  [[nodiscard]] RatMatrix top_rows(std::size_t n) const;

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;
  friend std::strong_ordering operator<=>(const RatMatrix& a, const RatMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct RrefResult {
  RatMatrix matrix;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_columns;
};

/// Unique reduced row-echelon form; zero rows are kept at the bottom.
RrefResult rref(RatMatrix m);

/// Rank over Q.
std::size_t rank(const RatMatrix& m);

/// Linear subspace of Q^n, stored as the RREF of its annihilator. Two
/// subspaces are equal exactly when their normal grids are identical.
class Subspace {
 public:
  Subspace() = default;

  static Subspace ambient(std::size_t dim);
  /// Subspace cut out by the rows of `normals` (any spanning set of the
  /// annihilator; zero and dependent rows are fine).
  static Subspace from_normals(const RatMatrix& normals);
  static Subspace hyperplane(std::span<const std::int64_t> normal);

  [[nodiscard]] std::size_t ambient_dim() const { return ambient_dim_; }
  [[nodiscard]] std::size_t codim() const { return normal_basis_.rows(); }
  [[nodiscard]] std::size_t dim() const { return ambient_dim_ - codim(); }
  [[nodiscard]] const RatMatrix& normal_basis() const { return normal_basis_; }

  [[nodiscard]] bool contains_point(std::span<const Rational> x) const;
  /// True when the linear form lies in the annihilator, i.e. the hyperplane
  /// it defines contains this subspace.
  [[nodiscard]] bool annihilated_by(std::span<const Rational> form) const;
  [[nodiscard]] bool annihilated_by(std::span<const std::int64_t> form) const;
  /// Basis of the subspace itself (null space of the normal basis).
  [[nodiscard]] std::vector<std::vector<Rational>> basis() const;

  friend bool operator==(const Subspace&, const Subspace&) = default;
  friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b);

 private:
  Subspace(std::size_t dim, RatMatrix normals)
      : ambient_dim_(dim), normal_basis_(std::move(normals)) {}

  std::size_t ambient_dim_ = 0;
  RatMatrix normal_basis_;
};

/// Canonical form of a ∩ b. Throws std::invalid_argument on a dimension
/// mismatch.
Subspace intersect(const Subspace& a, const Subspace& b);

/// Compact textual key, stable across runs (used for memo tables).
std::string canonical_key(const Subspace& s);

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows,
                             std::size_t cols);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Nonzero invariant factors d_1 | d_2 | ... | d_r (r = rank), all positive.
/// Pivots on the smallest nonzero absolute value.
std::vector<BigInt> smith_normal_form(IntMatrix m);

/// Scales a rational vector to the primitive integer vector on the same ray
/// (gcd 1, sign preserved). The zero vector maps to zeros.
std::vector<BigInt> primitive_integer_vector(std::span<const Rational> v);

}  // namespace comarr
