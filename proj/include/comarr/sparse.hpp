#pragma once

// Sparse integer matrices and exact elimination: rank over F_p, and the
// nonzero invariant factors over Z (which also give the rank over Q).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "comarr/exact.hpp"

namespace comarr {

struct Triplet {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  std::int64_t value = 0;
};

/// Sparse integer matrix in coordinate form. Duplicate coordinates are summed
/// by `compressed()`.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] const std::vector<Triplet>& entries() const { return entries_; }

  void add(std::uint32_t row, std::uint32_t col, std::int64_t value);

  /// Sorted by (row, col), duplicates summed, zeros dropped.
  [[nodiscard]] SparseMatrix compressed() const;
  [[nodiscard]] SparseMatrix transposed() const;
  [[nodiscard]] bool is_zero() const;

  /// Block placement: copy of `m` with rows and columns shifted.
  void add_block(const SparseMatrix& m, std::uint32_t row_offset, std::uint32_t col_offset);

  /// this * other (exact, int64 with overflow checks).
  [[nodiscard]] SparseMatrix multiply(const SparseMatrix& other) const;

  [[nodiscard]] IntMatrix to_dense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Triplet> entries_;
};

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);

/// Rank over F_p. `p` must be prime (checked by the caller).
std::size_t rank_mod_p(const SparseMatrix& m, std::uint32_t p);

/// Nonzero invariant factors of m over Z, in divisibility order. Unit pivots
/// are eliminated sparsely; the leftover block goes through dense Smith form.
std::vector<BigInt> invariant_factors(const SparseMatrix& m);

/// Rank over Q (the number of nonzero invariant factors).
std::size_t rank_over_rationals(const SparseMatrix& m);

bool is_prime(std::uint64_t p);

}  // namespace comarr
