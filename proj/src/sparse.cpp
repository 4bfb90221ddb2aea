#include "comarr/sparse.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>
#include <utility>

namespace comarr {

void SparseMatrix::add(std::uint32_t row, std::uint32_t col, std::int64_t value) {
  if (row >= rows_ || col >= cols_) throw std::out_of_range("sparse entry out of range");
  if (value != 0) entries_.push_back({row, col, value});
}

SparseMatrix SparseMatrix::compressed() const {
  SparseMatrix out(rows_, cols_);
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    return std::pair(a.row, a.col) < std::pair(b.row, b.col);
  });
  for (const auto& t : sorted) {
    if (!out.entries_.empty() && out.entries_.back().row == t.row &&
        out.entries_.back().col == t.col) {
      if (__builtin_add_overflow(out.entries_.back().value, t.value,
                                 &out.entries_.back().value)) {
        throw std::overflow_error("sparse entry overflow");
      }
    } else {
      out.entries_.push_back(t);
    }
  }
  std::erase_if(out.entries_, [](const Triplet& t) { return t.value == 0; });
  return out;
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix out(cols_, rows_);
  out.entries_.reserve(entries_.size());
  for (const auto& t : entries_) out.entries_.push_back({t.col, t.row, t.value});
  return out;
}

bool SparseMatrix::is_zero() const { return compressed().entries_.empty(); }

void SparseMatrix::add_block(const SparseMatrix& m, std::uint32_t row_offset,
                             std::uint32_t col_offset) {
  for (const auto& t : m.entries_) add(t.row + row_offset, t.col + col_offset, t.value);
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("sparse multiply: shape mismatch");
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> other_rows(other.rows_);
  for (const auto& t : other.entries_) other_rows[t.row].emplace_back(t.col, t.value);
  SparseMatrix out(rows_, other.cols_);
  for (const auto& t : entries_) {
    for (const auto& [col, v] : other_rows[t.col]) {
      std::int64_t prod = 0;
      if (__builtin_mul_overflow(t.value, v, &prod)) {
        throw std::overflow_error("sparse multiply overflow");
      }
      out.add(t.row, col, prod);
    }
  }
  return out.compressed();
}

IntMatrix SparseMatrix::to_dense() const {
  IntMatrix m(rows_, cols_);
  for (const auto& t : entries_) m(t.row, t.col) += static_cast<long>(t.value);
  return m;
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("sparse subtract: shape mismatch");
  }
  SparseMatrix out(a.rows(), a.cols());
  out.add_block(a, 0, 0);
  for (const auto& t : b.entries()) out.add(t.row, t.col, -t.value);
  return out.compressed();
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

namespace {

struct OverflowRetry {};

/// Z with +-1 pivots, int64 storage; overflow aborts so the caller can retry
/// with big integers.
struct CheckedIntRing {
  using Value = std::int64_t;
  static Value from(std::int64_t v) { return v; }
  static bool is_zero(Value v) { return v == 0; }
  static bool is_pivot(Value v) { return v == 1 || v == -1; }
  // a - (c / p) * b where p is a unit, so c / p = c * p.
  static Value eliminate(Value a, Value c, Value p, Value b) {
    Value f = 0, fb = 0, r = 0;
    if (__builtin_mul_overflow(c, p, &f) || __builtin_mul_overflow(f, b, &fb) ||
        __builtin_sub_overflow(a, fb, &r)) {
      throw OverflowRetry{};
    }
    return r;
  }
  static Value negate_times(Value c, Value p, Value b) { return eliminate(0, c, p, b); }
};

struct BigIntRing {
  using Value = BigInt;
  static Value from(std::int64_t v) { return BigInt(static_cast<long>(v)); }
  static bool is_zero(const Value& v) { return sgn(v) == 0; }
  static bool is_pivot(const Value& v) { return v == 1 || v == -1; }
  static Value eliminate(const Value& a, const Value& c, const Value& p, const Value& b) {
    return a - c * p * b;
  }
  static Value negate_times(const Value& c, const Value& p, const Value& b) {
    return -(c * p * b);
  }
};

struct ModPRing {
  using Value = std::uint32_t;
  std::uint64_t p;
  Value from(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0) r += static_cast<std::int64_t>(p);
    return static_cast<Value>(r);
  }
  static bool is_zero(Value v) { return v == 0; }
  static bool is_pivot(Value v) { return v != 0; }
  Value inverse(Value a) const {
    // Fermat.
    std::uint64_t result = 1, base = a, e = p - 2;
    while (e > 0) {
      if (e & 1) result = result * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return static_cast<Value>(result);
  }
  Value eliminate(Value a, Value c, Value piv, Value b) const {
    const std::uint64_t f = static_cast<std::uint64_t>(c) * inverse(piv) % p;
    return static_cast<Value>((a + p - f * b % p) % p);
  }
  Value negate_times(Value c, Value piv, Value b) const { return eliminate(0, c, piv, b); }
};

/// Sparse Gaussian elimination restricted to entries the ring accepts as
/// pivots. Rows with no admissible pivot survive into `leftover()`.
template <class Ring>
class Eliminator {
 public:
  using Value = typename Ring::Value;
  using Row = std::vector<std::pair<std::uint32_t, Value>>;

  Eliminator(const SparseMatrix& m, Ring ring) : ring_(std::move(ring)), cols_(m.cols()) {
    const auto c = m.compressed();
    rows_.resize(c.rows());
    col_rows_.resize(c.cols());
    for (const auto& t : c.entries()) {
      auto v = ring_.from(t.value);
      if (ring_.is_zero(v)) continue;
      rows_[t.row].emplace_back(t.col, std::move(v));
      col_rows_[t.col].push_back(t.row);
    }
  }

  std::size_t run() {
    using Item = std::pair<std::size_t, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::uint32_t i = 0; i < rows_.size(); ++i) {
      if (!rows_[i].empty()) heap.emplace(rows_[i].size(), i);
    }
    std::vector<bool> dead(rows_.size(), false);
    std::size_t pivots = 0;
    Row scratch;
    while (!heap.empty()) {
      auto [len, i] = heap.top();
      heap.pop();
      if (dead[i] || len != rows_[i].size() || rows_[i].empty()) continue;

      std::size_t best = rows_[i].size();
      for (std::size_t e = 0; e < rows_[i].size(); ++e) {
        if (!ring_.is_pivot(rows_[i][e].second)) continue;
        if (best == rows_[i].size() ||
            col_rows_[rows_[i][e].first].size() < col_rows_[rows_[i][best].first].size()) {
          best = e;
        }
      }
      if (best == rows_[i].size()) continue;  // deferred until modified

      const std::uint32_t pc = rows_[i][best].first;
      const Value pv = rows_[i][best].second;
      dead[i] = true;
      ++pivots;
      const Row& prow = rows_[i];

      auto targets = std::move(col_rows_[pc]);
      col_rows_[pc].clear();
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      for (std::uint32_t r : targets) {
        if (r == i || dead[r]) continue;
        Row& row = rows_[r];
        auto it = std::lower_bound(row.begin(), row.end(), pc,
                                   [](const auto& e, std::uint32_t c) { return e.first < c; });
        if (it == row.end() || it->first != pc) continue;
        const Value coeff = it->second;

        scratch.clear();
        std::size_t a = 0, b = 0;
        while (a < row.size() || b < prow.size()) {
          if (b == prow.size() || (a < row.size() && row[a].first < prow[b].first)) {
            scratch.push_back(row[a++]);
          } else if (a == row.size() || prow[b].first < row[a].first) {
            Value v = ring_.negate_times(coeff, pv, prow[b].second);
            if (!ring_.is_zero(v)) {
              col_rows_[prow[b].first].push_back(r);
              scratch.emplace_back(prow[b].first, std::move(v));
            }
            ++b;
          } else {
            Value v = ring_.eliminate(row[a].second, coeff, pv, prow[b].second);
            if (!ring_.is_zero(v)) scratch.emplace_back(row[a].first, std::move(v));
            ++a;
            ++b;
          }
        }
        row.swap(scratch);
        heap.emplace(row.size(), r);
      }
      rows_[i].clear();
    }
    dead_flags_ = dead;
    return pivots;
  }

  /// Rows that never received an admissible pivot.
  std::vector<Row> leftover() const {
    std::vector<Row> out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (!dead_flags_[i] && !rows_[i].empty()) out.push_back(rows_[i]);
    }
    return out;
  }

  [[nodiscard]] std::size_t cols() const { return cols_; }

 private:
  Ring ring_;
  std::size_t cols_;
  std::vector<Row> rows_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::vector<bool> dead_flags_;
};

SparseMatrix oriented(const SparseMatrix& m) {
  return m.rows() <= m.cols() ? m : m.transposed();
}

template <class Value>
IntMatrix leftover_block(const std::vector<std::vector<std::pair<std::uint32_t, Value>>>& rows) {
  std::vector<std::uint32_t> used;
  for (const auto& r : rows) {
    for (const auto& e : r) used.push_back(e.first);
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  IntMatrix dense(rows.size(), used.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [c, v] : rows[i]) {
      const auto j = static_cast<std::size_t>(
          std::lower_bound(used.begin(), used.end(), c) - used.begin());
      if constexpr (std::is_same_v<Value, BigInt>) {
        dense(i, j) = v;
      } else {
        dense(i, j) = static_cast<long>(v);
      }
    }
  }
  return dense;
}

template <class Ring>
std::vector<BigInt> factors_with(const SparseMatrix& m) {
  Eliminator<Ring> elim(oriented(m), Ring{});
  const std::size_t units = elim.run();
  std::vector<BigInt> out(units, BigInt(1));
  auto rest = smith_normal_form(leftover_block(elim.leftover()));
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

template <class Ring>
std::size_t rational_rank_with(const SparseMatrix& m) {
  Eliminator<Ring> elim(oriented(m), Ring{});
  const std::size_t units = elim.run();
  const auto block = leftover_block(elim.leftover());
  RatMatrix q(block.rows(), block.cols());
  for (std::size_t i = 0; i < block.rows(); ++i) {
    for (std::size_t j = 0; j < block.cols(); ++j) q(i, j) = block(i, j);
  }
  return units + rank(q);
}

}  // namespace

std::size_t rank_mod_p(const SparseMatrix& m, std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("rank_mod_p: modulus is not prime");
  Eliminator<ModPRing> elim(oriented(m), ModPRing{p});
  return elim.run();
}

std::vector<BigInt> invariant_factors(const SparseMatrix& m) {
  try {
    return factors_with<CheckedIntRing>(m);
  } catch (const OverflowRetry&) {
    return factors_with<BigIntRing>(m);
  }
}

std::size_t rank_over_rationals(const SparseMatrix& m) {
  try {
    return rational_rank_with<CheckedIntRing>(m);
  } catch (const OverflowRetry&) {
    return rational_rank_with<BigIntRing>(m);
  }
}

}  // namespace comarr
