#include "comarr/exact.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace comarr {

namespace {

std::strong_ordering compare(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMatrix RatMatrix::from_rows(const std::vector<std::vector<Rational>>& rows,
                               std::size_t cols) {
  RatMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RatMatrix RatMatrix::from_integers(const std::vector<std::vector<std::int64_t>>& rows,
                                   std::size_t cols) {
  RatMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rows[i][j]);
  }
  return m;
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::stacked(const RatMatrix& other) const {
  if (other.rows_ > 0 && rows_ > 0 && other.cols_ != cols_) {
    throw std::invalid_argument("stacking matrices with different column counts");
  }
  RatMatrix out;
  out.rows_ = rows_ + other.rows_;
  out.cols_ = rows_ > 0 ? cols_ : other.cols_;
  out.data_ = data_;
  out.data_.insert(out.data_.end(), other.data_.begin(), other.data_.end());
  return out;
}

RatMatrix RatMatrix::top_rows(std::size_t n) const {
  RatMatrix out(std::min(n, rows_), cols_);
  std::copy_n(data_.begin(), out.rows_ * cols_, out.data_.begin());
  return out;
}

std::strong_ordering operator<=>(const RatMatrix& a, const RatMatrix& b) {
  if (auto c = a.rows_ <=> b.rows_; c != 0) return c;
  if (auto c = a.cols_ <=> b.cols_; c != 0) return c;
  for (std::size_t i = 0; i < a.data_.size(); ++i) {
    if (auto c = compare(a.data_[i], b.data_[i]); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

RrefResult rref(RatMatrix m) {
  RrefResult out;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (sgn(m(i, c)) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    if (pivot != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(pivot, j), m(r, j));
    }
    const Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < cols; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t j = c; j < cols; ++j) m(i, j) -= f * m(r, j);
    }
    out.pivot_columns.push_back(c);
    ++r;
  }
  out.rank = r;
  out.matrix = std::move(m);
  return out;
}

std::size_t rank(const RatMatrix& m) { return rref(m).rank; }

Subspace Subspace::ambient(std::size_t dim) { return Subspace(dim, RatMatrix(0, dim)); }

Subspace Subspace::from_normals(const RatMatrix& normals) {
  auto reduced = rref(normals);
  return Subspace(normals.cols(), reduced.matrix.top_rows(reduced.rank));
}

Subspace Subspace::hyperplane(std::span<const std::int64_t> normal) {
  RatMatrix m(1, normal.size());
  for (std::size_t j = 0; j < normal.size(); ++j) m(0, j) = static_cast<long>(normal[j]);
  return from_normals(m);
}

bool Subspace::contains_point(std::span<const Rational> x) const {
  if (x.size() != ambient_dim_) throw std::invalid_argument("point dimension mismatch");
  for (std::size_t i = 0; i < normal_basis_.rows(); ++i) {
    Rational acc = 0;
    for (std::size_t j = 0; j < ambient_dim_; ++j) acc += normal_basis_(i, j) * x[j];
    if (sgn(acc) != 0) return false;
  }
  return true;
}

bool Subspace::annihilated_by(std::span<const Rational> form) const {
  if (form.size() != ambient_dim_) throw std::invalid_argument("form dimension mismatch");
  // Reduce the form against the RREF rows; it lies in the row space iff the
  // residual vanishes.
  std::vector<Rational> v(form.begin(), form.end());
  std::size_t col = 0;
  for (std::size_t i = 0; i < normal_basis_.rows(); ++i) {
    while (sgn(normal_basis_(i, col)) == 0) ++col;
    if (sgn(v[col]) != 0) {
      const Rational f = v[col];
      for (std::size_t j = col; j < ambient_dim_; ++j) v[j] -= f * normal_basis_(i, j);
    }
  }
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

bool Subspace::annihilated_by(std::span<const std::int64_t> form) const {
  std::vector<Rational> v(form.size());
  for (std::size_t j = 0; j < form.size(); ++j) v[j] = static_cast<long>(form[j]);
  return annihilated_by(std::span<const Rational>(v));
}

std::vector<std::vector<Rational>> Subspace::basis() const {
  std::vector<bool> is_pivot(ambient_dim_, false);
  std::vector<std::size_t> pivot_of_row;
  for (std::size_t i = 0; i < normal_basis_.rows(); ++i) {
    std::size_t c = 0;
    while (sgn(normal_basis_(i, c)) == 0) ++c;
    is_pivot[c] = true;
    pivot_of_row.push_back(c);
  }
  std::vector<std::vector<Rational>> out;
  for (std::size_t free = 0; free < ambient_dim_; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(ambient_dim_);
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_of_row.size(); ++i) {
      v[pivot_of_row[i]] = -normal_basis_(i, free);
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
  if (auto c = a.ambient_dim_ <=> b.ambient_dim_; c != 0) return c;
  return a.normal_basis_ <=> b.normal_basis_;
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw std::invalid_argument("intersect: ambient dimensions differ");
  }
  if (b.codim() == 0) return a;
  if (a.codim() == 0) return b;
  return Subspace::from_normals(a.normal_basis().stacked(b.normal_basis()));
}

std::string canonical_key(const Subspace& s) {
  std::string key = std::to_string(s.ambient_dim()) + ":";
  const auto& m = s.normal_basis();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      key += m(i, j).get_str();
      key += ',';
    }
    key += ';';
  }
  return key;
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows,
                               std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rows[i][j]);
  }
  return m;
}

std::vector<BigInt> smith_normal_form(IntMatrix m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  auto swap_rows = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols; ++j) std::swap(m(a, j), m(b, j));
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, a), m(i, b));
  };

  std::vector<BigInt> diagonal;
  for (std::size_t s = 0; s < std::min(rows, cols); ++s) {
    for (;;) {
      // Smallest nonzero |entry| in the trailing block.
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = s; i < rows; ++i) {
        for (std::size_t j = s; j < cols; ++j) {
          if (sgn(m(i, j)) == 0) continue;
          if (pi == rows || mpz_cmpabs(m(i, j).get_mpz_t(), m(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == rows) return diagonal;
      swap_rows(s, pi);
      swap_cols(s, pj);
      const BigInt pivot = m(s, s);

      bool remainder = false;
      BigInt q;
      for (std::size_t i = s + 1; i < rows; ++i) {
        if (sgn(m(i, s)) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), m(i, s).get_mpz_t(), pivot.get_mpz_t());
        for (std::size_t j = s; j < cols; ++j) m(i, j) -= q * m(s, j);
        if (sgn(m(i, s)) != 0) remainder = true;
      }
      for (std::size_t j = s + 1; j < cols; ++j) {
        if (sgn(m(s, j)) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), m(s, j).get_mpz_t(), pivot.get_mpz_t());
        for (std::size_t i = s; i < rows; ++i) m(i, j) -= q * m(i, s);
        if (sgn(m(s, j)) != 0) remainder = true;
      }
      if (remainder) continue;

      // Row and column are clear; enforce divisibility of the trailing block.
      std::size_t bad_row = rows;
      for (std::size_t i = s + 1; i < rows && bad_row == rows; ++i) {
        for (std::size_t j = s + 1; j < cols; ++j) {
          if (!mpz_divisible_p(m(i, j).get_mpz_t(), pivot.get_mpz_t())) {
            bad_row = i;
            break;
          }
        }
      }
      if (bad_row != rows) {
        for (std::size_t j = s; j < cols; ++j) m(s, j) += m(bad_row, j);
        continue;
      }
      diagonal.push_back(abs(pivot));
      break;
    }
  }
  return diagonal;
}

std::vector<BigInt> primitive_integer_vector(std::span<const Rational> v) {
  BigInt den_lcm = 1;
  for (const auto& q : v) {
    if (sgn(q) != 0) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den_mpz_t());
  }
  std::vector<BigInt> out(v.size());
  BigInt g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i].get_num() * (den_lcm / v[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  if (sgn(g) != 0) {
    for (auto& x : out) x /= g;
  }
  return out;
}

}  // namespace comarr
