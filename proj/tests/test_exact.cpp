#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "comarr/exact.hpp"
#include "comarr/sparse.hpp"

using namespace comarr;

namespace {

// Cofactor expansion; only for tiny matrices.
Rational det(const RatMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Rational total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    RatMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t cc = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        minor(i - 1, cc++) = m(i, j);
      }
    }
    const Rational term = m(0, c) * det(minor);
    total += (c % 2 == 0) ? term : Rational(-term);
  }
  return total;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t r) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == r) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// gcd of all r x r minors.
BigInt minor_gcd(const IntMatrix& m, std::size_t r) {
  BigInt g = 0;
  for (const auto& rows : combinations(m.rows(), r)) {
    for (const auto& cols : combinations(m.cols(), r)) {
      RatMatrix sub(r, r);
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) sub(i, j) = Rational(m(rows[i], cols[j]));
      }
      const Rational d = det(sub);
      BigInt v = abs(d.get_num());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
  }
  return g;
}

// Rank as the size of the largest nonvanishing minor.
std::size_t rank_by_minors(const RatMatrix& m) {
  for (std::size_t r = std::min(m.rows(), m.cols()); r > 0; --r) {
    IntMatrix im(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) im(i, j) = m(i, j).get_num();
    }
    if (minor_gcd(im, r) != 0) return r;
  }
  return 0;
}

RatMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("rref examples") {
  auto id = rref(RatMatrix::identity(2));
  CHECK(id.rank == 2);
  CHECK(id.matrix == RatMatrix::identity(2));

  auto r = rref(RatMatrix::from_integers({{1, 1}, {2, 2}}, 2));
  CHECK(r.rank == 1);
  CHECK(r.matrix == RatMatrix::from_integers({{1, 1}, {0, 0}}, 2));
}

TEST_CASE("rank agrees with the determinant test on random 3x3 matrices") {
  std::mt19937_64 rng(7);
  int singular = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto m = random_matrix(rng, 3, 3, -2, 2);
    const bool full = rank(m) == 3;
    CHECK(full == (det(m) != 0));
    if (!full) ++singular;
  }
  CHECK(singular > 0);
}

TEST_CASE("rank matches the largest nonvanishing minor on rectangular matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = 1 + trial % 4;
    const std::size_t c = 1 + (trial / 4) % 4;
    auto m = random_matrix(rng, r, c, -1, 1);
    CHECK(rank(m) == rank_by_minors(m));
  }
}

TEST_CASE("rref is idempotent") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = random_matrix(rng, 4, 5, -3, 3);
    auto once = rref(m).matrix;
    CHECK(rref(once).matrix == once);
  }
}

TEST_CASE("intersect examples") {
  const std::vector<std::int64_t> a{1, -1, 0}, b{0, 1, -1};
  auto x = intersect(Subspace::hyperplane(a), Subspace::hyperplane(b));
  CHECK(x.codim() == 2);
  const std::vector<Rational> diag{1, 1, 1};
  CHECK(x.contains_point(diag));
  CHECK(intersect(x, Subspace::ambient(3)) == x);
  CHECK_THROWS_AS(intersect(Subspace::ambient(2), Subspace::ambient(3)), std::invalid_argument);
}

TEST_CASE("intersect is commutative, associative and idempotent") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = Subspace::from_normals(random_matrix(rng, 1 + trial % 2, 4, -2, 2));
    auto b = Subspace::from_normals(random_matrix(rng, 1, 4, -2, 2));
    auto c = Subspace::from_normals(random_matrix(rng, 1, 4, -2, 2));
    CHECK(intersect(a, b) == intersect(b, a));
    CHECK(intersect(intersect(a, b), c) == intersect(a, intersect(b, c)));
    CHECK(intersect(a, a) == a);
    CHECK(intersect(a, b).codim() == rank(a.normal_basis().stacked(b.normal_basis())));
  }
}

TEST_CASE("points of an intersection satisfy both normal sets") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    auto na = random_matrix(rng, 1, 4, -2, 2);
    auto nb = random_matrix(rng, 2, 4, -2, 2);
    auto x = intersect(Subspace::from_normals(na), Subspace::from_normals(nb));
    const auto basis = x.basis();
    CHECK(basis.size() == x.dim());
    std::vector<Rational> p(4, 0);
    for (const auto& v : basis) {
      const int c = coef(rng);
      for (std::size_t i = 0; i < 4; ++i) p[i] += c * v[i];
    }
    auto n = na.stacked(nb);
    for (std::size_t r = 0; r < n.rows(); ++r) {
      Rational s = 0;
      for (std::size_t i = 0; i < 4; ++i) s += n(r, i) * p[i];
      CHECK(s == 0);
    }
  }
}

TEST_CASE("subspace equality does not depend on the spanning set") {
  auto a = Subspace::from_normals(RatMatrix::from_integers({{1, -1, 0}, {0, 1, -1}}, 3));
  auto b = Subspace::from_normals(RatMatrix::from_integers({{1, 0, -1}, {2, -2, 0}, {3, -1, -2}}, 3));
  CHECK(a == b);
  CHECK(canonical_key(a) == canonical_key(b));
}

TEST_CASE("smith normal form examples") {
  CHECK(smith_normal_form(IntMatrix::from_rows({{2}}, 1)) == std::vector<BigInt>{2});
  CHECK(smith_normal_form(IntMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3)) ==
        std::vector<BigInt>{1, 1, 1});
  CHECK(smith_normal_form(IntMatrix::from_rows({{2, 0}, {0, 3}}, 2)) == std::vector<BigInt>{1, 6});
  CHECK(smith_normal_form(IntMatrix(3, 2)).empty());
}

TEST_CASE("invariant factors match the gcd-of-minors ladder") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t r = 1 + trial % 4;
    const std::size_t c = 1 + (trial / 4) % 4;
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    }
    const auto f = smith_normal_form(m);
    for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i] % f[i - 1] == 0);
    BigInt prod = 1;
    for (std::size_t k = 1; k <= std::min(r, c); ++k) {
      const BigInt g = minor_gcd(m, k);
      if (k <= f.size()) {
        prod *= f[k - 1];
        CHECK(prod == g);
      } else {
        CHECK(g == 0);
      }
    }
  }
}

TEST_CASE("sparse invariant factors agree with dense Smith form") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> d(-2, 2);
  for (int trial = 0; trial < 60; ++trial) {
    SparseMatrix s(5, 6);
    IntMatrix m(5, 6);
    for (std::uint32_t i = 0; i < 5; ++i) {
      for (std::uint32_t j = 0; j < 6; ++j) {
        const int v = (rng() % 3 == 0) ? d(rng) : 0;
        if (v != 0) s.add(i, j, v);
        m(i, j) = v;
      }
    }
    CHECK(invariant_factors(s) == smith_normal_form(m));
    CHECK(rank_over_rationals(s) == smith_normal_form(m).size());
  }
}

TEST_CASE("rank mod p against the invariant factors") {
  // rank over F_p = number of invariant factors not divisible by p.
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> d(-6, 6);
  for (int trial = 0; trial < 80; ++trial) {
    SparseMatrix s(4, 4);
    for (std::uint32_t i = 0; i < 4; ++i) {
      for (std::uint32_t j = 0; j < 4; ++j) s.add(i, j, d(rng));
    }
    const auto f = invariant_factors(s);
    for (std::uint32_t p : {2u, 3u, 5u}) {
      std::size_t expected = 0;
      for (const auto& x : f) expected += (x % p != 0) ? 1 : 0;
      CHECK(rank_mod_p(s, p) == expected);
    }
  }
  SparseMatrix two(1, 1);
  two.add(0, 0, 2);
  CHECK(rank_mod_p(two, 2) == 0);
  CHECK(rank_mod_p(two, 3) == 1);
}

TEST_CASE("large entries fall back to exact big integers") {
  SparseMatrix s(2, 2);
  const std::int64_t big = std::int64_t{1} << 40;
  s.add(0, 0, big);
  s.add(0, 1, big + 1);
  s.add(1, 0, big - 1);
  s.add(1, 1, big);
  // det = big^2 - (big^2 - 1) = 1
  CHECK(invariant_factors(s) == std::vector<BigInt>{1, 1});
}

TEST_CASE("is_prime") {
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK_FALSE(is_prime(4));
  CHECK(is_prime(7919));
  CHECK_FALSE(is_prime(7917));
}

TEST_CASE("primitive integer vectors") {
  const std::vector<Rational> v{Rational(2, 3), Rational(-4, 3), 0};
  CHECK(primitive_integer_vector(v) == std::vector<BigInt>{1, -2, 0});
}
