#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "comarr/arrangement.hpp"
#include "comarr/exact.hpp"

using namespace comarr;

namespace {

// Independent enumeration: all unordered pairs of distinct t-subsets, sum
// difference normalized by sign, collected in a set.
std::set<std::vector<std::int64_t>> brute_force(std::size_t t, std::size_t k) {
  std::set<std::vector<std::int64_t>> out;
  std::vector<unsigned> masks;
  for (unsigned m = 0; m < (1u << k); ++m) {
    if (static_cast<std::size_t>(__builtin_popcount(m)) == t) masks.push_back(m);
  }
  for (std::size_t a = 0; a < masks.size(); ++a) {
    for (std::size_t b = a + 1; b < masks.size(); ++b) {
      std::vector<std::int64_t> v(k, 0);
      for (std::size_t i = 0; i < k; ++i) {
        v[i] = static_cast<std::int64_t>((masks[a] >> i) & 1u) - static_cast<std::int64_t>((masks[b] >> i) & 1u);
      }
      auto first = std::find_if(v.begin(), v.end(), [](auto x) { return x != 0; });
      if (*first < 0) {
        for (auto& x : v) x = -x;
      }
      out.insert(v);
    }
  }
  return out;
}

std::set<std::vector<std::int64_t>> as_set(const HyperplaneSet& h) {
  std::set<std::vector<std::int64_t>> out;
  for (const auto& x : h) out.insert(x.normal());
  return out;
}

HyperplaneSet make(Family f, std::size_t t, std::size_t k) { return build({f, t, k}); }

std::size_t count_braid_type(const HyperplaneSet& h) {
  std::size_t n = 0;
  for (const auto& x : h) {
    n += std::count_if(x.normal().begin(), x.normal().end(), [](auto v) { return v != 0; }) == 2;
  }
  return n;
}

}  // namespace

TEST_CASE("braid k=3 in canonical order") {
  auto h = make(Family::Braid, 0, 3);
  REQUIRE(h.size() == 3);
  CHECK(h[0].normal() == std::vector<std::int64_t>{1, -1, 0});
  CHECK(h[1].normal() == std::vector<std::int64_t>{1, 0, -1});
  CHECK(h[2].normal() == std::vector<std::int64_t>{0, 1, -1});
}

TEST_CASE("generated counts match brute-force pair enumeration") {
  struct Case {
    std::size_t t, k, total, braid;
  };
  for (auto c : {Case{2, 4, 9, 6}, Case{3, 4, 6, 6}, Case{2, 5, 25, 10}, Case{3, 5, 25, 10},
                 Case{2, 6, 0, 15}, Case{3, 6, 0, 15}}) {
    CAPTURE(c.t);
    CAPTURE(c.k);
    auto h = make(Family::M, c.t, c.k);
    CHECK(as_set(h) == brute_force(c.t, c.k));
    if (c.total != 0) CHECK(h.size() == c.total);
    CHECK(count_braid_type(h) == c.braid);
  }
}

TEST_CASE("M(3,4) equals the braid arrangement") {
  CHECK(make(Family::M, 3, 4) == make(Family::Braid, 0, 4));
}

TEST_CASE("t >= k gives the braid arrangement") {
  CHECK(make(Family::M, 4, 4) == make(Family::Braid, 0, 4));
  CHECK(make(Family::M, 7, 3) == make(Family::Braid, 0, 3));
  CHECK(make(Family::Mprime, 6, 4) == make(Family::Braid, 0, 4));
  CHECK(make(Family::Mprime, 4, 4) == make(Family::M, 2, 4));
}

TEST_CASE("k = 0 and k = 1") {
  auto e = make(Family::M, 2, 0);
  CHECK(e.empty());
  CHECK(e.dim() == 0);
  CHECK(make(Family::Braid, 0, 1).empty());
}

TEST_CASE("invalid specs") {
  CHECK_THROWS_AS(build({Family::M, 0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("X"), std::invalid_argument);
  CHECK(parse_family("Mprime") == Family::Mprime);
}

TEST_CASE("normal entries, coordinate sums and sign counts") {
  for (std::size_t k = 2; k <= 6; ++k) {
    for (std::size_t t = 1; t < k; ++t) {
      for (auto f : {Family::M, Family::Mprime}) {
        for (const auto& x : make(f, t, k)) {
          std::int64_t sum = 0;
          std::size_t pos = 0, neg = 0;
          for (auto v : x.normal()) {
            CHECK((v >= -1 && v <= 1));
            sum += v;
            pos += v > 0;
            neg += v < 0;
          }
          CHECK(sum == 0);
          CHECK(pos == neg);
          CHECK(pos >= 1);
          CHECK(pos <= t);
        }
      }
    }
  }
}

TEST_CASE("inclusions between families") {
  for (std::size_t k = 2; k <= 6; ++k) {
    auto braid = make(Family::Braid, 0, k);
    for (std::size_t t = 1; t < k; ++t) {
      CHECK(braid.is_subset_of(make(Family::M, t, k)));
      auto mp = make(Family::Mprime, t, k);
      for (std::size_t s = 1; s <= t; ++s) CHECK(make(Family::M, s, k).is_subset_of(mp));
    }
  }
}

TEST_CASE("every family is permutation-stable") {
  for (std::size_t k = 1; k <= 5; ++k) {
    for (std::size_t t = 1; t <= k; ++t) {
      auto h = make(Family::M, t, k);
      CHECK(h.is_symmetric());
      for (const auto& g : all_permutations(k)) {
        for (const auto& x : h) CHECK(h.contains(x.permuted(g).first));
      }
    }
  }
}

TEST_CASE("permuted sign relates the permuted normal to its canonical form") {
  Hyperplane h({1, -1, 0});
  auto [img, s] = h.permuted(Permutation({1, 0, 2}));
  CHECK(img == h);
  CHECK(s == -1);
  auto [img2, s2] = h.permuted(Permutation({0, 2, 1}));
  CHECK(img2.normal() == std::vector<std::int64_t>{1, 0, -1});
  CHECK(s2 == 1);
}

TEST_CASE("hyperplane canonicalization") {
  CHECK(Hyperplane({0, -2, 2}).normal() == std::vector<std::int64_t>{0, 1, -1});
  CHECK_THROWS_AS(Hyperplane({0, 0}), std::invalid_argument);
  HyperplaneSet dup(2, {Hyperplane({1, -1}), Hyperplane({-1, 1})});
  CHECK(dup.size() == 1);
}

TEST_CASE("essentialize examples") {
  auto b3 = essentialize(make(Family::Braid, 0, 3));
  CHECK(b3.rank == 2);
  CHECK(b3.lineality_dim == 1);
  CHECK(b3.reduced.dim() == 2);
  CHECK(b3.reduced.size() == 3);

  auto m24 = essentialize(make(Family::M, 2, 4));
  CHECK(m24.rank == 3);
  CHECK(m24.lineality_dim == 1);
  CHECK(m24.reduced.size() == 9);

  auto b1 = essentialize(make(Family::Braid, 0, 1));
  CHECK(b1.rank == 0);
  CHECK(b1.lineality_dim == 1);
}

TEST_CASE("essentialization preserves the rank of every subset") {
  // Same matroid: for every subset, rank of the original normals equals the
  // rank of the reduced ones.
  auto h = make(Family::M, 2, 4);
  auto e = essentialize(h);
  const std::size_t n = h.size();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::vector<std::int64_t>> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) {
        a.push_back(h[i].normal());
        b.push_back(e.reduced[e.index_map[i]].normal());
      }
    }
    CHECK(rank(RatMatrix::from_integers(a, 4)) == rank(RatMatrix::from_integers(b, e.rank)));
  }
}

TEST_CASE("hyperplane orbits") {
  auto o = hyperplane_orbits(make(Family::M, 2, 4));
  REQUIRE(o.size() == 2);
  std::vector<std::size_t> sizes{o[0].size(), o[1].size()};
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{3, 6});
  for (std::size_t k = 2; k <= 6; ++k) {
    auto ob = hyperplane_orbits(make(Family::Braid, 0, k));
    REQUIRE(ob.size() == 1);
    CHECK(ob[0].size() == k * (k - 1) / 2);
  }
  CHECK(hyperplane_orbits(make(Family::Braid, 0, 1)).empty());
}

TEST_CASE("orbit enumeration agrees with direct application of all permutations") {
  auto h = make(Family::M, 3, 5);
  auto orbits = hyperplane_orbits(h);
  std::size_t covered = 0;
  for (const auto& block : orbits) {
    std::set<std::size_t> direct;
    for (const auto& g : all_permutations(5)) direct.insert(*h.index_of(h[block[0]].permuted(g).first));
    CHECK(std::set<std::size_t>(block.begin(), block.end()) == direct);
    covered += block.size();
  }
  CHECK(covered == h.size());
}

TEST_CASE("permute_hyperplanes rejects unstable sets") {
  HyperplaneSet h(3, {Hyperplane({1, -1, 0})});
  CHECK_THROWS_AS(permute_hyperplanes(h, Permutation({0, 2, 1})), std::invalid_argument);
}

TEST_CASE("build is deterministic") {
  CHECK(make(Family::Mprime, 3, 6) == make(Family::Mprime, 3, 6));
}

TEST_CASE("permutations") {
  CHECK(all_permutations(4).size() == 24);
  Permutation g({1, 2, 0});
  CHECK(g.sign() == 1);
  CHECK((g * g.inverse()).is_identity());
  CHECK(Permutation::transposition(3, 0, 2).sign() == -1);
  CHECK_THROWS_AS(Permutation({0, 0}), std::invalid_argument);
  std::size_t total = 0;
  for (const auto& c : conjugacy_classes(5)) total += c.size;
  CHECK(total == 120);
  CHECK(conjugacy_classes(5).size() == 7);
  SymmetricGroup s3(3);
  for (std::size_t a = 0; a < s3.order(); ++a) {
    CHECK(s3.multiply(a, s3.inverse(a)) == s3.index_of(Permutation::identity(3)));
  }
}
