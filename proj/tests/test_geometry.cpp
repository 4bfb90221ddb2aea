#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "comarr/geometry.hpp"
#include "comarr/parallel.hpp"

using namespace comarr;

namespace {

// Membership straight from the hyperplane list: a configuration is outside
// when some normal annihilates both the real and the imaginary parts.
bool inside_by_hyperplanes(const PointConfig& c, std::size_t t, Family f) {
  const auto h = build({f, t, c.size()});
  for (const auto& x : h) {
    Rational re = 0, im = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      re += x.normal()[i] * c.points[i].re;
      im += x.normal()[i] * c.points[i].im;
    }
    if (re == 0 && im == 0) return false;
  }
  return true;
}

PointConfig permuted(const PointConfig& c, const Permutation& g) {
  PointConfig out = c;
  for (std::size_t i = 0; i < c.size(); ++i) out.points[static_cast<std::size_t>(g(static_cast<int>(i)))] = c.points[i];
  return out;
}

PointConfig affine(const PointConfig& c, const Rational& lambda, const ExactComplex& v) {
  PointConfig out;
  for (const auto& z : c.points) out.points.push_back({lambda * z.re + v.re, lambda * z.im + v.im});
  return out;
}

bool sums_equal(const PointConfig& c, const Witness& w) {
  ExactComplex a{0, 0}, b{0, 0};
  for (auto i : w.i) a = a + c.points[static_cast<std::size_t>(i)];
  for (auto j : w.j) b = b + c.points[static_cast<std::size_t>(j)];
  return a == b && w.i != w.j && w.i.size() == w.s && w.j.size() == w.s;
}

}  // namespace

TEST_CASE("membership examples") {
  auto m = membership(PointConfig::real({0, 1, 2, 3}), 2, Family::M);
  CHECK_FALSE(m.inside);
  REQUIRE(m.witness.has_value());
  CHECK(m.witness->i == std::vector<int>{0, 3});
  CHECK(m.witness->j == std::vector<int>{1, 2});

  CHECK(membership(PointConfig::real({0, 1, 2, 4}), 2, Family::M).inside);

  auto eq = membership(PointConfig::real({5, 1, 5, 9}), 2, Family::M);
  CHECK_FALSE(eq.inside);
  REQUIRE(eq.witness.has_value());
  // Braid-type witness: the two subsets share an index.
  std::set<int> common;
  for (auto i : eq.witness->i) {
    for (auto j : eq.witness->j) {
      if (i == j) common.insert(i);
    }
  }
  CHECK(common.size() == 1);
}

TEST_CASE("M' witnesses start at size 1") {
  auto m = membership(PointConfig::real({0, 0, 7, 20}), 2, Family::Mprime);
  CHECK_FALSE(m.inside);
  CHECK(m.witness->s == 1);
  CHECK(m.witness->i == std::vector<int>{0});
  CHECK(m.witness->j == std::vector<int>{1});
}

TEST_CASE("t >= k reduces to distinctness") {
  CHECK(membership(PointConfig::real({0, 1, 2}), 3, Family::M).inside);
  CHECK_FALSE(membership(PointConfig::real({0, 1, 1}), 5, Family::M).inside);
  CHECK(membership(PointConfig::real({0, 1, 2}), 5, Family::Mprime).inside);
}

TEST_CASE("membership agrees with the hyperplane description") {
  for (std::size_t k = 3; k <= 5; ++k) {
    for (std::size_t t = 1; t < k; ++t) {
      for (auto f : {Family::M, Family::Mprime}) {
        for (std::size_t i = 0; i < 300; ++i) {
          auto c = random_distinct_config(k, 42, i, 2, 1);
          auto m = membership(c, t, f);
          CHECK(m.inside == inside_by_hyperplanes(c, t, f));
          if (!m.inside) CHECK(sums_equal(c, *m.witness));
        }
      }
    }
  }
}

TEST_CASE("theta") {
  PointConfig c{{{1, 2}, {3, 0}, {Rational(1, 2), -1}}};
  auto th = theta(c, 2);
  REQUIRE(th.size() == 3);
  CHECK(th[0] == ExactComplex{4, 2});
  CHECK(th[1] == ExactComplex{Rational(3, 2), 1});
  CHECK(th[2] == ExactComplex{Rational(7, 2), -1});
  CHECK(theta(c, 3) == std::vector<ExactComplex>{{Rational(9, 2), 1}});
  CHECK(theta(c, 1) == c.points);
  CHECK_THROWS_AS(theta(c, 4), std::invalid_argument);
}

TEST_CASE("pullback examples") {
  CHECK(verify_pullback(PointConfig::real({0, 1, 2, 3}), 2));
  CHECK(verify_pullback(PointConfig::real({0, 1, 2, 4}), 2));
  CHECK_THROWS_AS(verify_pullback(PointConfig::real({0, 0, 1}), 1), std::invalid_argument);
}

TEST_CASE("pullback holds on seeded random configurations, both sides exercised") {
  for (auto [t, k] : {std::pair<std::size_t, std::size_t>{2, 4}, {2, 5}, {3, 5}}) {
    std::size_t outside = 0;
    for (std::size_t i = 0; i < 2000; ++i) {
      auto c = random_distinct_config(k, 7, i, 1, 2);
      CHECK(verify_pullback(c, t));
      outside += !membership(c, t, Family::M).inside;
    }
    CHECK(outside > 20);
    CHECK(outside < 2000);
  }
}

TEST_CASE("membership is equivariant and affine-invariant") {
  const auto perms = all_permutations(4);
  for (std::size_t i = 0; i < 200; ++i) {
    auto c = random_distinct_config(4, 99, i, 2, 1);
    for (auto f : {Family::M, Family::Mprime}) {
      auto m = membership(c, 2, f);
      for (std::size_t g = 0; g < perms.size(); g += 5) {
        auto pc = permuted(c, perms[g]);
        auto pm = membership(pc, 2, f);
        CHECK(pm.inside == m.inside);
        if (!m.inside) {
          // The permuted witness is a witness for the permuted configuration.
          Witness w = *m.witness;
          for (auto& x : w.i) x = perms[g](x);
          for (auto& x : w.j) x = perms[g](x);
          CHECK(sums_equal(pc, w));
        }
      }
      CHECK(membership(affine(c, Rational(-3, 2), {5, Rational(1, 3)}), 2, f).inside == m.inside);
      CHECK(membership(affine(c, 7, {0, 0}), 2, f).inside == m.inside);
    }
  }
}

TEST_CASE("stabilize examples") {
  PointConfig two{{{0, 0}, {1, 0}}};
  auto s = stabilize(two, 2);
  REQUIRE(s.size() == 3);
  CHECK(s.points.back() == ExactComplex{8, 0});
  CHECK(stabilize(PointConfig{{{0, 0}}}, 3).points.back() == ExactComplex{6, 0});
  CHECK(stabilize(PointConfig{}, 2).points.back() == ExactComplex{4, 0});
  // The l1 norm is used: |1| + |-2| = 3.
  CHECK(stabilization_offset(PointConfig{{{1, -2}}}, 1) == 8);
}

TEST_CASE("the l1 offset is at least the Euclidean formula") {
  for (std::size_t i = 0; i < 200; ++i) {
    auto c = random_distinct_config(4, 5, i, 5, 3);
    double m = 0;
    for (const auto& z : c.points) m = std::max(m, std::hypot(z.re.get_d(), z.im.get_d()));
    CHECK(stabilization_offset(c, 2).get_d() >= 4 * (1 + m) - 1e-12);
  }
}

TEST_CASE("stabilization maps M'(t,k) into M'(t,k+1)") {
  for (auto [t, k] : {std::pair<std::size_t, std::size_t>{2, 4}, {3, 5}}) {
    auto s = sample(t, k, Family::Mprime, {11, 300, 10, 0});
    REQUIRE(s.complete(300));
    for (const auto& c : s.configs) {
      CHECK(membership(c, t, Family::Mprime).inside);
      auto st = stabilize(c, t);
      CHECK(membership(st, t, Family::Mprime).inside);
      CHECK(stabilization_dominates(st, t));
    }
  }
}

TEST_CASE("stabilization failure witness") {
  auto w = stabilization_failure_witness(3, 4, 1, 200);
  REQUIRE(w.has_value());
  CHECK(*w == PointConfig::real({0, 3, 1, 2}));
  CHECK(membership(*w, 3, Family::M).inside);
  auto after = membership(stabilize(*w, 3), 3, Family::M);
  CHECK_FALSE(after.inside);
  REQUIRE(after.witness.has_value());
  CHECK(after.witness->i == std::vector<int>{0, 1, 4});
  CHECK(after.witness->j == std::vector<int>{2, 3, 4});

  CHECK_FALSE(stabilization_failure_witness(2, 4, 1, 500).has_value());
}

TEST_CASE("sampling is deterministic and thread-count independent") {
  set_thread_count(1);
  auto a = sample(2, 4, Family::M, {123, 200, 10, 0});
  set_thread_count(4);
  auto b = sample(2, 4, Family::M, {123, 200, 10, 0});
  set_thread_count(0);
  auto c = sample(2, 4, Family::M, {123, 200, 10, 0});
  CHECK(a.configs == b.configs);
  CHECK(a.configs == c.configs);
  CHECK(a.trials == b.trials);
  for (const auto& x : a.configs) CHECK(membership(x, 2, Family::M).inside);
  auto d = sample(2, 4, Family::M, {124, 200, 10, 0});
  CHECK(d.configs != a.configs);
  // A prefix of a longer run.
  auto e = sample(2, 4, Family::M, {123, 50, 10, 0});
  CHECK(std::equal(e.configs.begin(), e.configs.end(), a.configs.begin()));
}

TEST_CASE("acceptance rate for (2,4,10) is stable across seeds") {
  std::vector<double> rates;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto s = sample(2, 4, Family::M, {seed, 2000, 10, 0});
    REQUIRE(s.complete(2000));
    rates.push_back(s.acceptance_rate());
  }
  const double mean = std::accumulate(rates.begin(), rates.end(), 0.0) / 5.0;
  CHECK(mean > 0.5);
  CHECK(mean < 1.0);
  for (double r : rates) {
    // Five binomial standard errors at n = 2000 accepted draws.
    const double se = std::sqrt(mean * (1 - mean) / (2000.0 / mean));
    CHECK(std::abs(r - mean) < 5 * se);
  }
}

TEST_CASE("sampling failures and guards") {
  CHECK_THROWS_AS(sample(2, 4, Family::M, {1, 10, 0, 0}), std::invalid_argument);
  // Seven points in the 3 x 3 grid almost never have distinct pair sums; with
  // a tiny budget the run reports incompleteness instead of looping.
  auto s = sample(2, 7, Family::M, {1, 5, 1, 50});
  CHECK_FALSE(s.complete(5));
  CHECK(s.trials == 50);
  auto empty = sample(2, 4, Family::M, {1, 0, 10, 0});
  CHECK(empty.complete(0));
  CHECK(empty.trials == 0);
}
