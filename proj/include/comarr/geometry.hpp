#pragma once

// Exact planar point configurations: membership in M(t,k) and M'(t,k) with
// least witnesses, the subset-sum map theta_t, the pullback property, the
// stabilization map and seeded rejection sampling.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "comarr/arrangement.hpp"
#include "comarr/exact.hpp"

namespace comarr {

struct ExactComplex {
  Rational re;
  Rational im;

  friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator<(const ExactComplex& a, const ExactComplex& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }
};

/// Ordered k-tuple of points.
struct PointConfig {
  std::vector<ExactComplex> points;

  [[nodiscard]] std::size_t size() const { return points.size(); }
  /// Points on the real axis.
  static PointConfig real(const std::vector<std::int64_t>& xs);
  friend bool operator==(const PointConfig&, const PointConfig&) = default;
};

/// Two distinct s-subsets (0-based, sorted) with equal sums.
struct Witness {
  std::size_t s = 0;
  std::vector<int> i;
  std::vector<int> j;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct Membership {
  bool inside = true;
  std::optional<Witness> witness;
};

/// Exact test of every defining equality. M uses subsets of size t, M' every
/// size 1..t, braid size 1; for t >= k the M family is the configuration
/// space. The witness is least in the order (s, I, J).
Membership membership(const PointConfig& c, std::size_t t, Family family);

/// Sums over t-subsets in lexicographic order. Throws std::invalid_argument
/// for t > k.
std::vector<ExactComplex> theta(const PointConfig& c, std::size_t t);

bool pairwise_distinct(const std::vector<ExactComplex>& v);

/// membership(c, t, M) is inside iff theta(c, t) has distinct entries.
/// Throws std::invalid_argument if the points are not distinct.
bool verify_pullback(const PointConfig& c, std::size_t t);

/// 2t(1 + max(|re| + |im|)); the l1 norm bounds the Euclidean one.
Rational stabilization_offset(const PointConfig& c, std::size_t t);
/// Appends (L, 0) with L = stabilization_offset(c, t).
PointConfig stabilize(const PointConfig& c, std::size_t t);
/// For a stabilized configuration: the appended point's norm exceeds the
/// largest t-1 plus the largest t l1 norms of the other points.
bool stabilization_dominates(const PointConfig& stabilized, std::size_t t);

struct SampleOptions {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::int64_t box = 10;
  /// Trials before giving up; 0 means 1000 * max(count, 1).
  std::size_t trial_budget = 0;
};

struct SampleResult {
  std::vector<PointConfig> configs;
  std::size_t trials = 0;
  std::size_t accepted = 0;
  [[nodiscard]] bool complete(std::size_t wanted) const { return configs.size() == wanted; }
  [[nodiscard]] double acceptance_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(trials);
  }
};

/// Trial i draws integer points uniformly from [-box, box]^2 with a generator
/// seeded from (seed, i) only, and is accepted when membership is inside.
/// The result is the first `count` accepted trials, independent of the
/// thread count. Throws std::invalid_argument for box < 1.
SampleResult sample(std::size_t t, std::size_t k, Family family, const SampleOptions& opts);

/// Seeded configurations of k distinct points with coordinates n/d,
/// |n| <= box, 1 <= d <= denominators; trial index i only.
PointConfig random_distinct_config(std::size_t k, std::uint64_t seed, std::size_t index,
                                   std::int64_t box, std::int64_t denominators);

/// First c in M(t,k) with stabilize(c, t) outside M(t,k+1): the built-in
/// candidates, then `samples` seeded draws from a small box. nullopt means
/// none was found, not that none exists.
std::optional<PointConfig> stabilization_failure_witness(std::size_t t, std::size_t k,
                                                         std::uint64_t seed, std::size_t samples);

}  // namespace comarr
