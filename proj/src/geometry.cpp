#include "comarr/geometry.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "comarr/parallel.hpp"

namespace comarr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

/// Uniform integer in [lo, hi], by rejection (portable across standard
/// libraries, unlike std::uniform_int_distribution).
std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

Rational l1_norm(const ExactComplex& z) { return abs(z.re) + abs(z.im); }

std::optional<Witness> least_collision(const PointConfig& c, std::size_t s) {
  const auto subsets = subsets_of_size(c.size(), s);
  std::map<ExactComplex, std::vector<std::size_t>> groups;
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    ExactComplex sum{0, 0};
    for (auto i : subsets[a]) sum = sum + c.points[static_cast<std::size_t>(i)];
    groups[sum].push_back(a);
  }
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (const auto& [sum, members] : groups) {
    if (members.size() < 2) continue;
    if (!best || members[0] < best->first) best = std::pair(members[0], members[1]);
  }
  if (!best) return std::nullopt;
  return Witness{s, subsets[best->first], subsets[best->second]};
}

}  // namespace

PointConfig PointConfig::real(const std::vector<std::int64_t>& xs) {
  PointConfig c;
  for (auto x : xs) c.points.push_back({Rational(static_cast<long>(x)), Rational(0)});
  return c;
}

Membership membership(const PointConfig& c, std::size_t t, Family family) {
  const std::size_t k = c.size();
  std::vector<std::size_t> sizes;
  if (family == Family::Braid) {
    sizes = {1};
  } else if (family == Family::M) {
    if (t == 0) throw std::invalid_argument("t must be positive");
    sizes = {t < k ? t : 1};
  } else {
    if (t == 0) throw std::invalid_argument("t must be positive");
    for (std::size_t s = 1; s <= std::min(t, k > 0 ? k - 1 : 0); ++s) sizes.push_back(s);
    if (sizes.empty()) sizes = {1};
  }
  for (auto s : sizes) {
    if (s > k) continue;
    if (auto w = least_collision(c, s)) return {false, std::move(w)};
  }
  return {true, std::nullopt};
}

std::vector<ExactComplex> theta(const PointConfig& c, std::size_t t) {
  if (t > c.size()) throw std::invalid_argument("theta: t exceeds the number of points");
  std::vector<ExactComplex> out;
  for (const auto& subset : subsets_of_size(c.size(), t)) {
    ExactComplex sum{0, 0};
    for (auto i : subset) sum = sum + c.points[static_cast<std::size_t>(i)];
    out.push_back(sum);
  }
  return out;
}

bool pairwise_distinct(const std::vector<ExactComplex>& v) {
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool verify_pullback(const PointConfig& c, std::size_t t) {
  if (!pairwise_distinct(c.points)) {
    throw std::invalid_argument("verify_pullback: points are not distinct");
  }
  const bool inside = membership(c, t, Family::M).inside;
  return inside == pairwise_distinct(theta(c, t));
}

Rational stabilization_offset(const PointConfig& c, std::size_t t) {
  Rational m = 0;
  for (const auto& z : c.points) m = std::max(m, Rational(l1_norm(z)));
  return Rational(2 * static_cast<long>(t)) * (1 + m);
}

PointConfig stabilize(const PointConfig& c, std::size_t t) {
  PointConfig out = c;
  out.points.push_back({stabilization_offset(c, t), Rational(0)});
  return out;
}

bool stabilization_dominates(const PointConfig& stabilized, std::size_t t) {
  if (stabilized.size() == 0) return false;
  const auto& z = stabilized.points.back();
  std::vector<Rational> norms;
  for (std::size_t i = 0; i + 1 < stabilized.size(); ++i) norms.push_back(l1_norm(stabilized.points[i]));
  std::sort(norms.begin(), norms.end(), [](const Rational& a, const Rational& b) { return a > b; });
  Rational bound = 0;
  for (std::size_t i = 0; i < norms.size() && i + 1 < t; ++i) bound += norms[i];
  for (std::size_t i = 0; i < norms.size() && i < t; ++i) bound += norms[i];
  // z = (L, 0) with L > 0, so the Euclidean norm is L.
  return sgn(z.im) == 0 && z.re > bound;
}

SampleResult sample(std::size_t t, std::size_t k, Family family, const SampleOptions& opts) {
  if (opts.box < 1) throw std::invalid_argument("sample: box must be at least 1");
  const std::size_t budget = opts.trial_budget != 0 ? opts.trial_budget
                                                    : 1000 * std::max<std::size_t>(opts.count, 1);
  SampleResult out;
  const std::size_t batch = std::max<std::size_t>(256, 4 * opts.count);
  std::size_t next = 0;
  while (out.configs.size() < opts.count && next < budget) {
    const std::size_t n = std::min(batch, budget - next);
    std::vector<PointConfig> drawn(n);
    std::vector<char> ok(n, 0);
    parallel_for(n, [&](std::size_t j) {
      auto rng = trial_rng(opts.seed, next + j);
      PointConfig c;
      for (std::size_t i = 0; i < k; ++i) {
        const auto re = uniform(rng, -opts.box, opts.box);
        const auto im = uniform(rng, -opts.box, opts.box);
        c.points.push_back({Rational(static_cast<long>(re)), Rational(static_cast<long>(im))});
      }
      ok[j] = membership(c, t, family).inside ? 1 : 0;
      drawn[j] = std::move(c);
    });
    for (std::size_t j = 0; j < n && out.configs.size() < opts.count; ++j) {
      ++out.trials;
      if (ok[j]) {
        ++out.accepted;
        out.configs.push_back(std::move(drawn[j]));
      }
    }
    next += n;
  }
  return out;
}

PointConfig random_distinct_config(std::size_t k, std::uint64_t seed, std::size_t index,
                                   std::int64_t box, std::int64_t denominators) {
  auto rng = trial_rng(seed, index);
  for (;;) {
    PointConfig c;
    for (std::size_t i = 0; i < k; ++i) {
      ExactComplex z;
      z.re = Rational(static_cast<long>(uniform(rng, -box, box)),
                      static_cast<unsigned long>(uniform(rng, 1, denominators)));
      z.im = Rational(static_cast<long>(uniform(rng, -box, box)),
                      static_cast<unsigned long>(uniform(rng, 1, denominators)));
      z.re.canonicalize();
      z.im.canonicalize();
      c.points.push_back(std::move(z));
    }
    if (pairwise_distinct(c.points)) return c;
  }
}

std::optional<PointConfig> stabilization_failure_witness(std::size_t t, std::size_t k,
                                                         std::uint64_t seed, std::size_t samples) {
  auto is_witness = [&](const PointConfig& c) {
    return c.size() == k && membership(c, t, Family::M).inside &&
           !membership(stabilize(c, t), t, Family::M).inside;
  };
  std::vector<PointConfig> builtin;
  if (k >= 4) {
    std::vector<std::int64_t> xs{0, 3, 1, 2};
    std::int64_t far = 10;
    while (xs.size() < k) {
      xs.push_back(far);
      far *= 10;
    }
    builtin.push_back(PointConfig::real(xs));
  }
  for (const auto& c : builtin) {
    if (is_witness(c)) return c;
  }
  for (std::size_t i = 0; i < samples; ++i) {
    auto rng = trial_rng(seed, i);
    PointConfig c;
    for (std::size_t j = 0; j < k; ++j) {
      c.points.push_back({Rational(static_cast<long>(uniform(rng, -3, 3))),
                          Rational(static_cast<long>(uniform(rng, -3, 3)))});
    }
    if (is_witness(c)) return c;
  }
  return std::nullopt;
}

}  // namespace comarr
