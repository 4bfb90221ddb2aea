#include "comarr/arrangement.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "comarr/exact.hpp"

namespace comarr {

std::string to_string(Family f) {
  switch (f) {
    case Family::M: return "M";
    case Family::Mprime: return "Mprime";
    case Family::Braid: return "Braid";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "M") return Family::M;
  if (name == "Mprime") return Family::Mprime;
  if (name == "Braid") return Family::Braid;
  throw std::invalid_argument("unknown arrangement family: " + std::string(name));
}

void ArrangementSpec::validate() const {
  if (family != Family::Braid && t == 0) {
    throw std::invalid_argument("t must be at least 1 for the centroid families");
  }
}

Hyperplane::Hyperplane(std::vector<std::int64_t> normal) : normal_(std::move(normal)) {
  std::int64_t g = 0;
  for (auto v : normal_) g = std::gcd(g, v < 0 ? -v : v);
  if (g == 0) throw std::invalid_argument("hyperplane normal is zero");
  auto first = std::find_if(normal_.begin(), normal_.end(), [](std::int64_t v) { return v != 0; });
  const std::int64_t scale = *first < 0 ? -g : g;
  for (auto& v : normal_) v /= scale;
}

std::pair<Hyperplane, int> Hyperplane::permuted(const Permutation& g) const {
  if (g.size() != normal_.size()) throw std::invalid_argument("permutation degree mismatch");
  std::vector<std::int64_t> img(normal_.size());
  for (std::size_t i = 0; i < normal_.size(); ++i) {
    img[static_cast<std::size_t>(g(static_cast<int>(i)))] = normal_[i];
  }
  Hyperplane h(img);
  return {h, h.normal_ == img ? 1 : -1};
}

bool canonical_less(const Hyperplane& a, const Hyperplane& b) {
  const auto& x = a.normal();
  const auto& y = b.normal();
  std::size_t i = 0, j = 0;
  for (;;) {
    while (i < x.size() && x[i] == 0) ++i;
    while (j < y.size() && y[j] == 0) ++j;
    const bool x_done = i == x.size();
    const bool y_done = j == y.size();
    if (x_done || y_done) return x_done && !y_done;
    if (i != j) return i < j;
    if (x[i] != y[j]) return x[i] < y[j];
    ++i;
    ++j;
  }
}

HyperplaneSet::HyperplaneSet(std::size_t k, std::vector<Hyperplane> hyperplanes)
    : k_(k), hyperplanes_(std::move(hyperplanes)) {
  for (const auto& h : hyperplanes_) {
    if (h.dim() != k_) throw std::invalid_argument("hyperplane dimension differs from k");
  }
  std::sort(hyperplanes_.begin(), hyperplanes_.end(), canonical_less);
  hyperplanes_.erase(std::unique(hyperplanes_.begin(), hyperplanes_.end()), hyperplanes_.end());
}

std::optional<std::size_t> HyperplaneSet::index_of(const Hyperplane& h) const {
  auto it = std::lower_bound(hyperplanes_.begin(), hyperplanes_.end(), h, canonical_less);
  if (it == hyperplanes_.end() || !(*it == h)) return std::nullopt;
  return static_cast<std::size_t>(it - hyperplanes_.begin());
}

bool HyperplaneSet::is_subset_of(const HyperplaneSet& other) const {
  if (k_ != other.k_) return false;
  return std::all_of(hyperplanes_.begin(), hyperplanes_.end(),
                     [&](const Hyperplane& h) { return other.contains(h); });
}

bool HyperplaneSet::is_symmetric() const {
  for (std::size_t i = 0; i + 1 < k_; ++i) {
    const auto g = Permutation::transposition(k_, static_cast<int>(i), static_cast<int>(i + 1));
    for (const auto& h : hyperplanes_) {
      if (!contains(h.permuted(g).first)) return false;
    }
  }
  return true;
}

std::vector<std::vector<int>> subsets_of_size(std::size_t n, std::size_t t) {
  std::vector<std::vector<int>> out;
  if (t > n) return out;
  std::vector<int> cur(t);
  std::iota(cur.begin(), cur.end(), 0);
  for (;;) {
    out.push_back(cur);
    // Advance to the next combination in lexicographic order.
    std::size_t i = t;
    while (i > 0 && cur[i - 1] == static_cast<int>(n - t + i - 1)) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < t; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

namespace {

std::vector<Hyperplane> braid_hyperplanes(std::size_t k) {
  std::vector<Hyperplane> out;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      std::vector<std::int64_t> n(k, 0);
      n[i] = 1;
      n[j] = -1;
      out.emplace_back(std::move(n));
    }
  }
  return out;
}

/// Equal-sum hyperplanes for pairs of distinct t-subsets, t < k.
std::vector<Hyperplane> centroid_hyperplanes(std::size_t t, std::size_t k) {
  const auto subsets = subsets_of_size(k, t);
  std::vector<std::vector<std::int64_t>> indicator;
  indicator.reserve(subsets.size());
  for (const auto& s : subsets) {
    std::vector<std::int64_t> v(k, 0);
    for (int i : s) v[static_cast<std::size_t>(i)] = 1;
    indicator.push_back(std::move(v));
  }
  std::vector<Hyperplane> out;
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    for (std::size_t b = a + 1; b < subsets.size(); ++b) {
      std::vector<std::int64_t> n(k);
      for (std::size_t i = 0; i < k; ++i) n[i] = indicator[a][i] - indicator[b][i];
      out.emplace_back(std::move(n));
    }
  }
  return out;
}

std::vector<Hyperplane> family_m(std::size_t t, std::size_t k) {
  if (t >= k) return braid_hyperplanes(k);
  return centroid_hyperplanes(t, k);
}

}  // namespace

HyperplaneSet build(const ArrangementSpec& spec) {
  spec.validate();
  const std::size_t k = spec.k;
  switch (spec.family) {
    case Family::Braid:
      return HyperplaneSet(k, braid_hyperplanes(k));
    case Family::M:
      return HyperplaneSet(k, family_m(spec.t, k));
    case Family::Mprime: {
      if (spec.t > k) return HyperplaneSet(k, braid_hyperplanes(k));
      std::vector<Hyperplane> all;
      for (std::size_t s = 1; s <= spec.t; ++s) {
        auto part = family_m(s, k);
        all.insert(all.end(), part.begin(), part.end());
      }
      return HyperplaneSet(k, std::move(all));
    }
  }
  throw std::logic_error("unreachable family");
}

Essentialization essentialize(const HyperplaneSet& h) {
  Essentialization out;
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& hp : h) rows.push_back(hp.normal());
  const auto reduced = rref(RatMatrix::from_integers(rows, h.dim()));
  out.rank = reduced.rank;
  out.lineality_dim = h.dim() - reduced.rank;

  // In coordinates y = R x (R = nonzero RREF rows), a normal n equals c^T R
  // with c read off at the pivot columns.
  std::vector<Hyperplane> normals;
  normals.reserve(h.size());
  for (const auto& hp : h) {
    std::vector<std::int64_t> c;
    c.reserve(reduced.rank);
    for (auto col : reduced.pivot_columns) c.push_back(hp.normal()[col]);
    normals.emplace_back(std::move(c));
  }
  out.reduced = HyperplaneSet(reduced.rank, normals);
  out.index_map.reserve(normals.size());
  for (const auto& n : normals) out.index_map.push_back(*out.reduced.index_of(n));
  return out;
}

std::vector<std::pair<std::size_t, int>> permute_hyperplanes(const HyperplaneSet& h,
                                                             const Permutation& g) {
  std::vector<std::pair<std::size_t, int>> out;
  out.reserve(h.size());
  for (const auto& hp : h) {
    auto [img, s] = hp.permuted(g);
    auto idx = h.index_of(img);
    if (!idx) throw std::invalid_argument("hyperplane set is not stable under the permutation");
    out.emplace_back(*idx, s);
  }
  return out;
}

std::vector<std::vector<std::size_t>> hyperplane_orbits(const HyperplaneSet& h) {
  std::vector<std::vector<std::pair<std::size_t, int>>> gens;
  for (std::size_t i = 0; i + 1 < h.dim(); ++i) {
    gens.push_back(permute_hyperplanes(
        h, Permutation::transposition(h.dim(), static_cast<int>(i), static_cast<int>(i + 1))));
  }
  std::vector<int> block_of(h.size(), -1);
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t start = 0; start < h.size(); ++start) {
    if (block_of[start] >= 0) continue;
    const int b = static_cast<int>(blocks.size());
    std::vector<std::size_t> members{start};
    block_of[start] = b;
    for (std::size_t q = 0; q < members.size(); ++q) {
      for (const auto& g : gens) {
        const auto next = g[members[q]].first;
        if (block_of[next] < 0) {
          block_of[next] = b;
          members.push_back(next);
        }
      }
    }
    std::sort(members.begin(), members.end());
    blocks.push_back(std::move(members));
  }
  return blocks;
}

}  // namespace comarr
