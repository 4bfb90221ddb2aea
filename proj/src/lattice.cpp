#include "comarr/lattice.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace comarr {

void check_resource_limits(const HyperplaneSet& h, bool force) {
  if (h.size() > kMaxHyperplanes) {
    throw ResourceLimitError("arrangement has " + std::to_string(h.size()) +
                             " hyperplanes; the hard limit is " + std::to_string(kMaxHyperplanes));
  }
  if (!force && h.size() > kDefaultHyperplaneLimit) {
    throw ResourceLimitError("arrangement has " + std::to_string(h.size()) +
                             " hyperplanes; refusing more than " +
                             std::to_string(kDefaultHyperplaneLimit) + " without --force");
  }
}

namespace {

std::vector<std::size_t> mask_indices(const FlatMask& m, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (m.test(i)) out.push_back(i);
  }
  return out;
}

bool is_subset(const FlatMask& a, const FlatMask& b) { return (a & ~b).none(); }

}  // namespace

IntersectionLattice::IntersectionLattice(std::size_t ambient_dim, std::size_t hyperplane_count,
                                         std::vector<LatticeNode> nodes,
                                         std::vector<std::vector<std::size_t>> meets)
    : ambient_dim_(ambient_dim),
      hyperplane_count_(hyperplane_count),
      nodes_(std::move(nodes)),
      meets_(std::move(meets)) {
  covers_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    index_.emplace(nodes_[i].hyperplanes, i);
    for (std::size_t h = 0; h < hyperplane_count_; ++h) {
      const auto y = meets_[i][h];
      if (y != i) covers_[i].push_back(y);
    }
    std::sort(covers_[i].begin(), covers_[i].end());
    covers_[i].erase(std::unique(covers_[i].begin(), covers_[i].end()), covers_[i].end());
  }
}

std::optional<std::size_t> IntersectionLattice::find(const FlatMask& mask) const {
  auto it = index_.find(mask);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t IntersectionLattice::rank() const {
  std::size_t r = 0;
  for (const auto& n : nodes_) r = std::max(r, n.rank);
  return r;
}

IntersectionLattice build_lattice(const HyperplaneSet& h) {
  const std::size_t n = h.size();
  if (n > kMaxHyperplanes) throw ResourceLimitError("too many hyperplanes for a lattice");
  const std::size_t k = h.dim();

  std::vector<Subspace> hyperplane_spaces;
  hyperplane_spaces.reserve(n);
  for (const auto& hp : h) hyperplane_spaces.push_back(Subspace::hyperplane(hp.normal()));

  struct Raw {
    Subspace subspace;
    FlatMask mask;
    std::size_t rank;
  };
  std::vector<Raw> raw{{Subspace::ambient(k), FlatMask{}, 0}};
  // meet_masks[node][h]: mask of node ∩ H_h, resolved to indices below.
  std::vector<std::vector<FlatMask>> meet_masks;

  std::vector<std::size_t> level{0};
  while (!level.empty()) {
    std::vector<std::size_t> next;
    // For each hyperplane, next-level nodes containing it.
    std::vector<std::vector<std::size_t>> next_by_h(n);
    for (auto x : level) {
      meet_masks.resize(raw.size());
      std::vector<FlatMask> row(n);
      for (std::size_t hi = 0; hi < n; ++hi) {
        if (raw[x].mask.test(hi)) {
          row[hi] = raw[x].mask;
          continue;
        }
        // Known already? A next-level flat containing X and H_h is their join.
        std::optional<std::size_t> found;
        for (auto y : next_by_h[hi]) {
          if (is_subset(raw[x].mask, raw[y].mask)) {
            found = y;
            break;
          }
        }
        if (!found) {
          Subspace s = intersect(raw[x].subspace, hyperplane_spaces[hi]);
          FlatMask m;
          for (std::size_t j = 0; j < n; ++j) {
            if (raw[x].mask.test(j) || j == hi || s.annihilated_by(h[j].normal())) m.set(j);
          }
          const std::size_t id = raw.size();
          raw.push_back({std::move(s), m, raw[x].rank + 1});
          next.push_back(id);
          for (std::size_t j = 0; j < n; ++j) {
            if (m.test(j)) next_by_h[j].push_back(id);
          }
          found = id;
        }
        row[hi] = raw[*found].mask;
      }
      meet_masks.resize(raw.size());
      meet_masks[x] = std::move(row);
    }
    level = std::move(next);
  }

  // Canonical node order: by rank, then by the sorted list of contained
  // hyperplanes.
  std::vector<std::size_t> order(raw.size());
  std::vector<std::vector<std::size_t>> lists(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    order[i] = i;
    lists[i] = mask_indices(raw[i].mask, n);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (raw[a].rank != raw[b].rank) return raw[a].rank < raw[b].rank;
    return lists[a] < lists[b];
  });
  std::unordered_map<FlatMask, std::size_t> final_index;
  for (std::size_t pos = 0; pos < order.size(); ++pos) final_index.emplace(raw[order[pos]].mask, pos);

  std::vector<LatticeNode> nodes;
  std::vector<std::vector<std::size_t>> meets;
  nodes.reserve(raw.size());
  for (auto i : order) {
    nodes.push_back({raw[i].subspace, raw[i].rank, 0, raw[i].mask});
    std::vector<std::size_t> row(n);
    for (std::size_t hi = 0; hi < n; ++hi) row[hi] = final_index.at(meet_masks[i][hi]);
    meets.push_back(std::move(row));
  }

  // Moebius function from the defining recursion over the order ideal.
  nodes[0].mu = 1;
  for (std::size_t x = 1; x < nodes.size(); ++x) {
    std::int64_t acc = 0;
    for (std::size_t y = 0; y < x && nodes[y].rank < nodes[x].rank; ++y) {
      if (is_subset(nodes[y].hyperplanes, nodes[x].hyperplanes)) acc += nodes[y].mu;
    }
    nodes[x].mu = -acc;
  }

  return IntersectionLattice(k, n, std::move(nodes), std::move(meets));
}

IntPolynomial::IntPolynomial(std::vector<std::int64_t> coefficients)
    : coeffs_(std::move(coefficients)) {
  trim();
}

IntPolynomial IntPolynomial::monomial(std::size_t degree, std::int64_t c) {
  std::vector<std::int64_t> v(degree + 1, 0);
  v[degree] = c;
  return IntPolynomial(std::move(v));
}

void IntPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::int64_t IntPolynomial::evaluate(std::int64_t x) const {
  std::int64_t acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::string IntPolynomial::to_string(char var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int d = degree(); d >= 0; --d) {
    const auto c = coeffs_[static_cast<std::size_t>(d)];
    if (c == 0) continue;
    const auto mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1 || d == 0) os << mag;
    if (d >= 1) os << var;
    if (d >= 2) os << '^' << d;
    first = false;
  }
  return os.str();
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<std::int64_t> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return IntPolynomial(std::move(c));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<std::int64_t> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
  return IntPolynomial(std::move(c));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.coeffs_.empty() || b.coeffs_.empty()) return {};
  std::vector<std::int64_t> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return IntPolynomial(std::move(c));
}

IntPolynomial characteristic_polynomial(const IntersectionLattice& l, std::size_t ambient_dim) {
  std::vector<std::int64_t> c(ambient_dim + 1, 0);
  for (const auto& node : l.nodes()) {
    if (node.rank > ambient_dim) throw std::invalid_argument("ambient dimension below lattice rank");
    c[ambient_dim - node.rank] += node.mu;
  }
  return IntPolynomial(std::move(c));
}

IntPolynomial characteristic_polynomial(const IntersectionLattice& l) {
  return characteristic_polynomial(l, l.ambient_dim());
}

namespace {

class DeletionRestriction {
 public:
  IntPolynomial solve(const Subspace& w, std::vector<Subspace> hyps) {
    if (hyps.empty()) return IntPolynomial::monomial(w.dim());
    if (hyps.size() == 1) {
      return IntPolynomial::monomial(w.dim()) - IntPolynomial::monomial(w.dim() - 1);
    }
    std::sort(hyps.begin(), hyps.end());
    std::string key = canonical_key(w) + "|";
    for (const auto& s : hyps) key += canonical_key(s) + "|";
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const Subspace last = hyps.back();
    hyps.pop_back();
    std::vector<Subspace> restricted;
    restricted.reserve(hyps.size());
    for (const auto& s : hyps) restricted.push_back(intersect(s, last));
    std::sort(restricted.begin(), restricted.end());
    restricted.erase(std::unique(restricted.begin(), restricted.end()), restricted.end());

    auto result = solve(w, hyps) - solve(last, std::move(restricted));
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  std::map<std::string, IntPolynomial> memo_;
};

}  // namespace

IntPolynomial deletion_restriction_charpoly(const HyperplaneSet& h) {
  std::vector<Subspace> hyps;
  hyps.reserve(h.size());
  for (const auto& hp : h) hyps.push_back(Subspace::hyperplane(hp.normal()));
  DeletionRestriction dr;
  return dr.solve(Subspace::ambient(h.dim()), std::move(hyps));
}

IntPolynomial poincare_polynomial(const IntersectionLattice& l) {
  std::vector<std::int64_t> c(l.rank() + 1, 0);
  for (const auto& node : l.nodes()) c[node.rank] += node.mu < 0 ? -node.mu : node.mu;
  return IntPolynomial(std::move(c));
}

std::uint64_t region_count(const IntersectionLattice& l) {
  std::uint64_t total = 0;
  for (const auto& node : l.nodes()) total += static_cast<std::uint64_t>(node.mu < 0 ? -node.mu : node.mu);
  return total;
}

}  // namespace comarr
