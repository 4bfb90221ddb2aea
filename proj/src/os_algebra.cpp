#include "comarr/os_algebra.hpp"

#include <algorithm>
#include <stdexcept>

#include "comarr/sparse.hpp"

namespace comarr {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("OS coefficient overflow");
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("OS coefficient overflow");
  return out;
}

/// Sorts in place and returns the sign of the sorting permutation, or 0 when
/// an index repeats.
int sort_with_sign(std::vector<std::size_t>& v) {
  int sign = 1;
  // Insertion sort: the parity of the swaps is the permutation sign.
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] == v[i - 1]) return 0;
  }
  return sign;
}

}  // namespace

std::int64_t OsElement::coefficient(const NbcMonomial& m) const {
  auto it = terms.find(m);
  return it == terms.end() ? 0 : it->second;
}

void OsElement::add(const NbcMonomial& m, std::int64_t c) {
  if (c == 0) return;
  auto [it, inserted] = terms.emplace(m, c);
  if (inserted) return;
  it->second = checked_add(it->second, c);
  if (it->second == 0) terms.erase(it);
}

OsAlgebra::OsAlgebra(const HyperplaneSet& h, const IntersectionLattice& l) : h_(&h), l_(&l) {
  if (l.hyperplane_count() != h.size()) {
    throw std::invalid_argument("lattice does not belong to this hyperplane set");
  }
  const std::size_t r = l.rank();
  bases_.assign(r + 1, {});
  bases_[0].push_back({});

  // A strictly increasing S = (s_1 < ... < s_m) is NBC iff each suffix
  // T_i = (s_i, ..., s_m) is independent and s_i is the least hyperplane in
  // the flat it spans. Build suffixes by prepending smaller indices.
  struct Frame {
    std::size_t node;
    std::vector<std::size_t> suffix;  // decreasing
  };
  std::vector<Frame> stack{{0, {}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const std::size_t limit = f.suffix.empty() ? h.size() : f.suffix.back();
    for (std::size_t s = 0; s < limit; ++s) {
      const std::size_t y = l.meet(f.node, s);
      if (l.node(y).rank != l.node(f.node).rank + 1) continue;
      if (l.node(y).hyperplanes._Find_first() != s) continue;
      Frame g{y, f.suffix};
      g.suffix.push_back(s);
      bases_[g.suffix.size()].emplace_back(g.suffix.rbegin(), g.suffix.rend());
      if (g.suffix.size() < r) stack.push_back(std::move(g));
    }
  }
  for (std::size_t d = 0; d <= r; ++d) {
    std::sort(bases_[d].begin(), bases_[d].end());
    for (std::size_t i = 0; i < bases_[d].size(); ++i) index_.emplace(bases_[d][i], i);
  }
}

std::size_t OsAlgebra::betti(std::size_t degree) const {
  return degree < bases_.size() ? bases_[degree].size() : 0;
}

const std::vector<NbcMonomial>& OsAlgebra::nbc_basis(std::size_t degree) const {
  static const std::vector<NbcMonomial> kEmpty;
  return degree < bases_.size() ? bases_[degree] : kEmpty;
}

std::optional<std::size_t> OsAlgebra::basis_index(const NbcMonomial& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

OsElement OsAlgebra::straighten(const std::vector<std::size_t>& indices) const {
  for (auto i : indices) {
    if (i >= h_->size()) throw std::out_of_range("hyperplane index out of range");
  }
  OsElement out;
  out.degree = indices.size();
  std::vector<std::size_t> s = indices;
  const int sign = sort_with_sign(s);
  if (sign == 0) return out;
  const OsElement reduced = straighten_sorted(s);
  for (const auto& [m, c] : reduced.terms) out.add(m, sign * c);
  return out;
}

OsElement OsAlgebra::straighten_sorted(const NbcMonomial& s) const {
  OsElement out;
  out.degree = s.size();
  if (s.empty()) {
    out.add(s, 1);
    return out;
  }
  if (l_->node(l_->closure(s)).rank < s.size()) return out;  // dependent
  if (index_.contains(s)) {
    out.add(s, 1);
    return out;
  }
  {
    std::lock_guard lock(memo_mutex_);
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
  }

  // Longest suffix whose flat contains a hyperplane below its least element.
  const std::size_t m = s.size();
  std::size_t node = 0;
  std::size_t start = m;
  std::size_t lower = 0;
  for (std::size_t i = m; i-- > 0;) {
    node = l_->meet(node, s[i]);
    const std::size_t least = l_->node(node).hyperplanes._Find_first();
    if (least < s[i]) {
      start = i;
      lower = least;
      break;
    }
  }
  if (start == m) throw std::logic_error("independent non-NBC monomial without broken circuit");

  // Shrink the suffix to a minimal T' with H_lower in its span; then
  // {H_lower} u T' is a circuit and T' the broken circuit.
  std::vector<std::size_t> t(s.begin() + static_cast<std::ptrdiff_t>(start), s.end());
  for (std::size_t i = t.size(); i-- > 0;) {
    std::vector<std::size_t> trial = t;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    if (l_->node(l_->closure(trial)).hyperplanes.test(lower)) t = std::move(trial);
  }
  std::vector<std::size_t> rest;
  std::set_difference(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(rest));

  // e_S = sign * e_{T'} e_{rest}; e_{T'} = sum_{j>=1} (-1)^{j+1} e_{C - c_j}.
  std::vector<std::size_t> tr = t;
  tr.insert(tr.end(), rest.begin(), rest.end());
  const int shuffle = sort_with_sign(tr);

  std::vector<std::size_t> circuit{lower};
  circuit.insert(circuit.end(), t.begin(), t.end());
  for (std::size_t j = 1; j < circuit.size(); ++j) {
    std::vector<std::size_t> term;
    for (std::size_t a = 0; a < circuit.size(); ++a) {
      if (a != j) term.push_back(circuit[a]);
    }
    term.insert(term.end(), rest.begin(), rest.end());
    const int term_sign = sort_with_sign(term);
    if (term_sign == 0) continue;
    const int coeff = shuffle * term_sign * ((j % 2 == 1) ? 1 : -1);
    const OsElement sub = straighten_sorted(term);
    for (const auto& [mono, c] : sub.terms) out.add(mono, checked_mul(coeff, c));
  }

  std::lock_guard lock(memo_mutex_);
  memo_.emplace(s, out);
  return out;
}

void OsAlgebra::require_symmetric() const {
  if (!h_->is_symmetric()) {
    throw std::invalid_argument("arrangement is not stable under coordinate permutations");
  }
}

std::vector<std::vector<std::int64_t>> OsAlgebra::action_matrix(const Permutation& g,
                                                                std::size_t degree) const {
  require_symmetric();
  const auto image = permute_hyperplanes(*h_, g);
  const auto& basis = nbc_basis(degree);
  std::vector<std::vector<std::int64_t>> out(basis.size(),
                                             std::vector<std::int64_t>(basis.size(), 0));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::vector<std::size_t> mapped;
    mapped.reserve(degree);
    for (auto hi : basis[i]) mapped.push_back(image[hi].first);
    for (const auto& [m, c] : straighten(mapped).terms) out[i][index_.at(m)] = c;
  }
  return out;
}

std::int64_t OsAlgebra::character(const Permutation& g, std::size_t degree) const {
  const auto a = action_matrix(g, degree);
  std::int64_t trace = 0;
  for (std::size_t i = 0; i < a.size(); ++i) trace = checked_add(trace, a[i][i]);
  return trace;
}

std::size_t OsAlgebra::isotypic_dim(Twist rep, std::size_t degree) const {
  require_symmetric();
  std::int64_t total = 0;
  std::int64_t order = 0;
  for (const auto& cls : conjugacy_classes(h_->dim())) {
    const auto chi = character_value(rep, cls.representative);
    const auto sz = static_cast<std::int64_t>(cls.size);
    total = checked_add(total, checked_mul(sz * chi, character(cls.representative, degree)));
    order += sz;
  }
  if (total < 0 || total % order != 0) {
    throw std::logic_error("character average is not a nonnegative integer");
  }
  return static_cast<std::size_t>(total / order);
}

namespace {

/// Rows: images in OS^r(full) of the NBC basis of OS^r(sub).
std::vector<OsElement> restriction_images(const OsAlgebra& sub, const OsAlgebra& full,
                                          std::size_t degree) {
  if (sub.hyperplanes().dim() != full.hyperplanes().dim() ||
      !sub.hyperplanes().is_subset_of(full.hyperplanes())) {
    throw std::invalid_argument("subarrangement is not contained in the target arrangement");
  }
  std::vector<std::size_t> to_full(sub.hyperplanes().size());
  for (std::size_t i = 0; i < to_full.size(); ++i) {
    to_full[i] = *full.hyperplanes().index_of(sub.hyperplanes()[i]);
  }
  std::vector<OsElement> out;
  for (const auto& m : sub.nbc_basis(degree)) {
    std::vector<std::size_t> mapped;
    for (auto hi : m) mapped.push_back(to_full[hi]);
    out.push_back(full.straighten(mapped));
  }
  return out;
}

}  // namespace

std::size_t restriction_rank(const OsAlgebra& sub, const OsAlgebra& full, std::size_t degree) {
  const auto images = restriction_images(sub, full, degree);
  SparseMatrix m(images.size(), full.betti(degree));
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (const auto& [mono, c] : images[i].terms) {
      m.add(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(*full.basis_index(mono)), c);
    }
  }
  return rank_over_rationals(m);
}

std::size_t equivariant_restriction_rank(const OsAlgebra& sub, const OsAlgebra& full,
                                         std::size_t degree, Twist rep) {
  const auto images = restriction_images(sub, full, degree);
  const std::size_t n = sub.betti(degree);
  // P = sum_g chi(g) A_g is |G| times the isotypic projector; rank(P R)
  // is the rank of R on the isotypic part.
  std::vector<std::vector<std::int64_t>> p(n, std::vector<std::int64_t>(n, 0));
  for (const auto& g : all_permutations(sub.hyperplanes().dim())) {
    const auto chi = character_value(rep, g);
    const auto a = sub.action_matrix(g, degree);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) p[i][j] = checked_add(p[i][j], chi * a[i][j]);
    }
  }
  SparseMatrix pr(n, full.betti(degree));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (p[i][j] == 0) continue;
      for (const auto& [mono, c] : images[j].terms) {
        pr.add(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(*full.basis_index(mono)),
               checked_mul(p[i][j], c));
      }
    }
  }
  return rank_over_rationals(pr.compressed());
}

}  // namespace comarr
