#include "comarr/salvetti.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "comarr/parallel.hpp"

namespace comarr {

namespace {

char sign_char(int s) { return s > 0 ? '+' : (s < 0 ? '-' : '0'); }

char flip(char c) { return c == '+' ? '-' : (c == '-' ? '+' : '0'); }

FlatMask zero_mask(const SignVector& s) {
  FlatMask m;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '0') m.set(i);
  }
  return m;
}

std::uint64_t cell_key(std::size_t chamber, std::size_t face, std::size_t face_count) {
  return static_cast<std::uint64_t>(chamber) * face_count + face;
}

int facet_sign(const std::vector<Incidence>& facets, std::size_t cell) {
  auto it = std::lower_bound(facets.begin(), facets.end(), cell,
                             [](const Incidence& a, std::size_t c) { return a.cell < c; });
  if (it == facets.end() || it->cell != cell) return 0;
  return it->sign;
}

}  // namespace

std::optional<std::size_t> FacePoset::find(const SignVector& s) const {
  auto it = index.find(s);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

SignVector compose(const SignVector& x, const SignVector& y) {
  SignVector out = x;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] == '0') out[i] = y[i];
  }
  return out;
}

bool face_leq(const SignVector& f, const SignVector& g) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != '0' && f[i] != g[i]) return false;
  }
  return true;
}

FacePoset enumerate_faces(const HyperplaneSet& h, const IntersectionLattice& l) {
  const std::size_t n = h.size();
  FacePoset out;
  out.rank = l.rank();

  // Cocircuits: both signs of a vector in a corank-one flat that is not in
  // the lineality space.
  std::vector<SignVector> cocircuits;
  for (const auto& node : l.nodes()) {
    if (node.rank + 1 != out.rank) continue;
    for (const auto& v : node.subspace.basis()) {
      SignVector s(n, '0');
      bool nonzero = false;
      for (std::size_t i = 0; i < n; ++i) {
        Rational dot = 0;
        const auto& normal = h[i].normal();
        for (std::size_t j = 0; j < normal.size(); ++j) {
          if (normal[j] != 0) dot += static_cast<long>(normal[j]) * v[j];
        }
        s[i] = sign_char(sgn(dot));
        nonzero = nonzero || s[i] != '0';
      }
      if (!nonzero) continue;
      cocircuits.push_back(s);
      for (auto& c : s) c = flip(c);
      cocircuits.push_back(std::move(s));
      break;
    }
  }

  auto codim_of = [&](const SignVector& s) {
    auto node = l.find(zero_mask(s));
    if (!node) throw ComplexError("zero set of a covector is not a flat");
    return l.node(*node).rank;
  };

  std::unordered_map<SignVector, std::size_t> seen;
  std::vector<SignVector> order;
  std::vector<std::size_t> codims;
  std::vector<std::set<std::size_t>> raw_covers;
  auto intern = [&](SignVector s) -> std::size_t {
    auto [it, inserted] = seen.emplace(s, order.size());
    if (inserted) {
      codims.push_back(codim_of(s));
      order.push_back(std::move(s));
      raw_covers.emplace_back();
    }
    return it->second;
  };
  intern(SignVector(n, '0'));
  for (std::size_t x = 0; x < order.size(); ++x) {
    if (codims[x] == 0) continue;
    for (const auto& y : cocircuits) {
      const std::size_t z = intern(compose(order[x], y));
      if (codims[z] + 1 == codims[x]) raw_covers[x].insert(z);
    }
  }

  std::vector<std::size_t> perm(order.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return order[a] < order[b]; });
  std::vector<std::size_t> new_index(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) new_index[perm[i]] = i;

  out.faces.reserve(perm.size());
  for (auto p : perm) {
    out.faces.push_back(order[p]);
    out.codim.push_back(codims[p]);
    std::vector<std::size_t> cov;
    for (auto c : raw_covers[p]) cov.push_back(new_index[c]);
    std::sort(cov.begin(), cov.end());
    out.covers.push_back(std::move(cov));
  }
  for (std::size_t i = 0; i < out.faces.size(); ++i) {
    out.index.emplace(out.faces[i], i);
    if (out.codim[i] == 0) out.chambers.push_back(i);
  }
  return out;
}

SparseMatrix ChainComplex::boundary(std::size_t d) const {
  if (d < boundaries.size()) return boundaries[d];
  return SparseMatrix(d == 0 ? 0 : size(d - 1), size(d));
}

std::int64_t ChainComplex::euler_characteristic() const {
  std::int64_t chi = 0;
  for (std::size_t d = 0; d < sizes.size(); ++d) {
    chi += (d % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(sizes[d]);
  }
  return chi;
}

SalvettiComplex::SalvettiComplex(FacePoset faces, std::vector<std::vector<SalvettiCell>> cells,
                                 std::vector<std::vector<std::vector<Incidence>>> facets)
    : faces_(std::move(faces)), cells_(std::move(cells)), facets_(std::move(facets)) {
  lookup_.resize(cells_.size());
  const std::size_t nf = faces_.faces.size();
  for (std::size_t d = 0; d < cells_.size(); ++d) {
    lookup_[d].reserve(cells_[d].size());
    for (std::size_t i = 0; i < cells_[d].size(); ++i) {
      lookup_[d].emplace(cell_key(cells_[d][i].chamber, cells_[d][i].face, nf),
                         static_cast<std::uint32_t>(i));
    }
  }
}

std::optional<std::size_t> SalvettiComplex::find(std::size_t d, std::size_t chamber,
                                                 std::size_t face) const {
  if (d >= lookup_.size()) return std::nullopt;
  auto it = lookup_[d].find(cell_key(chamber, face, faces_.faces.size()));
  if (it == lookup_[d].end()) return std::nullopt;
  return it->second;
}

ChainComplex SalvettiComplex::chain_complex() const {
  ChainComplex out;
  for (std::size_t d = 0; d < cells_.size(); ++d) out.sizes.push_back(cells_[d].size());
  out.boundaries.emplace_back(0, size(0));
  for (std::size_t d = 1; d < cells_.size(); ++d) {
    SparseMatrix m(size(d - 1), size(d));
    for (std::size_t i = 0; i < cells_[d].size(); ++i) {
      for (const auto& inc : facets_[d][i]) m.add(inc.cell, static_cast<std::uint32_t>(i), inc.sign);
    }
    out.boundaries.push_back(m.compressed());
  }
  return out;
}

SalvettiComplex build_salvetti(FacePoset faces) {
  const std::size_t nf = faces.faces.size();
  const std::size_t top = faces.rank;

  // Chambers above each face, by increasing codimension.
  std::vector<std::vector<std::uint32_t>> star(nf);
  std::vector<std::size_t> by_codim(nf);
  for (std::size_t i = 0; i < nf; ++i) by_codim[i] = i;
  std::stable_sort(by_codim.begin(), by_codim.end(),
                   [&](std::size_t a, std::size_t b) { return faces.codim[a] < faces.codim[b]; });
  for (auto f : by_codim) {
    if (faces.codim[f] == 0) {
      star[f] = {static_cast<std::uint32_t>(f)};
      continue;
    }
    std::vector<std::uint32_t> acc;
    for (auto g : faces.covers[f]) acc.insert(acc.end(), star[g].begin(), star[g].end());
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    star[f] = std::move(acc);
  }

  std::vector<std::vector<SalvettiCell>> cells(top + 1);
  for (std::size_t f = 0; f < nf; ++f) {
    for (auto c : star[f]) cells[faces.codim[f]].push_back({c, static_cast<std::uint32_t>(f)});
  }
  for (auto& level : cells) {
    std::sort(level.begin(), level.end(), [](const SalvettiCell& a, const SalvettiCell& b) {
      return std::pair(a.chamber, a.face) < std::pair(b.chamber, b.face);
    });
  }
  std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> lookup(top + 1);
  for (std::size_t d = 0; d <= top; ++d) {
    for (std::size_t i = 0; i < cells[d].size(); ++i) {
      lookup[d].emplace(cell_key(cells[d][i].chamber, cells[d][i].face, nf),
                        static_cast<std::uint32_t>(i));
    }
  }

  std::vector<std::vector<std::vector<Incidence>>> facets(top + 1);
  facets[0].resize(cells[0].size());
  for (std::size_t d = 1; d <= top; ++d) {
    facets[d].resize(cells[d].size());
    parallel_for(cells[d].size(), [&](std::size_t i) {
      const auto& cell = cells[d][i];
      const auto& chamber = faces.faces[cell.chamber];
      auto& out = facets[d][i];
      for (auto g : faces.covers[cell.face]) {
        const auto c2 = faces.index.at(compose(faces.faces[g], chamber));
        out.push_back({lookup[d - 1].at(cell_key(c2, g, nf)), 0});
      }
      std::sort(out.begin(), out.end(),
                [](const Incidence& a, const Incidence& b) { return a.cell < b.cell; });

      if (d == 1) {
        if (out.size() != 2) throw ComplexError("1-cell without exactly two vertices");
        for (auto& inc : out) inc.sign = cells[0][inc.cell].chamber == cell.chamber ? -1 : 1;
        return;
      }
      // Ridge -> (position among facets, incidence of facet on ridge).
      std::map<std::uint32_t, std::vector<std::pair<std::size_t, int>>> ridges;
      for (std::size_t a = 0; a < out.size(); ++a) {
        for (const auto& r : facets[d - 1][out[a].cell]) ridges[r.cell].emplace_back(a, r.sign);
      }
      for (const auto& [r, list] : ridges) {
        if (list.size() != 2) throw ComplexError("ridge not shared by exactly two facets");
      }
      std::vector<std::vector<std::pair<std::uint32_t, int>>> by_facet(out.size());
      for (std::size_t a = 0; a < out.size(); ++a) {
        for (const auto& r : facets[d - 1][out[a].cell]) by_facet[a].emplace_back(r.cell, r.sign);
      }
      out[0].sign = 1;
      std::deque<std::size_t> queue{0};
      while (!queue.empty()) {
        const std::size_t a = queue.front();
        queue.pop_front();
        for (const auto& [r, sa] : by_facet[a]) {
          for (const auto& [b, sb] : ridges[r]) {
            if (b == a) continue;
            const int want = -out[a].sign * sa * sb;
            if (out[b].sign == 0) {
              out[b].sign = want;
              queue.push_back(b);
            } else if (out[b].sign != want) {
              throw ComplexError("inconsistent facet orientation");
            }
          }
        }
      }
      for (const auto& inc : out) {
        if (inc.sign == 0) throw ComplexError("cell boundary is not connected through ridges");
      }
    });
  }

  // d o d = 0.
  for (std::size_t d = 2; d <= top; ++d) {
    parallel_for(cells[d].size(), [&](std::size_t i) {
      std::map<std::uint32_t, int> acc;
      for (const auto& t : facets[d][i]) {
        for (const auto& r : facets[d - 1][t.cell]) acc[r.cell] += t.sign * r.sign;
      }
      for (const auto& [r, v] : acc) {
        if (v != 0) throw ComplexError("boundary of boundary is nonzero");
      }
    });
  }
  return SalvettiComplex(std::move(faces), std::move(cells), std::move(facets));
}

std::size_t CellAction::apply(std::size_t g, std::size_t d, std::size_t cell) const {
  return orbit_cells_[d][orbit_[d][cell]][group_.multiply(g, element_[d][cell])];
}

int CellAction::sign(std::size_t g, std::size_t d, std::size_t cell) const {
  return eps_[d][apply(g, d, cell)] * eps_[d][cell];
}

CellAction group_action(const SalvettiComplex& complex, const HyperplaneSet& h) {
  if (!h.is_symmetric()) {
    throw std::invalid_argument("arrangement is not stable under coordinate permutations");
  }
  CellAction act(h.dim());
  const auto& group = act.group_;
  const std::size_t order = group.order();
  const auto& fp = complex.faces();
  const std::size_t nf = fp.faces.size();

  std::vector<std::vector<std::uint32_t>> face_image(order, std::vector<std::uint32_t>(nf));
  parallel_for(order, [&](std::size_t g) {
    const auto perm = permute_hyperplanes(h, group.element(g));
    for (std::size_t f = 0; f < nf; ++f) {
      const auto& s = fp.faces[f];
      SignVector t(s.size(), '0');
      for (std::size_t i = 0; i < s.size(); ++i) {
        t[perm[i].first] = perm[i].second > 0 ? s[i] : flip(s[i]);
      }
      auto it = fp.index.find(t);
      if (it == fp.index.end()) throw ComplexError("permuted sign vector is not a face");
      face_image[g][f] = static_cast<std::uint32_t>(it->second);
    }
  });

  const std::size_t top = complex.top_dim();
  const std::size_t id = group.index_of(Permutation::identity(h.dim()));
  constexpr std::uint32_t kUnset = UINT32_MAX;
  act.orbit_cells_.resize(top + 1);
  act.orbit_.resize(top + 1);
  act.element_.resize(top + 1);
  act.eps_.resize(top + 1);
  for (std::size_t d = 0; d <= top; ++d) {
    const std::size_t n = complex.size(d);
    act.orbit_[d].assign(n, kUnset);
    act.element_[d].assign(n, kUnset);
    act.eps_[d].assign(n, 0);
    for (std::size_t base = 0; base < n; ++base) {
      if (act.orbit_[d][base] != kUnset) continue;
      const auto orbit = static_cast<std::uint32_t>(act.orbit_cells_[d].size());
      std::vector<std::uint32_t> members(order);
      const auto& bc = complex.cell(d, base);
      for (std::size_t g = 0; g < order; ++g) {
        auto target = complex.find(d, face_image[g][bc.chamber], face_image[g][bc.face]);
        if (!target) throw ComplexError("permuted cell is not a cell");
        if (act.orbit_[d][*target] != kUnset) {
          throw ComplexError("action is not free on cell " + std::to_string(d) + ":" +
                             std::to_string(base) + " [" + fp.faces[bc.chamber] + ", " +
                             fp.faces[bc.face] + "]");
        }
        members[g] = static_cast<std::uint32_t>(*target);
        act.orbit_[d][*target] = orbit;
        act.element_[d][*target] = static_cast<std::uint32_t>(g);
      }
      if (members[id] != base) throw ComplexError("identity moves a cell");
      act.orbit_cells_[d].push_back(std::move(members));
    }
    // eps(g, base) from the least facet: [g.s : g.t] eps(g, t) = eps(g, s) [s : t].
    for (std::size_t orbit = 0; orbit < act.orbit_cells_[d].size(); ++orbit) {
      const auto& members = act.orbit_cells_[d][orbit];
      if (d == 0) {
        for (auto c : members) act.eps_[d][c] = 1;
        continue;
      }
      const std::size_t base = members[id];
      const Incidence first = complex.facets(d, base).front();
      for (std::size_t g = 0; g < order; ++g) {
        const std::size_t gt = act.apply(g, d - 1, first.cell);
        const int eps_t = act.sign(g, d - 1, first.cell);
        const int inc = facet_sign(complex.facets(d, members[g]), gt);
        if (inc == 0) throw ComplexError("permuted facet is not a facet");
        act.eps_[d][members[g]] = static_cast<std::int8_t>(first.sign * eps_t * inc);
      }
    }
  }

  // Chain-map check for the generators; the rest follows multiplicatively.
  for (auto s : group.generators()) {
    for (std::size_t d = 1; d <= top; ++d) {
      parallel_for(complex.size(d), [&](std::size_t c) {
        const std::size_t sc = act.apply(s, d, c);
        const int es = act.sign(s, d, c);
        const auto& src = complex.facets(d, c);
        const auto& dst = complex.facets(d, sc);
        bool ok = src.size() == dst.size();
        for (std::size_t i = 0; ok && i < src.size(); ++i) {
          const int inc = facet_sign(dst, act.apply(s, d - 1, src[i].cell));
          ok = inc != 0 && src[i].sign * act.sign(s, d - 1, src[i].cell) == es * inc;
        }
        if (!ok) {
          throw ComplexError("group action does not commute with the boundary at cell " +
                             std::to_string(d) + ":" + std::to_string(c));
        }
      });
    }
  }
  return act;
}

ChainComplex quotient_complex(const SalvettiComplex& complex, const CellAction& action, Twist twist) {
  const auto& group = action.group();
  const std::size_t id = group.index_of(Permutation::identity(group.degree()));
  auto coefficient = [&](std::size_t d, std::size_t cell) {
    return action.sign_of(d, cell) *
           character_value(twist, group.element(action.element_of(d, cell)));
  };
  ChainComplex out;
  for (std::size_t d = 0; d <= complex.top_dim(); ++d) out.sizes.push_back(action.orbit_count(d));
  out.boundaries.emplace_back(0, out.sizes[0]);
  for (std::size_t d = 1; d <= complex.top_dim(); ++d) {
    SparseMatrix m(out.sizes[d - 1], out.sizes[d]);
    for (std::size_t o = 0; o < out.sizes[d]; ++o) {
      const std::size_t base = action.cell_at(d, o, id);
      for (const auto& inc : complex.facets(d, base)) {
        m.add(static_cast<std::uint32_t>(action.orbit_of(d - 1, inc.cell)),
              static_cast<std::uint32_t>(o), inc.sign * coefficient(d - 1, inc.cell));
      }
    }
    out.boundaries.push_back(m.compressed());
  }
  return out;
}

Coefficients Coefficients::prime_field(std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  return {CoeffKind::PrimeField, p};
}

std::string Coefficients::name() const {
  switch (kind) {
    case CoeffKind::Integers:
      return "Z";
    case CoeffKind::Rationals:
      return "Q";
    case CoeffKind::PrimeField:
      return "F" + std::to_string(p);
  }
  return "";
}

std::size_t matrix_rank(const SparseMatrix& m, const Coefficients& c) {
  if (c.kind == CoeffKind::PrimeField) return rank_mod_p(m, c.p);
  return rank_over_rationals(m);
}

std::vector<HomologyGroup> homology(const ChainComplex& complex, const Coefficients& c) {
  const std::size_t top = complex.top_dim();
  std::vector<std::size_t> ranks(top + 2, 0);
  std::vector<std::vector<BigInt>> factors(top + 2);
  parallel_for(top, [&](std::size_t i) {
    const std::size_t d = i + 1;
    if (c.kind == CoeffKind::Integers) {
      factors[d] = invariant_factors(complex.boundary(d));
      ranks[d] = factors[d].size();
    } else {
      ranks[d] = matrix_rank(complex.boundary(d), c);
    }
  });
  std::vector<HomologyGroup> out(top + 1);
  for (std::size_t d = 0; d <= top; ++d) {
    out[d].rank = complex.size(d) - ranks[d] - ranks[d + 1];
    for (const auto& f : factors[d + 1]) {
      if (f > 1) out[d].torsion.push_back(f);
    }
  }
  return out;
}

std::optional<std::size_t> CellularMap::target(std::size_t d, std::size_t cell) const {
  const auto t = target_[d][cell];
  if (t < 0) return std::nullopt;
  return static_cast<std::size_t>(t);
}

SparseMatrix CellularMap::matrix(std::size_t d) const {
  const std::size_t cols = d < target_.size() ? target_[d].size() : 0;
  const std::size_t rows = d < coarse_sizes_.size() ? coarse_sizes_[d] : 0;
  SparseMatrix m(rows, cols);
  for (std::size_t i = 0; i < cols; ++i) {
    if (target_[d][i] >= 0) {
      m.add(static_cast<std::uint32_t>(target_[d][i]), static_cast<std::uint32_t>(i), sign_[d][i]);
    }
  }
  return m;
}

CellularMap inclusion_cellular_map(const SalvettiComplex& fine, const HyperplaneSet& h_fine,
                                   const SalvettiComplex& coarse, const HyperplaneSet& h_coarse) {
  if (h_fine.dim() != h_coarse.dim() || !h_coarse.is_subset_of(h_fine)) {
    throw std::invalid_argument("coarse arrangement is not contained in the fine one");
  }
  std::vector<std::size_t> pos;
  for (const auto& hp : h_coarse) pos.push_back(*h_fine.index_of(hp));

  const auto& ffaces = fine.faces();
  const auto& cfaces = coarse.faces();
  std::vector<std::uint32_t> face_map(ffaces.faces.size());
  for (std::size_t f = 0; f < ffaces.faces.size(); ++f) {
    SignVector s(pos.size(), '0');
    for (std::size_t j = 0; j < pos.size(); ++j) s[j] = ffaces.faces[f][pos[j]];
    auto idx = cfaces.find(s);
    if (!idx) throw ComplexError("restricted sign vector is not a face: " + s);
    face_map[f] = static_cast<std::uint32_t>(*idx);
  }

  CellularMap out;
  const std::size_t top = fine.top_dim();
  for (std::size_t d = 0; d <= top; ++d) out.coarse_sizes_.push_back(coarse.size(d));
  out.target_.resize(top + 1);
  out.sign_.resize(top + 1);
  for (std::size_t d = 0; d <= top; ++d) {
    out.target_[d].assign(fine.size(d), -1);
    out.sign_[d].assign(fine.size(d), 0);
    for (std::size_t i = 0; i < fine.size(d); ++i) {
      const auto& cell = fine.cell(d, i);
      const auto cf = face_map[cell.face];
      if (cfaces.codim[cf] != d) continue;
      auto t = coarse.find(d, face_map[cell.chamber], cf);
      if (!t) throw ComplexError("restricted pair is not a cell");
      out.target_[d][i] = static_cast<std::int64_t>(*t);
    }
    parallel_for(fine.size(d), [&](std::size_t i) {
      if (out.target_[d][i] < 0) return;
      if (d == 0) {
        out.sign_[d][i] = 1;
        return;
      }
      const auto& tfacets = coarse.facets(d, static_cast<std::size_t>(out.target_[d][i]));
      for (const auto& inc : fine.facets(d, i)) {
        const auto ft = out.target_[d - 1][inc.cell];
        if (ft < 0) continue;
        const int b = facet_sign(tfacets, static_cast<std::size_t>(ft));
        if (b == 0) continue;
        out.sign_[d][i] = static_cast<std::int8_t>(inc.sign * out.sign_[d - 1][inc.cell] * b);
        return;
      }
      throw ComplexError("nondegenerate cell with no nondegenerate facet");
    });
  }

  // d f = f d, cell by cell.
  for (std::size_t d = 1; d <= top; ++d) {
    parallel_for(fine.size(d), [&](std::size_t i) {
      std::map<std::size_t, int> lhs, rhs;
      for (const auto& inc : fine.facets(d, i)) {
        const auto ft = out.target_[d - 1][inc.cell];
        if (ft >= 0) lhs[static_cast<std::size_t>(ft)] += inc.sign * out.sign_[d - 1][inc.cell];
      }
      if (out.target_[d][i] >= 0) {
        for (const auto& inc : coarse.facets(d, static_cast<std::size_t>(out.target_[d][i]))) {
          rhs[inc.cell] += out.sign_[d][i] * inc.sign;
        }
      }
      std::erase_if(lhs, [](const auto& kv) { return kv.second == 0; });
      if (lhs != rhs) {
        throw ComplexError("cellular map does not commute with the boundary at cell " +
                           std::to_string(d) + ":" + std::to_string(i));
      }
    });
  }
  return out;
}

void check_equivariance(const CellularMap& f, const SalvettiComplex& fine, const CellAction& fine_action,
                        const SalvettiComplex& coarse, const CellAction& coarse_action) {
  (void)coarse;
  for (auto s : fine_action.group().generators()) {
    for (std::size_t d = 0; d <= fine.top_dim(); ++d) {
      for (std::size_t i = 0; i < fine.size(d); ++i) {
        const std::size_t si = fine_action.apply(s, d, i);
        const auto a = f.target(d, si);
        const auto b = f.target(d, i);
        bool ok = a.has_value() == b.has_value();
        if (ok && a) {
          ok = *a == coarse_action.apply(s, d, *b) &&
               fine_action.sign(s, d, i) * f.sign(d, si) ==
                   f.sign(d, i) * coarse_action.sign(s, d, *b);
        }
        if (!ok) {
          throw ComplexError("cellular map is not equivariant at cell " + std::to_string(d) + ":" +
                             std::to_string(i));
        }
      }
    }
  }
}

SparseMatrix quotient_map_matrix(const CellularMap& f, const SalvettiComplex& fine,
                                 const CellAction& fine_action, const SalvettiComplex& coarse,
                                 const CellAction& coarse_action, Twist twist, std::size_t d) {
  (void)fine;
  (void)coarse;
  const auto& group = coarse_action.group();
  const std::size_t id = group.index_of(Permutation::identity(group.degree()));
  SparseMatrix m(coarse_action.orbit_count(d), fine_action.orbit_count(d));
  for (std::size_t o = 0; o < fine_action.orbit_count(d); ++o) {
    const std::size_t base = fine_action.cell_at(d, o, id);
    const auto t = f.target(d, base);
    if (!t) continue;
    const int c = coarse_action.sign_of(d, *t) *
                  character_value(twist, group.element(coarse_action.element_of(d, *t)));
    m.add(static_cast<std::uint32_t>(coarse_action.orbit_of(d, *t)), static_cast<std::uint32_t>(o),
          f.sign(d, base) * c);
  }
  return m;
}

std::size_t induced_rank(const SparseMatrix& source_boundary_d, const SparseMatrix& map_d,
                         const SparseMatrix& target_boundary_d1, const Coefficients& c) {
  if (c.kind == CoeffKind::Integers) throw std::invalid_argument("induced_rank needs a field");
  const std::size_t top_rows = source_boundary_d.rows();
  const std::size_t left_cols = source_boundary_d.cols();
  if (map_d.cols() != left_cols || target_boundary_d1.rows() != map_d.rows()) {
    throw std::invalid_argument("induced_rank: shape mismatch");
  }
  SparseMatrix phi(top_rows + map_d.rows(), left_cols + target_boundary_d1.cols());
  phi.add_block(source_boundary_d, 0, 0);
  phi.add_block(map_d, static_cast<std::uint32_t>(top_rows), 0);
  phi.add_block(target_boundary_d1, static_cast<std::uint32_t>(top_rows),
                static_cast<std::uint32_t>(left_cols));
  return matrix_rank(phi, c) - matrix_rank(source_boundary_d, c) - matrix_rank(target_boundary_d1, c);
}

}  // namespace comarr
