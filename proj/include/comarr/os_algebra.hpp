#pragma once

// Orlik-Solomon algebra in the no-broken-circuit basis: straightening,
// the coordinate-permutation action, characters, trivial/sign isotypic
// dimensions, and ranks of maps induced by subarrangement inclusions.

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "comarr/arrangement.hpp"
#include "comarr/lattice.hpp"
#include "comarr/permutation.hpp"

namespace comarr {

/// Strictly increasing hyperplane indices (canonical order).
using NbcMonomial = std::vector<std::size_t>;

/// Homogeneous combination of NBC monomials; terms keyed by monomial, zero
/// coefficients never stored.
struct OsElement {
  std::size_t degree = 0;
  std::map<NbcMonomial, std::int64_t> terms;

  [[nodiscard]] bool is_zero() const { return terms.empty(); }
  [[nodiscard]] std::int64_t coefficient(const NbcMonomial& m) const;
  void add(const NbcMonomial& m, std::int64_t c);

  friend bool operator==(const OsElement&, const OsElement&) = default;
};

/// The lattice and hyperplane set must outlive the algebra.
class OsAlgebra {
 public:
  OsAlgebra(const HyperplaneSet& h, const IntersectionLattice& l);

  [[nodiscard]] const HyperplaneSet& hyperplanes() const { return *h_; }
  [[nodiscard]] const IntersectionLattice& lattice() const { return *l_; }
  [[nodiscard]] std::size_t rank() const { return bases_.size() - 1; }
  [[nodiscard]] std::size_t betti(std::size_t degree) const;

  /// NBC monomials of the given degree in lexicographic order; empty when the
  /// degree exceeds the rank.
  [[nodiscard]] const std::vector<NbcMonomial>& nbc_basis(std::size_t degree) const;
  [[nodiscard]] std::optional<std::size_t> basis_index(const NbcMonomial& m) const;

  /// Rewrites e_{i1} ... e_{ir} (any order, repeats allowed) in the NBC
  /// basis.
  [[nodiscard]] OsElement straighten(const std::vector<std::size_t>& indices) const;

  /// Integer matrix of g on the degree-r component: row i holds the
  /// coordinates of g.b_i. Requires a permutation-stable arrangement.
  [[nodiscard]] std::vector<std::vector<std::int64_t>> action_matrix(const Permutation& g,
                                                                     std::size_t degree) const;
  /// Trace of g on the degree-r component.
  [[nodiscard]] std::int64_t character(const Permutation& g, std::size_t degree) const;
  /// Multiplicity of the trivial or sign representation in degree r.
  [[nodiscard]] std::size_t isotypic_dim(Twist rep, std::size_t degree) const;

 private:
  const HyperplaneSet* h_;
  const IntersectionLattice* l_;
  std::vector<std::vector<NbcMonomial>> bases_;
  std::map<NbcMonomial, std::size_t> index_;

  mutable std::mutex memo_mutex_;
  mutable std::map<NbcMonomial, OsElement> memo_;

  OsElement straighten_sorted(const NbcMonomial& s) const;
  void require_symmetric() const;
};

/// Rank over Q of OS^r(sub) -> OS^r(full), e_H -> e_H. Throws
/// std::invalid_argument if sub is not a subset of full.
std::size_t restriction_rank(const OsAlgebra& sub, const OsAlgebra& full, std::size_t degree);

/// Rank of the same map restricted to the trivial- or sign-isotypic part of
/// OS^r(sub). Both arrangements must be permutation-stable.
std::size_t equivariant_restriction_rank(const OsAlgebra& sub, const OsAlgebra& full,
                                         std::size_t degree, Twist rep);

}  // namespace comarr
