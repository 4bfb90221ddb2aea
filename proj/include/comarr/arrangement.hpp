#pragma once

// Hyperplane sets of the center-of-mass arrangements M(t,k), M'(t,k) and of
// the braid arrangement, in a canonical form shared by every downstream
// module.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "comarr/permutation.hpp"

namespace comarr {

enum class Family { M, Mprime, Braid };

std::string to_string(Family f);
/// Accepts "M", "Mprime" and "Braid". Throws std::invalid_argument otherwise.
Family parse_family(std::string_view name);

struct ArrangementSpec {
  Family family = Family::Braid;
  std::size_t t = 0;  // ignored for Braid
  std::size_t k = 0;

  /// Throws std::invalid_argument when t = 0 for a centroid family.
  void validate() const;
};

/// Hyperplane through the origin, kept as a primitive integer normal whose
/// first nonzero entry is positive.
class Hyperplane {
 public:
  Hyperplane() = default;
  /// Canonicalizes sign and content. Throws on the zero vector.
  explicit Hyperplane(std::vector<std::int64_t> normal);

  [[nodiscard]] const std::vector<std::int64_t>& normal() const { return normal_; }
  [[nodiscard]] std::size_t dim() const { return normal_.size(); }

  /// Image under a coordinate permutation, with the sign s such that
  /// g.normal = s * canonical(g.normal).
  [[nodiscard]] std::pair<Hyperplane, int> permuted(const Permutation& g) const;

  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;

 private:
  std::vector<std::int64_t> normal_;
};

/// Canonical hyperplane order: lexicographic on the sparse list of
/// (coordinate, value) pairs of the normal. For braid normals this is
/// x1-x2 < x1-x3 < ... < x2-x3 < ...
bool canonical_less(const Hyperplane& a, const Hyperplane& b);

/// Deduplicated hyperplanes in canonical order, all in dimension k.
class HyperplaneSet {
 public:
  HyperplaneSet() = default;
  HyperplaneSet(std::size_t k, std::vector<Hyperplane> hyperplanes);

  [[nodiscard]] std::size_t dim() const { return k_; }
  [[nodiscard]] std::size_t size() const { return hyperplanes_.size(); }
  [[nodiscard]] bool empty() const { return hyperplanes_.empty(); }
  const Hyperplane& operator[](std::size_t i) const { return hyperplanes_[i]; }
  [[nodiscard]] const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }
  [[nodiscard]] auto begin() const { return hyperplanes_.begin(); }
  [[nodiscard]] auto end() const { return hyperplanes_.end(); }

  [[nodiscard]] std::optional<std::size_t> index_of(const Hyperplane& h) const;
  [[nodiscard]] bool contains(const Hyperplane& h) const { return index_of(h).has_value(); }
  [[nodiscard]] bool is_subset_of(const HyperplaneSet& other) const;
  /// Stable under all coordinate permutations.
  [[nodiscard]] bool is_symmetric() const;

  friend bool operator==(const HyperplaneSet&, const HyperplaneSet&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<Hyperplane> hyperplanes_;
};

/// All t-element subsets of {0..n-1}, each sorted, in lexicographic order.
std::vector<std::vector<int>> subsets_of_size(std::size_t n, std::size_t t);

/// Hyperplanes of the named family. For t >= k the M family is the braid
/// arrangement; for t > k so is Mprime.
HyperplaneSet build(const ArrangementSpec& spec);

struct Essentialization {
  /// Arrangement in Q^rank obtained by restricting to a complement of the
  /// lineality space.
  HyperplaneSet reduced;
  /// index_map[i] = position in `reduced` of input hyperplane i.
  std::vector<std::size_t> index_map;
  std::size_t rank = 0;
  std::size_t lineality_dim = 0;
};

Essentialization essentialize(const HyperplaneSet& h);

/// Orbits of hyperplane indices under coordinate permutations; blocks are
/// sorted and ordered by their least member.
std::vector<std::vector<std::size_t>> hyperplane_orbits(const HyperplaneSet& h);

/// For each hyperplane index i: (j, s) with g.H_i = H_j and s the sign
/// relating the permuted normal to the canonical one. Throws
/// std::invalid_argument if the set is not stable under g.
std::vector<std::pair<std::size_t, int>> permute_hyperplanes(const HyperplaneSet& h,
                                                             const Permutation& g);

}  // namespace comarr
