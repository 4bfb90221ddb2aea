#pragma once

// Intersection lattice L(A) of a central arrangement, its Moebius function,
// and the derived characteristic / Poincare polynomials and region count.

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "comarr/arrangement.hpp"
#include "comarr/exact.hpp"

namespace comarr {

/// Hard ceiling on arrangement size (flats are hyperplane bitsets).
inline constexpr std::size_t kMaxHyperplanes = 256;
/// Arrangements beyond this size are refused unless explicitly forced.
inline constexpr std::size_t kDefaultHyperplaneLimit = 60;

using FlatMask = std::bitset<kMaxHyperplanes>;

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ResourceLimitError for more than kDefaultHyperplaneLimit
/// hyperplanes (unless `force`) or more than kMaxHyperplanes (always).
void check_resource_limits(const HyperplaneSet& h, bool force);

struct LatticeNode {
  Subspace subspace;
  std::size_t rank = 0;  // codimension
  std::int64_t mu = 0;
  /// Hyperplanes containing the flat.
  FlatMask hyperplanes;
};

class IntersectionLattice {
 public:
  IntersectionLattice() = default;
  /// Assembles a lattice from nodes (node 0 = ambient, ordered by rank) and
  /// the meet table meets[node][h] = index of (node ∩ H_h). Recomputes covers.
  IntersectionLattice(std::size_t ambient_dim, std::size_t hyperplane_count,
                      std::vector<LatticeNode> nodes,
                      std::vector<std::vector<std::size_t>> meets);

  [[nodiscard]] std::size_t ambient_dim() const { return ambient_dim_; }
  [[nodiscard]] std::size_t hyperplane_count() const { return hyperplane_count_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const std::vector<LatticeNode>& nodes() const { return nodes_; }
  [[nodiscard]] const LatticeNode& node(std::size_t i) const { return nodes_[i]; }
  /// Nodes covering node i (one rank higher, contained in it as subspaces).
  [[nodiscard]] const std::vector<std::size_t>& covers(std::size_t i) const { return covers_[i]; }
  [[nodiscard]] std::size_t meet(std::size_t node, std::size_t h) const { return meets_[node][h]; }
  [[nodiscard]] const std::vector<std::vector<std::size_t>>& meet_table() const { return meets_; }
  [[nodiscard]] std::optional<std::size_t> find(const FlatMask& mask) const;
  /// Rank of the arrangement (largest node rank).
  [[nodiscard]] std::size_t rank() const;

  /// Flat spanned by a set of hyperplane indices (node index).
  template <class Range>
  [[nodiscard]] std::size_t closure(const Range& hyperplanes) const {
    std::size_t x = 0;
    for (auto h : hyperplanes) x = meet(x, static_cast<std::size_t>(h));
    return x;
  }

 private:
  std::size_t ambient_dim_ = 0;
  std::size_t hyperplane_count_ = 0;
  std::vector<LatticeNode> nodes_;
  std::vector<std::vector<std::size_t>> meets_;
  std::vector<std::vector<std::size_t>> covers_;
  std::unordered_map<FlatMask, std::size_t> index_;
};

/// Coefficients indexed by degree; trailing zeros trimmed.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<std::int64_t> coefficients);
  static IntPolynomial monomial(std::size_t degree, std::int64_t c = 1);

  [[nodiscard]] const std::vector<std::int64_t>& coefficients() const { return coeffs_; }
  /// -1 for the zero polynomial.
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] std::int64_t coefficient(std::size_t d) const {
    return d < coeffs_.size() ? coeffs_[d] : 0;
  }
  [[nodiscard]] std::int64_t evaluate(std::int64_t x) const;
  /// Human-readable form, highest degree first, e.g. "q^3 - 3q^2 + 2q".
  [[nodiscard]] std::string to_string(char var) const;

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  void trim();
  std::vector<std::int64_t> coeffs_;
};

/// Level-by-level closure of {ambient} under intersection with hyperplanes.
IntersectionLattice build_lattice(const HyperplaneSet& h);

/// chi(A, q) = sum_X mu(X) q^{dim X}.
IntPolynomial characteristic_polynomial(const IntersectionLattice& l, std::size_t ambient_dim);
IntPolynomial characteristic_polynomial(const IntersectionLattice& l);

/// chi(A) = chi(A \ H) - chi(A^H), recursing on subspaces directly; shares
/// nothing with build_lattice.
IntPolynomial deletion_restriction_charpoly(const HyperplaneSet& h);

/// pi(A, t) = sum_X |mu(X)| t^{rank X}.
IntPolynomial poincare_polynomial(const IntersectionLattice& l);

/// Chambers of the real arrangement (Zaslavsky): sum_X |mu(X)|.
std::uint64_t region_count(const IntersectionLattice& l);

}  // namespace comarr
