#pragma once

// Real faces of an arrangement, its Salvetti complex, the coordinate
// permutation action on cells, quotient chain complexes with trivial or sign
// twist, homology over Z, Q and F_p, and the cellular model of an inclusion
// of complements by deletion of sign coordinates.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "comarr/arrangement.hpp"
#include "comarr/exact.hpp"
#include "comarr/lattice.hpp"
#include "comarr/permutation.hpp"
#include "comarr/sparse.hpp"

namespace comarr {

/// One character per hyperplane (canonical order) from "+0-".
using SignVector = std::string;

/// Real faces of a central arrangement. Sign vectors do not see the
/// lineality space, so the arrangement need not be essential.
struct FacePoset {
  std::size_t rank = 0;
  /// Sorted by string.
  std::vector<SignVector> faces;
  /// Rank of the flat cut out by the zero entries.
  std::vector<std::size_t> codim;
  /// covers[f]: faces G > f with codim one less, sorted.
  std::vector<std::vector<std::size_t>> covers;
  /// Indices of the faces with no zero entry.
  std::vector<std::size_t> chambers;
  std::unordered_map<SignVector, std::size_t> index;

  [[nodiscard]] std::optional<std::size_t> find(const SignVector& s) const;
};

/// Composition X o Y: X where X is nonzero, Y elsewhere.
SignVector compose(const SignVector& x, const SignVector& y);
/// F <= G in the face order (G agrees with F wherever F is nonzero).
bool face_leq(const SignVector& f, const SignVector& g);

/// All covectors, as the closure of {0} under composition with cocircuits.
/// Cocircuits come from exact vectors in the corank-one flats.
FacePoset enumerate_faces(const HyperplaneSet& h, const IntersectionLattice& l);

/// Cell [C, F] of the Salvetti complex: C a chamber, F <= C; the dimension
/// is codim F. Fields are indices into the face poset.
struct SalvettiCell {
  std::uint32_t chamber = 0;
  std::uint32_t face = 0;
};

struct Incidence {
  std::uint32_t cell = 0;
  int sign = 0;
};

/// Integer chain complex: boundaries[d] maps C_d to C_{d-1} (rows are
/// (d-1)-cells, columns d-cells); boundaries[0] is the 0 x n_0 matrix.
struct ChainComplex {
  std::vector<std::size_t> sizes;
  std::vector<SparseMatrix> boundaries;

  [[nodiscard]] std::size_t top_dim() const { return sizes.empty() ? 0 : sizes.size() - 1; }
  [[nodiscard]] std::size_t size(std::size_t d) const { return d < sizes.size() ? sizes[d] : 0; }
  /// Matrix of C_d -> C_{d-1}, with the right shape also outside the range.
  [[nodiscard]] SparseMatrix boundary(std::size_t d) const;
  [[nodiscard]] std::int64_t euler_characteristic() const;
};

class SalvettiComplex {
 public:
  SalvettiComplex() = default;
  SalvettiComplex(FacePoset faces, std::vector<std::vector<SalvettiCell>> cells,
                  std::vector<std::vector<std::vector<Incidence>>> facets);

  [[nodiscard]] const FacePoset& faces() const { return faces_; }
  [[nodiscard]] std::size_t top_dim() const { return cells_.size() - 1; }
  [[nodiscard]] std::size_t size(std::size_t d) const {
    return d < cells_.size() ? cells_[d].size() : 0;
  }
  [[nodiscard]] const SalvettiCell& cell(std::size_t d, std::size_t i) const { return cells_[d][i]; }
  [[nodiscard]] const std::vector<SalvettiCell>& cells(std::size_t d) const { return cells_[d]; }
  /// Oriented facets of cell i of dimension d, sorted by facet index.
  [[nodiscard]] const std::vector<Incidence>& facets(std::size_t d, std::size_t i) const {
    return facets_[d][i];
  }
  [[nodiscard]] std::optional<std::size_t> find(std::size_t d, std::size_t chamber,
                                                std::size_t face) const;
  [[nodiscard]] const SignVector& chamber_signs(std::size_t d, std::size_t i) const {
    return faces_.faces[cells_[d][i].chamber];
  }
  [[nodiscard]] const SignVector& face_signs(std::size_t d, std::size_t i) const {
    return faces_.faces[cells_[d][i].face];
  }

  [[nodiscard]] ChainComplex chain_complex() const;

 private:
  FacePoset faces_;
  std::vector<std::vector<SalvettiCell>> cells_;
  std::vector<std::vector<std::vector<Incidence>>> facets_;
  std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> lookup_;
};

class ComplexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cells ordered by (chamber, face); facet incidences fixed by the
/// regular-CW diamond rule starting from +1 on the least facet, with
/// d(1-cell [C, F]) = C' - C. Throws ComplexError if d o d != 0.
SalvettiComplex build_salvetti(FacePoset faces);

/// Free action of the symmetric group on cells, stored orbit by orbit. The
/// base of each orbit is its least cell; every cell is g.base for a unique
/// g, and the chain-level action is g_#(cell) = eps * (g.cell).
class CellAction {
 public:
  [[nodiscard]] const SymmetricGroup& group() const { return group_; }
  [[nodiscard]] std::size_t orbit_count(std::size_t d) const { return orbit_cells_[d].size(); }
  [[nodiscard]] std::size_t orbit_of(std::size_t d, std::size_t cell) const { return orbit_[d][cell]; }
  /// g with cell = g.base(orbit).
  [[nodiscard]] std::size_t element_of(std::size_t d, std::size_t cell) const {
    return element_[d][cell];
  }
  /// eps(element_of(cell), base).
  [[nodiscard]] int sign_of(std::size_t d, std::size_t cell) const { return eps_[d][cell]; }
  /// Cell g.base(orbit).
  [[nodiscard]] std::size_t cell_at(std::size_t d, std::size_t orbit, std::size_t g) const {
    return orbit_cells_[d][orbit][g];
  }
  /// Index of g.cell.
  [[nodiscard]] std::size_t apply(std::size_t g, std::size_t d, std::size_t cell) const;
  /// eps(g, cell), so that g_# commutes with the boundary.
  [[nodiscard]] int sign(std::size_t g, std::size_t d, std::size_t cell) const;

 private:
  friend CellAction group_action(const SalvettiComplex&, const HyperplaneSet&);
  explicit CellAction(std::size_t k) : group_(k) {}

  SymmetricGroup group_;
  std::vector<std::vector<std::vector<std::uint32_t>>> orbit_cells_;
  std::vector<std::vector<std::uint32_t>> orbit_;
  std::vector<std::vector<std::uint32_t>> element_;
  std::vector<std::vector<std::int8_t>> eps_;
};

/// Requires a permutation-stable arrangement. Throws ComplexError with the
/// offending cell if some orbit is not free or the signs do not give a chain
/// map.
CellAction group_action(const SalvettiComplex& complex, const HyperplaneSet& h);

/// C_* (x)_{Z[G]} Z_chi on orbit bases: a cell g.base becomes
/// eps(g, base) chi(g) times its base.
ChainComplex quotient_complex(const SalvettiComplex& complex, const CellAction& action, Twist twist);

enum class CoeffKind { Integers, Rationals, PrimeField };

struct Coefficients {
  CoeffKind kind = CoeffKind::Rationals;
  std::uint32_t p = 0;

  static Coefficients integers() { return {CoeffKind::Integers, 0}; }
  static Coefficients rationals() { return {CoeffKind::Rationals, 0}; }
  /// Throws std::invalid_argument if p is not prime.
  static Coefficients prime_field(std::uint32_t p);
  [[nodiscard]] std::string name() const;
};

/// Free rank (or dimension over a field) and, over Z, the torsion
/// coefficients greater than 1.
struct HomologyGroup {
  std::size_t rank = 0;
  std::vector<BigInt> torsion;

  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

std::size_t matrix_rank(const SparseMatrix& m, const Coefficients& c);
std::vector<HomologyGroup> homology(const ChainComplex& complex, const Coefficients& c);

/// Cellular model of the inclusion of complements for coarse ⊆ fine:
/// [C, F] maps to [C|coarse, F|coarse] when the dimension is kept and to 0
/// otherwise, with signs making it a chain map.
class CellularMap {
 public:
  /// Target cell, or nullopt for cells sent to 0.
  [[nodiscard]] std::optional<std::size_t> target(std::size_t d, std::size_t cell) const;
  [[nodiscard]] int sign(std::size_t d, std::size_t cell) const { return sign_[d][cell]; }
  /// Matrix of f_d: rows are coarse d-cells, columns fine d-cells.
  [[nodiscard]] SparseMatrix matrix(std::size_t d) const;
  [[nodiscard]] std::size_t top_dim() const { return target_.size() - 1; }

 private:
  friend CellularMap inclusion_cellular_map(const SalvettiComplex&, const HyperplaneSet&,
                                            const SalvettiComplex&, const HyperplaneSet&);
  std::vector<std::size_t> coarse_sizes_;
  std::vector<std::vector<std::int64_t>> target_;
  std::vector<std::vector<std::int8_t>> sign_;
};

/// Throws std::invalid_argument unless coarse ⊆ fine, and ComplexError if a
/// restricted vector is not a coarse cell or the chain-map identity fails.
CellularMap inclusion_cellular_map(const SalvettiComplex& fine, const HyperplaneSet& h_fine,
                                   const SalvettiComplex& coarse, const HyperplaneSet& h_coarse);

/// Checks f(g.cell) = g.f(cell) with matching signs for the generators of
/// the group. Throws ComplexError on failure.
void check_equivariance(const CellularMap& f, const SalvettiComplex& fine, const CellAction& fine_action,
                        const SalvettiComplex& coarse, const CellAction& coarse_action);

/// Map of quotient chain groups in degree d induced by an equivariant f.
SparseMatrix quotient_map_matrix(const CellularMap& f, const SalvettiComplex& fine,
                                 const CellAction& fine_action, const SalvettiComplex& coarse,
                                 const CellAction& coarse_action, Twist twist, std::size_t d);

/// Rank of H_d(source) -> H_d(target) over a field for a chain map with
/// matrix f_d, from rank [[d_src_d, 0], [f_d, d_tgt_{d+1}]].
std::size_t induced_rank(const SparseMatrix& source_boundary_d, const SparseMatrix& map_d,
                         const SparseMatrix& target_boundary_d1, const Coefficients& c);

}  // namespace comarr
