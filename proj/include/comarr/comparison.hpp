#pragma once

// The map H_d(M(t,k)/S_k; F) -> H_d(Conf(C,k)/S_k; F) induced by the
// inclusion of complements, with the rational cross-checks against the
// Orlik-Solomon algebra that must pass before any verdict is reported.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "comarr/salvetti.hpp"

namespace comarr {

struct ComparisonRow {
  std::size_t degree = 0;
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::size_t rank = 0;
  [[nodiscard]] bool surjective() const { return rank == target_dim; }
  [[nodiscard]] bool injective() const { return rank == source_dim; }
};

/// One rational consistency check on a single degree.
struct OracleCheck {
  std::string name;
  std::size_t degree = 0;
  std::size_t cellular = 0;
  std::size_t algebraic = 0;
  [[nodiscard]] bool agrees() const { return cellular == algebraic; }
};

struct ComparisonReport {
  std::size_t t = 0;
  std::size_t k = 0;
  Coefficients coefficients;
  Twist twist = Twist::Trivial;
  std::size_t source_hyperplanes = 0;
  std::size_t target_hyperplanes = 0;
  std::vector<std::size_t> source_cells;  // ordered complex, per dimension
  std::vector<std::size_t> target_cells;
  std::vector<ComparisonRow> rows;
  std::vector<OracleCheck> oracle;

  [[nodiscard]] bool oracle_agrees() const;
  /// Rows whose map is not surjective (meaningful only when the oracle agrees).
  [[nodiscard]] std::vector<std::size_t> non_surjective_degrees() const;
};

/// Builds both Salvetti complexes, the equivariant cellular inclusion and its
/// quotient with the given twist, and tabulates ranks over F_p (or Q when
/// p = 0). The oracle compares, degree by degree: ordered Q-homology with OS
/// Betti numbers, ordered Q map ranks with OS restriction ranks, quotient
/// Q-homology with OS isotypic dimensions, and quotient Q map ranks with
/// OS equivariant restriction ranks. Throws ResourceLimitError past the
/// hyperplane guard unless `force`.
ComparisonReport compare_inclusion(std::size_t t, std::size_t k, std::uint32_t p, Twist twist,
                                   bool force = false);

}  // namespace comarr
