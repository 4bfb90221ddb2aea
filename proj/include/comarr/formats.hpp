#pragma once

// JSON interchange formats: arrangement files, lattice cache entries, cell
// complexes and point configurations.

#include <cstddef>
#include <string>

#include <json.hpp>

#include "comarr/arrangement.hpp"
#include "comarr/geometry.hpp"
#include "comarr/lattice.hpp"
#include "comarr/salvetti.hpp"

namespace comarr {

using Json = nlohmann::ordered_json;

/// Malformed input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ArrangementFile {
  ArrangementSpec spec;
  HyperplaneSet hyperplanes;
};

ArrangementFile make_arrangement_file(const ArrangementSpec& spec);
/// {"schema", "family", "t", "k", "normals"}; normals in canonical order.
Json to_json(const ArrangementFile& a);
/// Normals are re-canonicalized; duplicates and zero vectors are rejected.
ArrangementFile arrangement_from_json(const Json& j);

/// Nodes with normal-basis grids (rationals as "p/q" strings), rank, mu,
/// contained hyperplanes, and the meet table.
Json lattice_to_json(const IntersectionLattice& l);
IntersectionLattice lattice_from_json(const Json& j);

/// Cells per dimension as [chamber, face] sign strings and boundary
/// triplets [row, col, value] (rows are (d-1)-cells).
Json complex_to_json(const SalvettiComplex& c);

/// Exact rational as a JSON integer when it fits, else a decimal string.
Json integer_to_json(const BigInt& z);
BigInt integer_from_json(const Json& j);

/// {"k", "points": [[num_re, den_re, num_im, den_im], ...]}.
Json to_json(const PointConfig& c);
PointConfig config_from_json(const Json& j);

/// Witness subsets are written 1-based.
Json to_json(const Witness& w);
Json to_json(const Membership& m);

}  // namespace comarr
