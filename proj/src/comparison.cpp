#include "comarr/comparison.hpp"

#include <algorithm>

#include "comarr/os_algebra.hpp"

namespace comarr {

bool ComparisonReport::oracle_agrees() const {
  return std::all_of(oracle.begin(), oracle.end(), [](const OracleCheck& c) { return c.agrees(); });
}

std::vector<std::size_t> ComparisonReport::non_surjective_degrees() const {
  std::vector<std::size_t> out;
  for (const auto& r : rows) {
    if (!r.surjective()) out.push_back(r.degree);
  }
  return out;
}

ComparisonReport compare_inclusion(std::size_t t, std::size_t k, std::uint32_t p, Twist twist,
                                   bool force) {
  const Coefficients field = p == 0 ? Coefficients::rationals() : Coefficients::prime_field(p);
  const Coefficients q = Coefficients::rationals();

  const ArrangementSpec fine_spec{Family::M, t, k};
  fine_spec.validate();
  const HyperplaneSet hf = build(fine_spec);
  const HyperplaneSet hc = build({Family::Braid, 0, k});
  check_resource_limits(hf, force);

  const auto lf = build_lattice(hf);
  const auto lc = build_lattice(hc);
  const OsAlgebra osf(hf, lf);
  const OsAlgebra osc(hc, lc);

  const auto sf = build_salvetti(enumerate_faces(hf, lf));
  const auto sc = build_salvetti(enumerate_faces(hc, lc));
  const auto af = group_action(sf, hf);
  const auto ac = group_action(sc, hc);
  const auto f = inclusion_cellular_map(sf, hf, sc, hc);
  check_equivariance(f, sf, af, sc, ac);

  const auto cf = sf.chain_complex();
  const auto cc = sc.chain_complex();
  const auto qf = quotient_complex(sf, af, twist);
  const auto qc = quotient_complex(sc, ac, twist);

  ComparisonReport out;
  out.t = t;
  out.k = k;
  out.coefficients = field;
  out.twist = twist;
  out.source_hyperplanes = hf.size();
  out.target_hyperplanes = hc.size();
  out.source_cells = cf.sizes;
  out.target_cells = cc.sizes;

  const std::size_t top = std::max(cf.top_dim(), cc.top_dim());
  const auto hqf = homology(qf, field);
  const auto hqc = homology(qc, field);
  const auto ordered_f = homology(cf, q);
  const auto ordered_c = homology(cc, q);
  const auto rational_qf = homology(qf, q);
  const auto rational_qc = homology(qc, q);
  auto dim = [](const std::vector<HomologyGroup>& h, std::size_t d) {
    return d < h.size() ? h[d].rank : 0;
  };

  for (std::size_t d = 0; d <= top; ++d) {
    const auto qmap = quotient_map_matrix(f, sf, af, sc, ac, twist, d);
    ComparisonRow row;
    row.degree = d;
    row.source_dim = dim(hqf, d);
    row.target_dim = dim(hqc, d);
    row.rank = induced_rank(qf.boundary(d), qmap, qc.boundary(d + 1), field);
    out.rows.push_back(row);

    out.oracle.push_back({"ordered source betti", d, dim(ordered_f, d), osf.betti(d)});
    out.oracle.push_back({"ordered target betti", d, dim(ordered_c, d), osc.betti(d)});
    out.oracle.push_back({"ordered map rank", d,
                          induced_rank(cf.boundary(d), f.matrix(d), cc.boundary(d + 1), q),
                          restriction_rank(osc, osf, d)});
    out.oracle.push_back({"quotient source dim", d, dim(rational_qf, d), osf.isotypic_dim(twist, d)});
    out.oracle.push_back({"quotient target dim", d, dim(rational_qc, d), osc.isotypic_dim(twist, d)});
    out.oracle.push_back({"quotient map rank", d,
                          induced_rank(qf.boundary(d), qmap, qc.boundary(d + 1), q),
                          equivariant_restriction_rank(osc, osf, d, twist)});
  }
  return out;
}

}  // namespace comarr
