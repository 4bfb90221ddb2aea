#include "comarr/formats.hpp"

#include <limits>

namespace comarr {

namespace {

template <class T>
T get_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad field \"") + key + "\": " + e.what());
  }
}

Rational rational_from_string(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw FormatError("bad rational \"" + s + "\"");
  if (q.get_den() == 0) throw FormatError("zero denominator in \"" + s + "\"");
  q.canonicalize();
  return q;
}

}  // namespace

ArrangementFile make_arrangement_file(const ArrangementSpec& spec) {
  spec.validate();
  ArrangementSpec s = spec;
  if (s.family == Family::Braid) s.t = 0;
  return {s, build(s)};
}

Json to_json(const ArrangementFile& a) {
  Json normals = Json::array();
  for (const auto& h : a.hyperplanes) normals.push_back(h.normal());
  return Json{{"schema", "comarr.arrangement/1"},
              {"family", to_string(a.spec.family)},
              {"t", a.spec.t},
              {"k", a.spec.k},
              {"normals", std::move(normals)}};
}

ArrangementFile arrangement_from_json(const Json& j) {
  ArrangementFile out;
  try {
    out.spec.family = parse_family(get_field<std::string>(j, "family"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  out.spec.t = j.contains("t") ? get_field<std::size_t>(j, "t") : 0;
  out.spec.k = get_field<std::size_t>(j, "k");
  const auto rows = get_field<std::vector<std::vector<std::int64_t>>>(j, "normals");
  std::vector<Hyperplane> hs;
  for (const auto& r : rows) {
    if (r.size() != out.spec.k) throw FormatError("normal of the wrong length");
    try {
      hs.emplace_back(r);
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  out.hyperplanes = HyperplaneSet(out.spec.k, std::move(hs));
  if (out.hyperplanes.size() != rows.size()) throw FormatError("duplicate hyperplanes");
  return out;
}

Json lattice_to_json(const IntersectionLattice& l) {
  Json nodes = Json::array();
  for (const auto& n : l.nodes()) {
    Json grid = Json::array();
    const auto& m = n.subspace.normal_basis();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(i, c).get_str());
      grid.push_back(std::move(row));
    }
    std::vector<std::size_t> hyps;
    for (std::size_t h = 0; h < l.hyperplane_count(); ++h) {
      if (n.hyperplanes.test(h)) hyps.push_back(h);
    }
    nodes.push_back({{"normal_basis", std::move(grid)},
                     {"rank", n.rank},
                     {"mu", n.mu},
                     {"hyperplanes", std::move(hyps)}});
  }
  return Json{{"schema", "comarr.lattice/1"},
              {"ambient_dim", l.ambient_dim()},
              {"hyperplane_count", l.hyperplane_count()},
              {"nodes", std::move(nodes)},
              {"meets", l.meet_table()}};
}

IntersectionLattice lattice_from_json(const Json& j) {
  const auto dim = get_field<std::size_t>(j, "ambient_dim");
  const auto n = get_field<std::size_t>(j, "hyperplane_count");
  if (n > kMaxHyperplanes) throw FormatError("too many hyperplanes");
  const auto& jn = j.at("nodes");
  std::vector<LatticeNode> nodes;
  for (const auto& node : jn) {
    const auto grid = get_field<std::vector<std::vector<std::string>>>(node, "normal_basis");
    RatMatrix m(grid.size(), dim);
    for (std::size_t r = 0; r < grid.size(); ++r) {
      if (grid[r].size() != dim) throw FormatError("normal basis row of the wrong length");
      for (std::size_t c = 0; c < dim; ++c) m(r, c) = rational_from_string(grid[r][c]);
    }
    LatticeNode ln;
    ln.subspace = Subspace::from_normals(m);
    ln.rank = get_field<std::size_t>(node, "rank");
    ln.mu = get_field<std::int64_t>(node, "mu");
    for (auto h : get_field<std::vector<std::size_t>>(node, "hyperplanes")) {
      if (h >= n) throw FormatError("hyperplane index out of range");
      ln.hyperplanes.set(h);
    }
    if (ln.subspace.codim() != ln.rank) throw FormatError("node rank does not match its subspace");
    nodes.push_back(std::move(ln));
  }
  const auto meets = get_field<std::vector<std::vector<std::size_t>>>(j, "meets");
  if (meets.size() != nodes.size()) throw FormatError("meet table size mismatch");
  for (const auto& row : meets) {
    if (row.size() != n) throw FormatError("meet table row size mismatch");
    for (auto v : row) {
      if (v >= nodes.size()) throw FormatError("meet table entry out of range");
    }
  }
  return IntersectionLattice(dim, n, std::move(nodes), meets);
}

Json complex_to_json(const SalvettiComplex& c) {
  Json dims = Json::array();
  for (std::size_t d = 0; d <= c.top_dim(); ++d) {
    Json cells = Json::array();
    for (std::size_t i = 0; i < c.size(d); ++i) cells.push_back({c.chamber_signs(d, i), c.face_signs(d, i)});
    Json boundary = Json::array();
    if (d > 0) {
      for (std::size_t i = 0; i < c.size(d); ++i) {
        for (const auto& inc : c.facets(d, i)) boundary.push_back({inc.cell, i, inc.sign});
      }
    }
    dims.push_back({{"dim", d}, {"cells", std::move(cells)}, {"boundary", std::move(boundary)}});
  }
  return Json{{"schema", "comarr.complex/1"}, {"dims", std::move(dims)}};
}

Json integer_to_json(const BigInt& z) {
  if (z.fits_slong_p()) return Json(static_cast<std::int64_t>(z.get_si()));
  return Json(z.get_str());
}

BigInt integer_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    BigInt z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw FormatError("bad integer string");
    return z;
  }
  throw FormatError("expected an integer");
}

Json to_json(const PointConfig& c) {
  Json pts = Json::array();
  for (const auto& z : c.points) {
    pts.push_back({integer_to_json(z.re.get_num()), integer_to_json(z.re.get_den()),
                   integer_to_json(z.im.get_num()), integer_to_json(z.im.get_den())});
  }
  return Json{{"k", c.size()}, {"points", std::move(pts)}};
}

PointConfig config_from_json(const Json& j) {
  const auto k = get_field<std::size_t>(j, "k");
  if (!j.contains("points") || !j.at("points").is_array()) throw FormatError("missing points");
  PointConfig c;
  for (const auto& p : j.at("points")) {
    if (!p.is_array() || p.size() != 4) throw FormatError("a point needs [num_re, den_re, num_im, den_im]");
    const BigInt dr = integer_from_json(p[1]);
    const BigInt di = integer_from_json(p[3]);
    if (dr == 0 || di == 0) throw FormatError("zero denominator");
    Rational re(integer_from_json(p[0]), dr);
    Rational im(integer_from_json(p[2]), di);
    re.canonicalize();
    im.canonicalize();
    c.points.push_back({re, im});
  }
  if (c.size() != k) throw FormatError("k does not match the number of points");
  return c;
}

Json to_json(const Witness& w) {
  auto one_based = [](const std::vector<int>& v) {
    std::vector<int> out;
    for (auto i : v) out.push_back(i + 1);
    return out;
  };
  return Json{{"size", w.s}, {"I", one_based(w.i)}, {"J", one_based(w.j)}};
}

Json to_json(const Membership& m) {
  Json out{{"inside", m.inside}};
  out["witness"] = m.witness ? to_json(*m.witness) : Json(nullptr);
  return out;
}

}  // namespace comarr
