#include "comarr/cli.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "comarr/arrangement.hpp"
#include "comarr/comparison.hpp"
#include "comarr/formats.hpp"
#include "comarr/geometry.hpp"
#include "comarr/lattice.hpp"
#include "comarr/os_algebra.hpp"
#include "comarr/parallel.hpp"
#include "comarr/salvetti.hpp"

namespace comarr::cli {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A report was produced but the run must end with this exit code.
struct Outcome {
  int code = kOk;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json parse_json(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string iso_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Context {
  std::string timestamp;  // from --timestamp
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

std::string resolve_timestamp(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != nullptr && *end == '\0') return iso_utc(static_cast<std::time_t>(v));
  }
  return iso_utc(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
}

struct Manifest {
  std::string command;
  Json params = Json::object();
  std::optional<std::uint64_t> seed;
  Json inputs = Json::object();

  [[nodiscard]] Json to_json(const Context& ctx) const {
    return Json{{"command", command},
                {"params", params},
                {"seed", seed ? Json(*seed) : Json(nullptr)},
                {"input_sha256", inputs},
                {"tool_version", kToolVersion},
                {"timestamp", resolve_timestamp(ctx.timestamp)}};
  }
};

Json report_header(const std::string& schema, const Manifest& m, const Context& ctx) {
  return Json{{"schema", schema}, {"manifest", m.to_json(ctx)}};
}

// ---------------------------------------------------------------------------
// Lattice cache

fs::path cache_dir() {
  const char* env = std::getenv("COM_ARR_CACHE");
  return (env != nullptr && *env != '\0') ? fs::path(env) : fs::path(".cache");
}

IntersectionLattice cached_lattice(const ArrangementFile& a) {
  const std::string key = sha256_hex(to_json(a).dump() + "\n" + kToolVersion);
  const fs::path path = cache_dir() / ("lattice-" + key + ".json");
  std::error_code ec;
  if (fs::exists(path, ec)) {
    try {
      std::ifstream in(path, std::ios::binary);
      auto l = lattice_from_json(Json::parse(in));
      if (l.hyperplane_count() == a.hyperplanes.size() && l.ambient_dim() == a.hyperplanes.dim()) {
        return l;
      }
    } catch (const std::exception&) {
      // Unreadable entries are rebuilt and overwritten.
    }
  }
  auto l = build_lattice(a.hyperplanes);
  fs::create_directories(path.parent_path(), ec);
  if (!ec) {
    const fs::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (out) out << lattice_to_json(l).dump() << "\n";
    }
    fs::rename(tmp, path, ec);
    if (ec) fs::remove(tmp, ec);
  }
  return l;
}

struct LoadedArrangement {
  ArrangementFile file;
  std::string sha256;
};

LoadedArrangement load_arrangement(const std::string& path) {
  const std::string text = read_file(path);
  return {arrangement_from_json(parse_json(text, path)), sha256_hex(text)};
}

Family parse_family_flag(const std::string& s) {
  try {
    return parse_family(s);
  } catch (const std::invalid_argument&) {
    throw UsageError("unknown family \"" + s + "\" (expected M, Mprime or Braid)");
  }
}

Twist parse_twist(const std::string& s) {
  if (s == "trivial") return Twist::Trivial;
  if (s == "sign") return Twist::Sign;
  throw UsageError("unknown twist \"" + s + "\" (expected trivial or sign)");
}

std::string twist_name(Twist t) { return t == Twist::Trivial ? "trivial" : "sign"; }

Json polynomial_json(const IntPolynomial& p, char var) {
  return Json{{"coefficients", p.coefficients()}, {"text", p.to_string(var)}};
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------
// Commands

struct BuildOpts {
  std::string family;
  std::size_t t = 0;
  std::size_t k = 0;
  std::string out;
};

Outcome cmd_build(const BuildOpts& o, const Context& ctx) {
  ArrangementSpec spec{parse_family_flag(o.family), o.t, o.k};
  if (spec.family != Family::Braid && spec.t == 0) throw UsageError("--t must be at least 1 for " + o.family);
  write_text(o.out, dump(to_json(make_arrangement_file(spec))), *ctx.out);
  return {};
}

struct InvariantsOpts {
  std::string arr;
  std::string out;
  bool force = false;
  bool os = false;
};

Outcome cmd_invariants(const InvariantsOpts& o, const Context& ctx) {
  const auto loaded = load_arrangement(o.arr);
  const auto& a = loaded.file;
  const auto& h = a.hyperplanes;
  check_resource_limits(h, o.force);

  Manifest m{"invariants", {{"arr", o.arr}, {"force", o.force}, {"os", o.os}}, std::nullopt,
             {{"arr", loaded.sha256}}};
  Json r = report_header("comarr.invariants/1", m, ctx);
  r["arrangement"] = {{"family", to_string(a.spec.family)},
                      {"t", a.spec.t},
                      {"k", a.spec.k},
                      {"hyperplanes", h.size()}};

  const auto l = cached_lattice(a);
  const auto chi = characteristic_polynomial(l);
  const auto chi_dr = deletion_restriction_charpoly(h);
  std::vector<std::size_t> per_rank(l.rank() + 1, 0);
  for (const auto& n : l.nodes()) ++per_rank[n.rank];
  r["rank"] = l.rank();
  r["lattice_size"] = l.size();
  r["flats_per_rank"] = per_rank;
  r["characteristic_polynomial"] = {{"mobius", polynomial_json(chi, 'q')},
                                    {"deletion_restriction", polynomial_json(chi_dr, 'q')},
                                    {"agree", chi == chi_dr}};
  r["poincare_polynomial"] = polynomial_json(poincare_polynomial(l), 't');
  r["regions"] = region_count(l);

  if (h.is_symmetric()) {
    Json orbits = Json::array();
    for (const auto& block : hyperplane_orbits(h)) {
      orbits.push_back({{"size", block.size()},
                        {"representative", h[block.front()].normal()},
                        {"members", block}});
    }
    r["orbits"] = std::move(orbits);
  } else {
    r["orbits"] = nullptr;
  }

  if (o.os) {
    const OsAlgebra os(h, l);
    Json osj;
    std::vector<std::size_t> betti;
    for (std::size_t d = 0; d <= os.rank(); ++d) betti.push_back(os.betti(d));
    osj["betti"] = betti;
    if (h.is_symmetric()) {
      std::vector<std::size_t> triv, sign;
      for (std::size_t d = 0; d <= os.rank(); ++d) {
        triv.push_back(os.isotypic_dim(Twist::Trivial, d));
        sign.push_back(os.isotypic_dim(Twist::Sign, d));
      }
      osj["trivial_isotypic"] = triv;
      osj["sign_isotypic"] = sign;
      const auto braid = build({Family::Braid, 0, h.dim()});
      if (braid.is_subset_of(h)) {
        const auto lb = build_lattice(braid);
        const OsAlgebra osb(braid, lb);
        std::vector<std::size_t> ranks;
        for (std::size_t d = 0; d <= osb.rank(); ++d) ranks.push_back(restriction_rank(osb, os, d));
        osj["restriction_ranks_from_braid"] = ranks;
      }
    }
    r["os"] = std::move(osj);
  }
  write_text(o.out, dump(r), *ctx.out);
  return {chi == chi_dr ? kOk : kOracleDisagreement};
}

Coefficients parse_coefficients(const std::string& coeff, std::uint32_t p) {
  if (coeff == "Z") return Coefficients::integers();
  if (coeff == "Q") return Coefficients::rationals();
  std::uint32_t prime = p;
  if (coeff != "Fp") {
    if (coeff.size() < 2 || coeff[0] != 'F') throw UsageError("unknown coefficients \"" + coeff + "\"");
    try {
      prime = static_cast<std::uint32_t>(std::stoul(coeff.substr(1)));
    } catch (const std::exception&) {
      throw UsageError("unknown coefficients \"" + coeff + "\"");
    }
    if (p != 0 && p != prime) throw UsageError("--p disagrees with --coeff");
  }
  if (!is_prime(prime)) throw UsageError("--p must be prime (got " + std::to_string(prime) + ")");
  return Coefficients::prime_field(prime);
}

struct HomologyOpts {
  std::string arr;
  bool quotient = false;
  std::string coeff = "Z";
  std::uint32_t p = 0;
  std::string twist = "trivial";
  std::string out;
  std::string complex_out;
  bool force = false;
};

Outcome cmd_homology(const HomologyOpts& o, const Context& ctx) {
  const Coefficients c = parse_coefficients(o.coeff, o.p);
  const Twist twist = parse_twist(o.twist);
  const auto loaded = load_arrangement(o.arr);
  const auto& h = loaded.file.hyperplanes;
  check_resource_limits(h, o.force);
  if (o.quotient && !h.is_symmetric()) {
    throw UsageError("--quotient needs an arrangement stable under coordinate permutations");
  }

  Manifest m{"homology",
             {{"arr", o.arr},
              {"quotient", o.quotient},
              {"coeff", c.name()},
              {"twist", o.quotient ? Json(o.twist) : Json(nullptr)},
              {"force", o.force}},
             std::nullopt,
             {{"arr", loaded.sha256}}};
  Json r = report_header("comarr.homology/1", m, ctx);

  const auto l = cached_lattice(loaded.file);
  const auto sc = build_salvetti(enumerate_faces(h, l));
  if (!o.complex_out.empty()) write_text(o.complex_out, dump(complex_to_json(sc)), *ctx.out);

  ChainComplex cc = sc.chain_complex();
  r["ordered_cells"] = cc.sizes;
  if (o.quotient) {
    const auto act = group_action(sc, h);
    cc = quotient_complex(sc, act, twist);
    r["quotient_cells"] = cc.sizes;
  }
  r["coefficients"] = c.name();
  r["quotient"] = o.quotient;
  r["twist"] = o.quotient ? Json(twist_name(twist)) : Json(nullptr);
  r["euler_characteristic"] = cc.euler_characteristic();

  Json degrees = Json::array();
  const auto hom = homology(cc, c);
  for (std::size_t d = 0; d < hom.size(); ++d) {
    Json e{{"degree", d}};
    if (c.kind == CoeffKind::Integers) {
      e["rank"] = hom[d].rank;
      Json tors = Json::array();
      for (const auto& t : hom[d].torsion) tors.push_back(integer_to_json(t));
      e["torsion"] = std::move(tors);
    } else {
      e["dim"] = hom[d].rank;
    }
    degrees.push_back(std::move(e));
  }
  r["homology"] = std::move(degrees);
  write_text(o.out, dump(r), *ctx.out);
  return {};
}

struct CompareOpts {
  std::size_t t = 2;
  std::size_t k = 4;
  std::uint32_t p = 2;
  std::string twist = "trivial";
  std::string out;
  std::string csv;
  bool force = false;
};

Outcome cmd_compare(const CompareOpts& o, const Context& ctx) {
  if (o.t == 0) throw UsageError("--t must be at least 1");
  if (o.k == 0) throw UsageError("--k must be at least 1");
  if (!is_prime(o.p)) throw UsageError("--p must be prime (got " + std::to_string(o.p) + ")");
  const Twist twist = parse_twist(o.twist);

  Manifest m{"compare",
             {{"t", o.t}, {"k", o.k}, {"p", o.p}, {"twist", o.twist}, {"force", o.force}},
             std::nullopt,
             Json::object()};
  Json r = report_header("comarr.compare/1", m, ctx);
  const auto rep = compare_inclusion(o.t, o.k, o.p, twist, o.force);

  r["source"] = {{"family", "M"}, {"t", o.t}, {"k", o.k}, {"hyperplanes", rep.source_hyperplanes},
                 {"ordered_cells", rep.source_cells}};
  r["target"] = {{"family", "Braid"}, {"k", o.k}, {"hyperplanes", rep.target_hyperplanes},
                 {"ordered_cells", rep.target_cells}};
  r["coefficients"] = rep.coefficients.name();
  r["twist"] = twist_name(twist);
  Json rows = Json::array();
  std::string csv = "degree,source_dim,target_dim,rank,surjective,injective\n";
  for (const auto& row : rep.rows) {
    rows.push_back({{"degree", row.degree},
                    {"source_dim", row.source_dim},
                    {"target_dim", row.target_dim},
                    {"rank", row.rank},
                    {"surjective", row.surjective()},
                    {"injective", row.injective()}});
    csv += std::to_string(row.degree) + "," + std::to_string(row.source_dim) + "," +
           std::to_string(row.target_dim) + "," + std::to_string(row.rank) + "," +
           csv_bool(row.surjective()) + "," + csv_bool(row.injective()) + "\n";
  }
  r["rows"] = std::move(rows);
  Json checks = Json::array();
  for (const auto& c : rep.oracle) {
    checks.push_back({{"check", c.name},
                      {"degree", c.degree},
                      {"cellular", c.cellular},
                      {"algebraic", c.algebraic},
                      {"agrees", c.agrees()}});
  }
  const bool agrees = rep.oracle_agrees();
  r["rational_oracle"] = {{"agrees", agrees}, {"checks", std::move(checks)}};
  if (agrees) {
    std::vector<std::size_t> non_inj;
    for (const auto& row : rep.rows) {
      if (!row.injective()) non_inj.push_back(row.degree);
    }
    const auto non_surj = rep.non_surjective_degrees();
    r["conclusion"] = {{"status", "reported"},
                       {"non_surjective_degrees", non_surj},
                       {"non_injective_degrees", non_inj},
                       {"surjective_in_every_degree", non_surj.empty()},
                       {"isomorphism_in_every_degree", non_surj.empty() && non_inj.empty()}};
  } else {
    r["conclusion"] = {{"status", "withheld"},
                       {"reason", "cellular and Orlik-Solomon rational ranks disagree"}};
  }
  write_text(o.out, dump(r), *ctx.out);
  if (!o.csv.empty()) write_text(o.csv, csv, *ctx.out);
  if (!agrees) *ctx.err << "rational oracle disagreement; conclusion withheld\n";
  return {agrees ? kOk : kOracleDisagreement};
}

struct VerifyOpts {
  std::string prop;
  std::size_t t = 2;
  std::size_t k = 4;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::int64_t box = 0;  // 0: 1 for pullback, 10 for stabilization
  std::int64_t denominators = 2;
  std::size_t witness_samples = 1000;
  std::string out;
  std::string csv;
};

Json membership_json(const PointConfig& c, std::size_t t, Family f) { return to_json(membership(c, t, f)); }

Outcome cmd_verify(VerifyOpts o, const Context& ctx) {
  if (o.t == 0) throw UsageError("--t must be at least 1");
  if (o.box == 0) o.box = o.prop == "pullback" ? 1 : 10;
  if (o.box < 1) throw UsageError("--box must be at least 1");
  Manifest m{"verify",
             {{"prop", o.prop}, {"t", o.t}, {"k", o.k}, {"n", o.n}, {"box", o.box}},
             o.seed,
             Json::object()};
  std::string csv = "index,pass\n";
  std::size_t failures = 0;
  Json r;
  if (o.prop == "pullback") {
    if (o.t > o.k) throw UsageError("pullback needs t <= k");
    if (o.denominators < 1) throw UsageError("--denominators must be at least 1");
    m.params["denominators"] = o.denominators;
    r = report_header("comarr.verify/1", m, ctx);
    std::vector<char> pass(o.n, 0);
    std::vector<PointConfig> configs(o.n);
    parallel_for(o.n, [&](std::size_t i) {
      configs[i] = random_distinct_config(o.k, o.seed, i, o.box, o.denominators);
      pass[i] = verify_pullback(configs[i], o.t) ? 1 : 0;
    });
    Json counter = Json::array();
    std::size_t outside = 0;
    for (std::size_t i = 0; i < o.n; ++i) {
      csv += std::to_string(i) + "," + csv_bool(pass[i] != 0) + "\n";
      const auto mem = membership(configs[i], o.t, Family::M);
      if (!mem.inside) ++outside;
      if (!pass[i]) {
        ++failures;
        counter.push_back({{"index", i},
                           {"config", to_json(configs[i])},
                           {"membership", to_json(mem)},
                           {"theta_distinct", pairwise_distinct(theta(configs[i], o.t))}});
      }
    }
    r["property"] = "pullback";
    r["trials"] = o.n;
    r["passes"] = o.n - failures;
    r["failures"] = failures;
    r["outside_M"] = outside;
    r["counterexamples"] = std::move(counter);
  } else if (o.prop == "stabilization") {
    m.params["witness_samples"] = o.witness_samples;
    r = report_header("comarr.verify/1", m, ctx);
    const auto s = sample(o.t, o.k, Family::Mprime, {o.seed, o.n, o.box, 0});
    std::vector<char> pass(s.configs.size(), 0);
    parallel_for(s.configs.size(), [&](std::size_t i) {
      const auto st = stabilize(s.configs[i], o.t);
      pass[i] = membership(st, o.t, Family::Mprime).inside && stabilization_dominates(st, o.t);
    });
    Json counter = Json::array();
    for (std::size_t i = 0; i < s.configs.size(); ++i) {
      csv += std::to_string(i) + "," + csv_bool(pass[i] != 0) + "\n";
      if (!pass[i]) {
        ++failures;
        const auto st = stabilize(s.configs[i], o.t);
        counter.push_back({{"index", i},
                           {"config", to_json(s.configs[i])},
                           {"stabilized", to_json(st)},
                           {"membership", membership_json(st, o.t, Family::Mprime)},
                           {"dominates", stabilization_dominates(st, o.t)}});
      }
    }
    r["property"] = "stabilization";
    r["sampling"] = {{"trials", s.trials},
                     {"accepted", s.accepted},
                     {"acceptance_rate", s.acceptance_rate()},
                     {"complete", s.complete(o.n)}};
    r["trials"] = s.configs.size();
    r["passes"] = s.configs.size() - failures;
    r["failures"] = failures;
    r["counterexamples"] = std::move(counter);

    const auto w = stabilization_failure_witness(o.t, o.k, o.seed, o.witness_samples);
    Json wj{{"target", "stabilize(c) outside M(t,k+1) for c in M(t,k)"},
            {"samples_searched", o.witness_samples},
            {"found", w.has_value()}};
    if (w) {
      const auto st = stabilize(*w, o.t);
      const auto before = membership(*w, o.t, Family::M);
      const auto after = membership(st, o.t, Family::M);
      wj["config"] = to_json(*w);
      wj["stabilized"] = to_json(st);
      wj["membership_before"] = to_json(before);
      wj["membership_after"] = to_json(after);
      wj["verified"] = before.inside && !after.inside;
      if (!(before.inside && !after.inside)) ++failures;
    } else {
      wj["config"] = nullptr;
      wj["note"] = "no witness among the built-in candidates and seeded samples; this is not a proof of nonexistence";
    }
    r["failure_witness"] = std::move(wj);
    if (!s.complete(o.n)) {
      write_text(o.out, dump(r), *ctx.out);
      *ctx.err << "sampling exhausted its trial budget\n";
      return {kFailure};
    }
  } else {
    throw UsageError("--prop must be pullback or stabilization");
  }
  write_text(o.out, dump(r), *ctx.out);
  if (!o.csv.empty()) write_text(o.csv, csv, *ctx.out);
  return {failures == 0 ? kOk : kPropertyFailed};
}

struct SampleOpts {
  std::size_t t = 2;
  std::size_t k = 4;
  std::string family = "M";
  std::uint64_t seed = 0;
  std::size_t n = 100;
  std::int64_t box = 10;
  std::size_t budget = 0;
  std::string out;
  std::string csv;
};

Outcome cmd_sample(const SampleOpts& o, const Context& ctx) {
  const Family f = parse_family_flag(o.family);
  if (f != Family::Braid && o.t == 0) throw UsageError("--t must be at least 1");
  if (o.box < 1) throw UsageError("--box must be at least 1");
  Manifest m{"sample",
             {{"t", o.t}, {"k", o.k}, {"family", to_string(f)}, {"n", o.n}, {"box", o.box},
              {"budget", o.budget}},
             o.seed,
             Json::object()};
  Json r = report_header("comarr.sample/1", m, ctx);
  const auto s = sample(o.t, o.k, f, {o.seed, o.n, o.box, o.budget});
  Json configs = Json::array();
  std::string csv = "index,point,re,im\n";
  for (std::size_t i = 0; i < s.configs.size(); ++i) {
    configs.push_back(to_json(s.configs[i]));
    for (std::size_t j = 0; j < s.configs[i].size(); ++j) {
      const auto& z = s.configs[i].points[j];
      csv += std::to_string(i) + "," + std::to_string(j + 1) + "," + z.re.get_str() + "," +
             z.im.get_str() + "\n";
    }
  }
  r["trials"] = s.trials;
  r["accepted"] = s.accepted;
  r["acceptance_rate"] = s.acceptance_rate();
  r["complete"] = s.complete(o.n);
  r["configs"] = std::move(configs);
  if (!s.complete(o.n)) {
    r["error"] = s.accepted == 0 ? "no configuration accepted within the trial budget"
                                 : "trial budget exhausted before the requested count";
  }
  write_text(o.out, dump(r), *ctx.out);
  if (!o.csv.empty()) write_text(o.csv, csv, *ctx.out);
  if (!s.complete(o.n)) {
    *ctx.err << r["error"].get<std::string>() << "\n";
    return {kFailure};
  }
  return {};
}

struct StabilizeOpts {
  std::string config;
  std::size_t t = 2;
  std::string out;
};

Outcome cmd_stabilize(const StabilizeOpts& o, const Context& ctx) {
  if (o.t == 0) throw UsageError("--t must be at least 1");
  const std::string text = read_file(o.config);
  const auto c = config_from_json(parse_json(text, o.config));
  Manifest m{"stabilize", {{"config", o.config}, {"t", o.t}}, std::nullopt,
             {{"config", sha256_hex(text)}}};
  Json r = report_header("comarr.stabilize/1", m, ctx);
  const auto s = stabilize(c, o.t);
  r["t"] = o.t;
  r["input"] = to_json(c);
  r["offset"] = stabilization_offset(c, o.t).get_str();
  r["output"] = to_json(s);
  r["input_in_Mprime"] = membership_json(c, o.t, Family::Mprime);
  r["output_in_Mprime"] = membership_json(s, o.t, Family::Mprime);
  r["input_in_M"] = membership_json(c, o.t, Family::M);
  r["output_in_M"] = membership_json(s, o.t, Family::M);
  r["dominates"] = stabilization_dominates(s, o.t);
  write_text(o.out, dump(r), *ctx.out);
  return {};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact combinatorics, algebra and topology of center-of-mass arrangements", "comarr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  unsigned threads = 1;
  std::string timestamp;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "Worker threads (0 = all cores); output does not depend on it");
    sub->add_option("--timestamp", timestamp, "Timestamp recorded in the manifest");
  };

  BuildOpts bo;
  auto* build_cmd = app.add_subcommand("build", "Write the canonical arrangement file");
  build_cmd->add_option("--family", bo.family, "M, Mprime or Braid")->required();
  build_cmd->add_option("--t", bo.t, "Subset size (M, Mprime)");
  build_cmd->add_option("--k", bo.k, "Number of points")->required();
  build_cmd->add_option("--out", bo.out, "Output path (default stdout)");
  add_common(build_cmd);

  InvariantsOpts io;
  auto* inv_cmd = app.add_subcommand("invariants", "Lattice invariants of an arrangement file");
  inv_cmd->add_option("--arr", io.arr, "Arrangement file")->required();
  inv_cmd->add_option("--out", io.out, "Output path (default stdout)");
  inv_cmd->add_flag("--force", io.force, "Allow more than 60 hyperplanes");
  inv_cmd->add_flag("--os", io.os, "Include Orlik-Solomon data");
  add_common(inv_cmd);

  HomologyOpts ho;
  auto* hom_cmd = app.add_subcommand("homology", "Homology of the Salvetti complex or its quotient");
  hom_cmd->add_option("--arr", ho.arr, "Arrangement file")->required();
  hom_cmd->add_flag("--quotient", ho.quotient, "Quotient by the symmetric group");
  hom_cmd->add_option("--coeff", ho.coeff, "Z, Q, Fp (with --p) or F<p>");
  hom_cmd->add_option("--p", ho.p, "Prime for Fp");
  hom_cmd->add_option("--twist", ho.twist, "trivial or sign");
  hom_cmd->add_option("--out", ho.out, "Output path (default stdout)");
  hom_cmd->add_option("--complex-out", ho.complex_out, "Also write the ordered complex");
  hom_cmd->add_flag("--force", ho.force, "Allow more than 60 hyperplanes");
  add_common(hom_cmd);

  CompareOpts co;
  auto* cmp_cmd = app.add_subcommand("compare", "Map H_*(M(t,k)/S_k) -> H_*(Conf(C,k)/S_k) over F_p");
  cmp_cmd->add_option("--t", co.t, "Subset size")->required();
  cmp_cmd->add_option("--k", co.k, "Number of points")->required();
  cmp_cmd->add_option("--p", co.p, "Prime")->required();
  cmp_cmd->add_option("--twist", co.twist, "trivial or sign");
  cmp_cmd->add_option("--out", co.out, "Output path (default stdout)");
  cmp_cmd->add_option("--csv", co.csv, "Also write the table as CSV");
  cmp_cmd->add_flag("--force", co.force, "Allow more than 60 hyperplanes");
  add_common(cmp_cmd);

  VerifyOpts vo;
  auto* ver_cmd = app.add_subcommand("verify", "Seeded exact property tests");
  ver_cmd->add_option("--prop", vo.prop, "pullback or stabilization")->required();
  ver_cmd->add_option("--t", vo.t, "Subset size")->required();
  ver_cmd->add_option("--k", vo.k, "Number of points")->required();
  ver_cmd->add_option("--n", vo.n, "Number of configurations");
  ver_cmd->add_option("--seed", vo.seed, "Seed");
  ver_cmd->add_option("--box", vo.box, "Coordinate numerator bound (default 1 for pullback, 10 for stabilization)");
  ver_cmd->add_option("--denominators", vo.denominators, "Largest coordinate denominator (pullback)");
  ver_cmd->add_option("--witness-samples", vo.witness_samples, "Seeded draws for the witness search");
  ver_cmd->add_option("--out", vo.out, "Output path (default stdout)");
  ver_cmd->add_option("--csv", vo.csv, "Also write per-trial results as CSV");
  add_common(ver_cmd);

  SampleOpts so;
  auto* smp_cmd = app.add_subcommand("sample", "Seeded rejection sampling of configurations");
  smp_cmd->add_option("--t", so.t, "Subset size");
  smp_cmd->add_option("--k", so.k, "Number of points")->required();
  smp_cmd->add_option("--family", so.family, "M, Mprime or Braid");
  smp_cmd->add_option("--seed", so.seed, "Seed");
  smp_cmd->add_option("--n", so.n, "Configurations wanted");
  smp_cmd->add_option("--box", so.box, "Integer coordinate bound B");
  smp_cmd->add_option("--budget", so.budget, "Trial budget (0 = 1000 per requested sample)");
  smp_cmd->add_option("--out", so.out, "Output path (default stdout)");
  smp_cmd->add_option("--csv", so.csv, "Also write the points as CSV");
  add_common(smp_cmd);

  StabilizeOpts sto;
  auto* stb_cmd = app.add_subcommand("stabilize", "Apply the stabilization map to a configuration");
  stb_cmd->add_option("--config", sto.config, "Configuration file")->required();
  stb_cmd->add_option("--t", sto.t, "Subset size")->required();
  stb_cmd->add_option("--out", sto.out, "Output path (default stdout)");
  add_common(stb_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  Context ctx{timestamp, &out, &err};
  try {
    set_thread_count(threads);
    Outcome o;
    if (build_cmd->parsed()) o = cmd_build(bo, ctx);
    else if (inv_cmd->parsed()) o = cmd_invariants(io, ctx);
    else if (hom_cmd->parsed()) o = cmd_homology(ho, ctx);
    else if (cmp_cmd->parsed()) o = cmd_compare(co, ctx);
    else if (ver_cmd->parsed()) o = cmd_verify(vo, ctx);
    else if (smp_cmd->parsed()) o = cmd_sample(so, ctx);
    else if (stb_cmd->parsed()) o = cmd_stabilize(sto, ctx);
    out.flush();
    return o.code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceLimitError& e) {
    err << "refused: " << e.what() << "\n";
    return kResourceRefused;
  } catch (const FormatError& e) {
    err << "bad input: " << e.what() << "\n";
    return kFailure;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace comarr::cli
