#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "comarr/cli.hpp"
#include "comarr/formats.hpp"

namespace fs = std::filesystem;
using comarr::Json;
using namespace comarr::cli;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Fresh working directory and cache per test case.
struct Sandbox {
  fs::path root;
  Sandbox() {
    static int counter = 0;
    root = fs::temp_directory_path() /
           ("comarr-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(root);
    fs::create_directories(root);
    ::setenv("COM_ARR_CACHE", (root / "cache").c_str(), 1);
  }
  ~Sandbox() { fs::remove_all(root); }
  std::string path(const std::string& name) const { return (root / name).string(); }

  std::string arrangement(const std::string& family, int t, int k) const {
    const auto p = path(family + std::to_string(t) + "_" + std::to_string(k) + ".json");
    auto r = cli({"build", "--family", family, "--t", std::to_string(t), "--k", std::to_string(k), "--out", p});
    REQUIRE(r.code == kOk);
    return p;
  }
};

const std::string kStamp = "2024-01-01T00:00:00Z";

}  // namespace

TEST_CASE("build") {
  Sandbox s;
  auto r = cli({"build", "--family", "M", "--t", "2", "--k", "4"});
  REQUIRE(r.code == kOk);
  auto j = r.json();
  CHECK(j["normals"].size() == 9);
  CHECK(j["family"] == "M");
  CHECK(cli({"build", "--family", "M", "--t", "2", "--k", "4"}).out == r.out);

  auto b1 = cli({"build", "--family", "Braid", "--k", "1"});
  REQUIRE(b1.code == kOk);
  CHECK(b1.json()["normals"].empty());

  const auto p = s.arrangement("M", 3, 5);
  CHECK(Json::parse(slurp(p))["normals"].size() == 25);

  CHECK(cli({"build", "--family", "X", "--k", "3"}).code == kUsage);
  CHECK(cli({"build", "--family", "M", "--k", "3"}).code == kUsage);
  CHECK(cli({"build", "--k", "3"}).code == kUsage);
  CHECK(cli({}).code == kUsage);
}

TEST_CASE("arrangement files round-trip and reject malformed input") {
  Sandbox s;
  const auto p = s.arrangement("M", 2, 4);
  auto a = comarr::arrangement_from_json(Json::parse(slurp(p)));
  CHECK(a.hyperplanes.size() == 9);
  CHECK(comarr::to_json(a).dump(2) + "\n" == slurp(p));

  Json dup = Json::parse(slurp(p));
  dup["normals"].push_back(dup["normals"][0]);
  CHECK_THROWS_AS(comarr::arrangement_from_json(dup), comarr::FormatError);
  Json bad = Json::parse(slurp(p));
  bad["normals"][0] = {1, -1};
  CHECK_THROWS_AS(comarr::arrangement_from_json(bad), comarr::FormatError);

  std::ofstream(s.path("garbage.json")) << "{not json";
  CHECK(cli({"invariants", "--arr", s.path("garbage.json")}).code == kFailure);
  CHECK(cli({"invariants", "--arr", s.path("missing.json")}).code == kUsage);
}

TEST_CASE("invariants") {
  Sandbox s;
  auto b3 = cli({"invariants", "--arr", s.arrangement("Braid", 0, 3), "--timestamp", kStamp});
  REQUIRE(b3.code == kOk);
  auto j = b3.json();
  CHECK(j["poincare_polynomial"]["coefficients"] == Json::array({1, 3, 2}));
  CHECK(j["regions"] == 6);
  CHECK(j["characteristic_polynomial"]["mobius"]["text"] == "q^3 - 3q^2 + 2q");
  CHECK(j["manifest"]["timestamp"] == kStamp);
  CHECK(j["manifest"]["tool_version"] == kToolVersion);

  auto e = cli({"invariants", "--arr", s.arrangement("Braid", 0, 1)}).json();
  CHECK(e["characteristic_polynomial"]["mobius"]["coefficients"] == Json::array({0, 1}));
  CHECK(e["regions"] == 1);

  auto m = cli({"invariants", "--arr", s.arrangement("M", 2, 4), "--os"});
  REQUIRE(m.code == kOk);
  auto mj = m.json();
  CHECK(mj["characteristic_polynomial"]["agree"] == true);
  CHECK(mj["regions"] == 48);
  CHECK(mj["orbits"].size() == 2);
}

TEST_CASE("resource guard exit code") {
  Sandbox s;
  const auto p = s.arrangement("M", 3, 6);
  REQUIRE(Json::parse(slurp(p))["normals"].size() > 60);
  auto r = cli({"invariants", "--arr", p});
  CHECK(r.code == kResourceRefused);
  CHECK(r.out.empty());
  CHECK(cli({"homology", "--arr", p}).code == kResourceRefused);
  CHECK(cli({"compare", "--t", "3", "--k", "6", "--p", "2"}).code == kResourceRefused);
}

TEST_CASE("homology") {
  Sandbox s;
  const auto b2 = s.arrangement("Braid", 0, 2);
  auto z = cli({"homology", "--arr", b2, "--coeff", "Z"}).json();
  REQUIRE(z["homology"].size() == 2);
  for (const auto& d : z["homology"]) {
    CHECK(d["rank"] == 1);
    CHECK(d["torsion"].empty());
  }
  auto f2 = cli({"homology", "--arr", b2, "--quotient", "--coeff", "F2"}).json();
  CHECK(f2["homology"][0]["dim"] == 1);
  CHECK(f2["homology"][1]["dim"] == 1);
  auto fp = cli({"homology", "--arr", b2, "--quotient", "--coeff", "Fp", "--p", "2"});
  CHECK(fp.json()["homology"] == f2["homology"]);

  auto q = cli({"homology", "--arr", s.arrangement("Braid", 0, 3), "--coeff", "Q"}).json();
  CHECK(q["homology"][0]["dim"] == 1);
  CHECK(q["homology"][1]["dim"] == 3);
  CHECK(q["homology"][2]["dim"] == 2);

  auto b4 = cli({"homology", "--arr", s.arrangement("Braid", 0, 4), "--quotient", "--coeff", "Z",
                 "--complex-out", s.path("b4complex.json")});
  REQUIRE(b4.code == kOk);
  CHECK(b4.json()["homology"][2]["torsion"] == Json::array({2}));
  auto cx = Json::parse(slurp(s.path("b4complex.json")));
  CHECK(cx["schema"] == "comarr.complex/1");
  CHECK(cx["dims"][0]["cells"].size() == 24);

  CHECK(cli({"homology", "--arr", b2, "--coeff", "Fp", "--p", "4"}).code == kUsage);
  CHECK(cli({"homology", "--arr", b2, "--coeff", "R"}).code == kUsage);
  CHECK(cli({"homology", "--arr", b2, "--quotient", "--twist", "weird"}).code == kUsage);

  // A non-symmetric arrangement cannot be quotiented.
  std::ofstream(s.path("asym.json")) << R"({"family":"M","t":2,"k":3,"normals":[[1,-1,0]]})";
  CHECK(cli({"homology", "--arr", s.path("asym.json")}).code == kOk);
  CHECK(cli({"homology", "--arr", s.path("asym.json"), "--quotient"}).code != kOk);
}

TEST_CASE("compare") {
  Sandbox s;
  auto r = cli({"compare", "--t", "2", "--k", "4", "--p", "2", "--csv", s.path("cmp.csv"), "--timestamp", kStamp});
  REQUIRE(r.code == kOk);
  auto j = r.json();
  CHECK(j["rational_oracle"]["agrees"] == true);
  CHECK(j["conclusion"]["status"] == "reported");
  CHECK(!j["conclusion"]["non_surjective_degrees"].empty());
  CHECK(j["rows"][0]["surjective"] == true);
  CHECK(slurp(s.path("cmp.csv")).rfind("degree,", 0) == 0);
  CHECK(cli({"compare", "--t", "2", "--k", "4", "--p", "4"}).code == kUsage);
  CHECK(cli({"compare", "--t", "2", "--k", "4"}).code == kUsage);
}

TEST_CASE("verify") {
  Sandbox s;
  auto p = cli({"verify", "--prop", "pullback", "--t", "2", "--k", "4", "--n", "500", "--seed", "3"});
  REQUIRE(p.code == kOk);
  auto pj = p.json();
  CHECK(pj["passes"] == 500);
  CHECK(pj["failures"] == 0);
  CHECK(pj["outside_M"].get<int>() > 0);

  auto z = cli({"verify", "--prop", "pullback", "--t", "2", "--k", "4", "--n", "0"});
  CHECK(z.code == kOk);
  CHECK(z.json()["trials"] == 0);
  CHECK(z.json()["passes"] == 0);

  auto st = cli({"verify", "--prop", "stabilization", "--t", "3", "--k", "4", "--n", "100"});
  REQUIRE(st.code == kOk);
  auto sj = st.json();
  CHECK(sj["failures"] == 0);
  CHECK(sj["failure_witness"]["found"] == true);
  CHECK(sj["failure_witness"]["verified"] == true);
  CHECK(sj["failure_witness"]["config"]["points"][1][0] == 3);

  auto none = cli({"verify", "--prop", "stabilization", "--t", "2", "--k", "4", "--n", "50",
                   "--witness-samples", "100"});
  CHECK(none.code == kOk);
  CHECK(none.json()["failure_witness"]["found"] == false);

  CHECK(cli({"verify", "--prop", "other", "--t", "2", "--k", "4"}).code == kUsage);
}

TEST_CASE("sample and stabilize") {
  Sandbox s;
  auto r = cli({"sample", "--t", "2", "--k", "4", "--n", "5", "--seed", "9", "--csv", s.path("pts.csv")});
  REQUIRE(r.code == kOk);
  auto j = r.json();
  CHECK(j["configs"].size() == 5);
  CHECK(j["complete"] == true);

  auto fail = cli({"sample", "--t", "2", "--k", "7", "--n", "3", "--box", "1", "--budget", "20"});
  CHECK(fail.code == kFailure);
  CHECK(fail.json()["complete"] == false);

  std::ofstream(s.path("two.json")) << R"({"k":2,"points":[[0,1,0,1],[1,1,0,1]]})";
  auto st = cli({"stabilize", "--config", s.path("two.json"), "--t", "2"});
  REQUIRE(st.code == kOk);
  auto sj = st.json();
  CHECK(sj["offset"] == "8");
  CHECK(sj["output"]["points"][2] == Json::array({8, 1, 0, 1}));
  CHECK(sj["output_in_Mprime"]["inside"] == true);

  std::ofstream(s.path("bad.json")) << R"({"k":3,"points":[[0,1,0,1]]})";
  CHECK(cli({"stabilize", "--config", s.path("bad.json"), "--t", "2"}).code == kFailure);
}

TEST_CASE("cache hits, cold runs and corrupted entries give identical reports") {
  Sandbox s;
  const auto arr = s.arrangement("M", 2, 4);
  const std::vector<std::string> args{"invariants", "--arr", arr, "--os", "--timestamp", kStamp};
  auto cold = cli(args);
  REQUIRE(cold.code == kOk);
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(s.root / "cache")) entries.push_back(e.path());
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].filename().string().rfind("lattice-", 0) == 0);

  auto hit = cli(args);
  CHECK(hit.out == cold.out);

  std::ofstream(entries[0], std::ios::trunc) << "{\"truncated\":";
  auto repaired = cli(args);
  CHECK(repaired.code == kOk);
  CHECK(repaired.out == cold.out);
  CHECK(Json::accept(slurp(entries[0])));

  fs::remove_all(s.root / "cache");
  CHECK(cli(args).out == cold.out);

  // The cached lattice round-trips.
  auto l1 = comarr::lattice_from_json(Json::parse(slurp(entries[0])));
  auto a = comarr::arrangement_from_json(Json::parse(slurp(arr)));
  auto l2 = comarr::build_lattice(a.hyperplanes);
  CHECK(comarr::lattice_to_json(l1) == comarr::lattice_to_json(l2));
}

TEST_CASE("identical manifests give byte-identical reports at any thread count") {
  Sandbox s;
  const auto arr = s.arrangement("M", 2, 4);
  const std::vector<std::vector<std::string>> commands{
      {"invariants", "--arr", arr, "--os"},
      {"homology", "--arr", arr, "--quotient", "--coeff", "F2"},
      {"compare", "--t", "2", "--k", "4", "--p", "3", "--twist", "sign"},
      {"verify", "--prop", "pullback", "--t", "2", "--k", "5", "--n", "300", "--seed", "5"},
      {"verify", "--prop", "stabilization", "--t", "2", "--k", "4", "--n", "100", "--seed", "5"},
      {"sample", "--t", "2", "--k", "4", "--n", "50", "--seed", "5"},
  };
  for (const auto& base : commands) {
    CAPTURE(base[0]);
    std::string first;
    for (const char* threads : {"1", "4", "0"}) {
      auto args = base;
      args.insert(args.end(), {"--threads", threads, "--timestamp", kStamp});
      auto r = cli(args);
      REQUIRE(r.code == kOk);
      if (first.empty()) first = r.out;
      CHECK(r.out == first);
    }
  }
}

TEST_CASE("timestamp falls back to SOURCE_DATE_EPOCH") {
  Sandbox s;
  ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
  auto r = cli({"sample", "--t", "2", "--k", "4", "--n", "1"});
  ::unsetenv("SOURCE_DATE_EPOCH");
  CHECK(r.json()["manifest"]["timestamp"] == "1970-01-02T00:00:00Z");
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
