#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kBin = MAGWEYL_BIN;
const std::string kConfig = std::string(MAGWEYL_CONFIG_DIR) + "/default.json";

struct Run {
  int exit_code;
  std::string out_dir;
};

fs::path work_dir() {
  fs::path p = fs::temp_directory_path() / "magweyl_cli_test";
  fs::create_directories(p);
  return p;
}

int run_cmd(const std::string& args) {
  const int rc = std::system((kBin + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(is)), {});
}

long count_occurrences(const std::string& hay, const std::string& needle) {
  long n = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + 1))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("roundtrip suite on the default config passes with 6 checks") {
  const fs::path out = work_dir() / "rt";
  fs::create_directories(out);
  CHECK(run_cmd("run --config " + kConfig + " --suite roundtrip --out " +
                out.string()) == 0);
  const std::string rep = slurp(out / "report.json");
  CHECK(count_occurrences(rep, "\"name\"") == 6);
  CHECK(rep.find("\"prng\": \"splitmix64\"") != std::string::npos);
  CHECK(rep.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs") {
  const fs::path o1 = work_dir() / "d1", o2 = work_dir() / "d2";
  fs::create_directories(o1);
  fs::create_directories(o2);
  REQUIRE(run_cmd("run --config " + kConfig + " --suite zak --out " +
                  o1.string()) == 0);
  REQUIRE(run_cmd("run --config " + kConfig + " --suite zak --out " +
                  o2.string()) == 0);
  CHECK(slurp(o1 / "report.json") == slurp(o2 / "report.json"));
}

TEST_CASE("expansion suite emits fitted orders near 1 and 2") {
  const fs::path out = work_dir() / "exp";
  fs::create_directories(out);
  REQUIRE(run_cmd("run --config " + kConfig + " --suite expansion --out " +
                  out.string()) == 0);
  std::ifstream is(out / "fits.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "fit,x,value,fitted_order");
  bool seen1 = false, seen2 = false;
  for (std::string line; std::getline(is, line);) {
    const double order = std::atof(line.substr(line.rfind(',') + 1).c_str());
    if (line.rfind("expansion_remainder_N0", 0) == 0)
      seen1 = std::abs(order - 1.0) < 0.2;
    if (line.rfind("expansion_remainder_N1", 0) == 0)
      seen2 = std::abs(order - 2.0) < 0.2;
  }
  CHECK(seen1);
  CHECK(seen2);
}

TEST_CASE("schema violations exit 2") {
  const fs::path cfg = work_dir() / "bad.json";
  const fs::path out = work_dir() / "bad_out";
  fs::create_directories(out);
  SUBCASE("missing grid.n") {
    std::ofstream(cfg) << "{\"grid\": {\"d\": 1, \"x_extent\": 6.0}}";
    CHECK(run_cmd("run --config " + cfg.string() + " --suite roundtrip --out " +
                  out.string()) == 2);
  }
  SUBCASE("unparseable document") {
    std::ofstream(cfg) << "{not json";
    CHECK(run_cmd("run --config " + cfg.string() + " --suite roundtrip --out " +
                  out.string()) == 2);
  }
  SUBCASE("unknown key") {
    std::ofstream(cfg) << "{\"grid\": {\"n\": 16, \"frobnicate\": 1}}";
    CHECK(run_cmd("run --config " + cfg.string() + " --suite roundtrip --out " +
                  out.string()) == 2);
  }
  SUBCASE("unknown suite") {
    CHECK(run_cmd("run --config " + kConfig + " --suite bogus --out " +
                  out.string()) == 2);
  }
  SUBCASE("nonexistent out dir") {
    CHECK(run_cmd("run --config " + kConfig + " --suite roundtrip --out " +
                  (work_dir() / "no" / "such" / "dir").string()) == 2);
  }
}

TEST_CASE("numerical failures exit 1 and name the check") {
  const fs::path out = work_dir() / "fail";
  fs::create_directories(out);
  // squeeze every tolerance to force failures
  CHECK(run_cmd("run --config " + kConfig + " --suite roundtrip --out " +
                out.string() + " --tol 1e-20") == 1);
  const std::string rep = slurp(out / "report.json");
  CHECK(rep.find("\"all_pass\": false") != std::string::npos);
}

TEST_CASE("exports round-trip bit-exactly") {
  const fs::path s1 = work_dir() / "s1.mgwl", s2 = work_dir() / "s2.mgwl";
  REQUIRE(run_cmd("export --config " + kConfig + " --object symbol --out " +
                  s1.string()) == 0);
  REQUIRE(run_cmd("export --config " + kConfig + " --object symbol --out " +
                  s2.string()) == 0);
  const std::string b1 = slurp(s1);
  CHECK(!b1.empty());
  CHECK(b1 == slurp(s2));
  CHECK(b1.substr(0, 4) == "MGWL");
  // header formula: 48 bytes + n^2 fib^2 complex values (d=1, n=64, fib=2)
  CHECK(b1.size() == 48u + size_t(64) * 64 * 4 * 16);

  const fs::path op = work_dir() / "o1.mgwl";
  REQUIRE(run_cmd("export --config " + kConfig + " --object operator --out " +
                  op.string()) == 0);
  CHECK(slurp(op).size() == 48u + size_t(64 * 2) * (64 * 2) * 16);

  const fs::path rep = work_dir() / "r1.csv";
  REQUIRE(run_cmd("export --config " + kConfig + " --object report --out " +
                  rep.string()) == 0);
  const std::string csv = slurp(rep);
  CHECK(csv.rfind("name,lhs,rhs,defect,tolerance,pass", 0) == 0);

  SUBCASE("bad object and bad paths exit 2") {
    CHECK(run_cmd("export --config " + kConfig + " --object bogus --out " +
                  (work_dir() / "x").string()) == 2);
    CHECK(run_cmd("export --config " + kConfig + " --object symbol --out " +
                  (work_dir() / "no" / "dir" / "x.mgwl").string()) == 2);
  }
}
