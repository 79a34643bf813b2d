#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "magweyl/io.hpp"

using namespace magweyl;
namespace fs = std::filesystem;

namespace {
std::string tmp_path(const char* name) {
  return (fs::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("symbol containers round-trip bit-exactly") {
  const PhaseGrid g = PhaseGrid::make(1, 16, 4.0, 0.3);
  Symbol f = Symbol::random_band_limited(g, 2, 77, 1, 4);
  const std::string p = tmp_path("mgwl_sym_test.mgwl");
  write_symbol(p, f);
  Symbol f2 = read_symbol(p);
  CHECK(f2.grid.same_as(f.grid));
  CHECK(f2.n_out == f.n_out);
  CHECK(f2.n_in == f.n_in);
  REQUIRE(f2.values.size() == f.values.size());
  bool exact = true;
  for (size_t i = 0; i < f.values.size(); ++i)
    exact = exact && f.values[i] == f2.values[i];
  CHECK(exact);
  // re-export produces identical bytes
  const std::string p2 = tmp_path("mgwl_sym_test2.mgwl");
  write_symbol(p2, f2);
  std::ifstream a(p, std::ios::binary), b(p2, std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(a)), {});
  std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
  // header formula: 48-byte header + n^2 * fib^2 complex values
  CHECK(sa.size() == 48u + size_t(16 * 16 * 4) * 16u);
}

TEST_CASE("operator containers round-trip bit-exactly") {
  const PhaseGrid g = PhaseGrid::make(1, 12, 3.0, 0.5);
  const MagneticData m = MagneticData::zero_field(1, 0.5, 0.3);
  OperatorMatrix M = op_quantize(Symbol::random_band_limited(g, 2, 5, 1, 4), m);
  const std::string p = tmp_path("mgwl_op_test.mgwl");
  write_operator(p, M);
  OperatorMatrix M2 = read_operator(p);
  CHECK(M2.grid.same_as(M.grid));
  CHECK((M.M - M2.M).norm() == 0.0);
}

TEST_CASE("malformed containers are rejected") {
  const PhaseGrid g = PhaseGrid::make(1, 8, 2.0, 1.0);
  Symbol f = Symbol::identity(g, 1);
  const std::string p = tmp_path("mgwl_bad_test.mgwl");
  SUBCASE("wrong kind tag") {
    write_symbol(p, f);
    CHECK_THROWS_AS(read_operator(p), input_error);
  }
  SUBCASE("bad magic") {
    std::ofstream os(p, std::ios::binary);
    os << "NOPE" << std::string(60, '\0');
    os.close();
    CHECK_THROWS_AS(read_symbol(p), input_error);
  }
  SUBCASE("truncated data") {
    write_symbol(p, f);
    fs::resize_file(p, fs::file_size(p) - 8);
    CHECK_THROWS_AS(read_symbol(p), input_error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_symbol(tmp_path("does_not_exist.mgwl")), input_error);
  }
}

TEST_CASE("csv export carries the container ordering") {
  const PhaseGrid g = PhaseGrid::make(1, 4, 2.0, 1.0);
  Symbol f = Symbol::scalar(g, [](Point X, Point xi) {
    return cplx(X[0], xi[0]);
  });
  const std::string p = tmp_path("mgwl_csv_test.csv");
  write_symbol_csv(p, f);
  std::ifstream is(p);
  std::string header;
  std::getline(is, header);
  CHECK(header == "x_index,xi_index,row,col,re,im");
  long rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  CHECK(rows == 16);
}
