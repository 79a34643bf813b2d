#pragma once

#include <map>
#include <string>
#include <vector>

#include "magweyl/common.hpp"

namespace magweyl {

/// Run configuration assembled from the config file and CLI overrides.
struct VerifyConfig {
  // grid
  int d = 1;
  int n = 64;
  double x_extent = 6.0;
  // params
  double eps = 0.3;
  double lambda = 0.5;
  std::uint64_t seed = 12345;
  // magnetic: zero | constant | landau
  std::string magnetic_kind = "zero";
  double B0 = 0.5;
  double a_const[2] = {0.3, 0.0};
  // test symbols
  int fib = 2;
  int max_mode = 1;
  int env_order = 6;
  // lattice (zak / equivariant suites)
  double lat_a = 1.0;
  int n_k = 8;
  int n_y = 48;
  int N_c = 5;
  int modes_M = 4;
  // per-check tolerance overrides (exact name match); tol_scale multiplies
  // every tolerance (the --tol flag).
  std::map<std::string, double> tol;
  double tol_scale = 1.0;
};

struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// One row of the scaling-fit CSV: a named fit, the abscissa (eps or n),
/// the measured value, and the fitted order for the family.
struct FitRow {
  std::string fit;
  double x = 0.0;
  double value = 0.0;
  double fitted_order = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  std::vector<FitRow> fits;
  bool all_pass() const;
};

extern const std::vector<std::string> kSuiteNames;  // excluding "all"

/// Executes one suite (or "all"); unknown names raise input_error.
SuiteReport run_suite(const std::string& name, const VerifyConfig& cfg);

}  // namespace magweyl
