// magweyl: verification front end for the magnetic Weyl quantization library.
//
// Subcommands:
//   magweyl run --config PATH --suite NAME --out DIR
//               [--eps X --lambda Y --grid N --tol T]
//     Runs one verification suite (or "all") and writes out/report.json plus
//     out/fits.csv with the scaling-fit tables. Exit 0 iff every check
//     passes, 1 on a numerical failure, 2 on a malformed config.
//
//   magweyl export --config PATH --object {symbol|operator|report} --out PATH
//     Writes the first configured symbol (or its quantization) as an MGWL
//     container, or the report of the configured suites as CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "magweyl/io.hpp"
#include "magweyl/quantize.hpp"
#include "magweyl/suites.hpp"

using json = nlohmann::json;
using namespace magweyl;

namespace {

[[noreturn]] void config_fail(const std::string& msg) {
  std::fprintf(stderr, "magweyl: config error: %s\n", msg.c_str());
  std::exit(2);
}

double need_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path + " must be a number");
  return j.get<double>();
}

int need_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) config_fail(path + " must be an integer");
  return j.get<int>();
}

// Loads the config file and fills a VerifyConfig. Unknown keys are rejected
// so that typos surface as schema errors instead of silently applied
// defaults.
VerifyConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) config_fail("cannot open " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    config_fail(path + ": " + e.what());
  }
  VerifyConfig cfg;
  if (!j.is_object()) config_fail("top level must be an object");
  for (auto& [key, val] : j.items()) {
    if (key == "grid") {
      if (!val.is_object()) config_fail("grid must be an object");
      if (!val.contains("n")) config_fail("grid.n is required");
      cfg.n = need_int(val["n"], "grid.n");
      if (cfg.n < 2 || cfg.n % 2) config_fail("grid.n must be even and >= 2");
      if (val.contains("d")) cfg.d = need_int(val["d"], "grid.d");
      if (cfg.d < 1 || cfg.d > 2) config_fail("grid.d must be 1 or 2");
      if (val.contains("x_extent"))
        cfg.x_extent = need_number(val["x_extent"], "grid.x_extent");
      if (cfg.x_extent <= 0) config_fail("grid.x_extent must be positive");
      for (auto& [k2, v2] : val.items())
        if (k2 != "n" && k2 != "d" && k2 != "x_extent")
          config_fail("unknown key grid." + k2);
    } else if (key == "params") {
      for (auto& [k2, v2] : val.items()) {
        if (k2 == "eps") cfg.eps = need_number(v2, "params.eps");
        else if (k2 == "lambda") cfg.lambda = need_number(v2, "params.lambda");
        else if (k2 == "seed") cfg.seed = std::uint64_t(need_number(v2, "params.seed"));
        else config_fail("unknown key params." + k2);
      }
      if (cfg.eps <= 0) config_fail("params.eps must be positive");
    } else if (key == "magnetic") {
      if (!val.is_object() || !val.contains("kind"))
        config_fail("magnetic.kind is required");
      for (auto& [k2, v2] : val.items()) {
        if (k2 == "kind") {
          if (!v2.is_string()) config_fail("magnetic.kind must be a string");
          cfg.magnetic_kind = v2.get<std::string>();
        } else if (k2 == "B0") {
          cfg.B0 = need_number(v2, "magnetic.B0");
        } else if (k2 == "A") {
          if (!v2.is_array() || v2.empty() || v2.size() > 2)
            config_fail("magnetic.A must be a list of 1 or 2 numbers");
          for (size_t i = 0; i < v2.size(); ++i)
            cfg.a_const[i] = need_number(v2[i], "magnetic.A");
        } else {
          config_fail("unknown key magnetic." + k2);
        }
      }
      if (cfg.magnetic_kind != "zero" && cfg.magnetic_kind != "constant" &&
          cfg.magnetic_kind != "landau")
        config_fail("magnetic.kind must be zero, constant, or landau");
    } else if (key == "symbols") {
      if (!val.is_array() || val.empty())
        config_fail("symbols must be a non-empty list");
      const json& s0 = val[0];
      for (auto& [k2, v2] : s0.items()) {
        if (k2 == "fib") cfg.fib = need_int(v2, "symbols[0].fib");
        else if (k2 == "max_mode") cfg.max_mode = need_int(v2, "symbols[0].max_mode");
        else if (k2 == "env_order") cfg.env_order = need_int(v2, "symbols[0].env_order");
        else config_fail("unknown key symbols[0]." + k2);
      }
      if (cfg.fib < 1 || cfg.fib > 9) config_fail("symbols[0].fib must be in 1..9");
      if (cfg.max_mode < 1) config_fail("symbols[0].max_mode must be >= 1");
      if (cfg.env_order < 1) config_fail("symbols[0].env_order must be >= 1");
    } else if (key == "lattice") {
      for (auto& [k2, v2] : val.items()) {
        if (k2 == "a") cfg.lat_a = need_number(v2, "lattice.a");
        else if (k2 == "n_k") cfg.n_k = need_int(v2, "lattice.n_k");
        else if (k2 == "n_y") cfg.n_y = need_int(v2, "lattice.n_y");
        else if (k2 == "cover_cells") cfg.N_c = need_int(v2, "lattice.cover_cells");
        else if (k2 == "modes") cfg.modes_M = need_int(v2, "lattice.modes");
        else config_fail("unknown key lattice." + k2);
      }
    } else if (key == "suites") {
      if (!val.is_object()) config_fail("suites must be an object");
      for (auto& [k2, v2] : val.items())
        cfg.tol[k2] = need_number(v2, "suites." + k2);
    } else {
      config_fail("unknown top-level key " + key);
    }
  }
  if (!j.contains("grid")) config_fail("grid section is required");
  return cfg;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_report_json(const std::string& path, const SuiteReport& rep,
                       const VerifyConfig& cfg) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) config_fail("cannot write " + path);
  std::fprintf(fp, "{\n  \"suite\": \"%s\",\n", rep.suite.c_str());
  std::fprintf(fp, "  \"prng\": \"splitmix64\",\n  \"seed\": %llu,\n",
               (unsigned long long)cfg.seed);
  std::fprintf(fp, "  \"checks\": [\n");
  for (size_t i = 0; i < rep.checks.size(); ++i) {
    const CheckResult& c = rep.checks[i];
    std::fprintf(fp,
                 "    {\"name\": \"%s\", \"lhs\": %s, \"rhs\": %s, "
                 "\"defect\": %s, \"tolerance\": %s, \"pass\": %s}%s\n",
                 c.name.c_str(), fmt_double(c.lhs).c_str(),
                 fmt_double(c.rhs).c_str(), fmt_double(c.defect).c_str(),
                 fmt_double(c.tolerance).c_str(), c.pass ? "true" : "false",
                 i + 1 < rep.checks.size() ? "," : "");
  }
  std::fprintf(fp, "  ],\n  \"all_pass\": %s\n}\n",
               rep.all_pass() ? "true" : "false");
  std::fclose(fp);
}

void write_fits_csv(const std::string& path, const SuiteReport& rep) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) config_fail("cannot write " + path);
  std::fprintf(fp, "fit,x,value,fitted_order\n");
  for (const FitRow& r : rep.fits)
    std::fprintf(fp, "%s,%.17g,%.17g,%.17g\n", r.fit.c_str(), r.x, r.value,
                 r.fitted_order);
  std::fclose(fp);
}

void write_checks_csv(const std::string& path, const SuiteReport& rep) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) config_fail("cannot write " + path);
  std::fprintf(fp, "name,lhs,rhs,defect,tolerance,pass\n");
  for (const CheckResult& c : rep.checks)
    std::fprintf(fp, "%s,%.17g,%.17g,%.17g,%.17g,%d\n", c.name.c_str(), c.lhs,
                 c.rhs, c.defect, c.tolerance, c.pass ? 1 : 0);
  std::fclose(fp);
}

Symbol config_symbol(const VerifyConfig& cfg) {
  const PhaseGrid g = PhaseGrid::make(cfg.d, cfg.n, cfg.x_extent, cfg.eps);
  return Symbol::random_band_limited(g, cfg.fib, cfg.seed, cfg.max_mode,
                                     cfg.env_order);
}

MagneticData config_mag(const VerifyConfig& cfg) {
  if (cfg.magnetic_kind == "constant") {
    Point a{cfg.a_const[0], cfg.a_const[1]};
    return MagneticData::constant_A(cfg.d, a, cfg.eps, cfg.lambda);
  }
  if (cfg.magnetic_kind == "landau") {
    if (cfg.d != 2) config_fail("magnetic.kind = landau requires grid.d = 2");
    return MagneticData::landau_gauge(cfg.B0, cfg.eps, cfg.lambda);
  }
  return MagneticData::zero_field(cfg.d, cfg.eps, cfg.lambda);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magweyl: magnetic Weyl quantization verification tool"};
  app.require_subcommand(1);

  std::string config_path, suite = "all", out_dir, object, out_path;
  double eps_flag = -1.0, lambda_flag = -1e300, tol_flag = -1.0;
  int grid_flag = 0;

  CLI::App* run = app.add_subcommand("run", "run a verification suite");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--suite", suite, "suite name or 'all'");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--eps", eps_flag, "override params.eps");
  run->add_option("--lambda", lambda_flag, "override params.lambda");
  run->add_option("--grid", grid_flag, "override grid.n");
  run->add_option("--tol", tol_flag, "global tolerance scale factor");

  CLI::App* exp = app.add_subcommand("export", "export symbol/operator/report");
  exp->add_option("--config", config_path, "config file")->required();
  exp->add_option("--object", object, "symbol | operator | report")->required();
  exp->add_option("--out", out_path, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    VerifyConfig cfg = load_config(config_path);
    if (eps_flag > 0) cfg.eps = eps_flag;
    if (lambda_flag > -1e299) cfg.lambda = lambda_flag;
    if (grid_flag > 0) {
      if (grid_flag % 2) config_fail("--grid must be even");
      cfg.n = grid_flag;
    }
    if (tol_flag > 0) cfg.tol_scale = tol_flag;

    if (run->parsed()) {
      bool known = suite == "all";
      for (const auto& s : kSuiteNames) known = known || s == suite;
      if (!known) config_fail("unknown suite '" + suite + "'");
      SuiteReport rep = run_suite(suite, cfg);
      write_report_json(out_dir + "/report.json", rep, cfg);
      write_fits_csv(out_dir + "/fits.csv", rep);
      if (!rep.all_pass()) {
        for (const CheckResult& c : rep.checks)
          if (!c.pass)
            std::fprintf(stderr, "magweyl: FAIL %s: defect %.3g > tolerance %.3g\n",
                         c.name.c_str(), c.defect, c.tolerance);
        return 1;
      }
      std::printf("magweyl: suite %s: %zu checks passed\n", suite.c_str(),
                  rep.checks.size());
      return 0;
    }

    // export
    if (object == "symbol") {
      write_symbol(out_path, config_symbol(cfg));
    } else if (object == "operator") {
      write_operator(out_path, op_quantize(config_symbol(cfg), config_mag(cfg)));
    } else if (object == "report") {
      write_checks_csv(out_path, run_suite("roundtrip", cfg));
    } else {
      config_fail("--object must be symbol, operator, or report");
    }
    return 0;
  } catch (const input_error& e) {
    std::fprintf(stderr, "magweyl: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "magweyl: error: %s\n", e.what());
    return 1;
  }
}
