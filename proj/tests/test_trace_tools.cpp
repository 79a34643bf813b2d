#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "magweyl/trace_tools.hpp"

using namespace magweyl;

namespace {
PhaseGrid hgrid(int n = 64) { return PhaseGrid::make(1, n, 6.0, 1.0); }
MagneticData hmag() { return MagneticData::zero_field(1, 1.0, 0.0); }
Symbol gaussian(const PhaseGrid& g) {
  return Symbol::scalar(g, [](Point X, Point xi) {
    return cplx(std::exp(-X[0] * X[0] - xi[0] * xi[0]), 0.0);
  });
}
}  // namespace

TEST_CASE("trace formula is exact per sample") {
  const PhaseGrid g = hgrid();
  Symbol f = gaussian(g);
  TraceCheck tc = trace_formula_check(f, hmag());
  CHECK(tc.defect < 1e-13);  // lhs vs grid rhs: identical sums
  // and the grid sum is the continuum integral up to quadrature error
  CHECK(std::abs(tc.rhs - cplx(0.5, 0.0)) < 1e-8);
}

TEST_CASE("matrix-valued traces add fiber traces") {
  const PhaseGrid g = hgrid();
  Symbol f = Symbol::matrix(g, 2, 2, [](Point X, Point xi, FiberMap m) {
    const double e = std::exp(-X[0] * X[0] - xi[0] * xi[0]);
    m.setZero();
    m(0, 0) = e;
    m(1, 1) = 2.0 * e;
  });
  TraceCheck tc = trace_formula_check(f, hmag());
  CHECK(std::abs(tc.lhs - cplx(1.5, 0.0)) < 1e-8);
  CHECK(tc.defect < 1e-13);
}

TEST_CASE("trace formula holds in a magnetic field") {
  const PhaseGrid g = PhaseGrid::make(2, 16, 4.0, 0.3);
  const MagneticData m = MagneticData::landau_gauge(0.6, 0.3, 0.5);
  Symbol f = Symbol::random_band_limited(g, 2, 71, 1, 4);
  TraceCheck tc = trace_formula_check(f, m);
  CHECK(tc.defect < 1e-12);
}

TEST_CASE("schatten norms") {
  const PhaseGrid g = hgrid(32);
  const MagneticData m = hmag();
  OperatorMatrix M = op_quantize(gaussian(g), m);
  SUBCASE("p = 2 is the Frobenius norm") {
    CHECK(schatten_norm(M, 2.0) == doctest::Approx(M.M.norm()).epsilon(1e-12));
  }
  SUBCASE("p = inf is the operator norm") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(schatten_norm(M, inf) ==
          doctest::Approx(operator_norm(M.M)).epsilon(1e-8));
  }
  SUBCASE("monotone nonincreasing in p") {
    double prev = schatten_norm(M, 1.0);
    for (double p : {1.5, 2.0, 4.0, 8.0}) {
      const double cur = schatten_norm(M, p);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
  SUBCASE("p < 1 is rejected") {
    CHECK_THROWS_AS(schatten_norm(M, 0.5), input_error);
  }
}

TEST_CASE("trace is cyclic") {
  const PhaseGrid g = hgrid(32);
  const MagneticData m = hmag();
  const Eigen::MatrixXcd A = op_quantize(gaussian(g), m).M;
  const Eigen::MatrixXcd B =
      op_quantize(Symbol::random_band_limited(g, 1, 73, 1, 5), m).M;
  const cplx t1 = (A * B).trace(), t2 = (B * A).trace();
  CHECK(std::abs(t1 - t2) <= 1e-10 * std::max(1.0, std::abs(t1)));
}

TEST_CASE("local traces") {
  const MagneticData m = hmag();
  SUBCASE("zero cutoff gives zero") {
    const PhaseGrid g = hgrid(32);
    Symbol chi(g, 1, 1);  // identically zero
    CHECK(local_trace_check(gaussian(g), chi, 2.0, m) == 0.0);
  }
  SUBCASE("stable under refinement") {
    auto value = [&](int n) {
      const PhaseGrid g = hgrid(n);
      Symbol chi = Symbol::scalar(g, [](Point X, Point) {
        return cplx(std::exp(-X[0] * X[0]), 0.0);
      });
      return local_trace_check(gaussian(g), chi, 2.0, m);
    };
    const double a = value(32), b = value(64);
    CHECK(std::abs(a - b) / b < 0.05);
  }
  SUBCASE("identity symbol with compact cutoff stays finite") {
    const PhaseGrid g = hgrid(32);
    Symbol chi = Symbol::scalar(g, [](Point X, Point) {
      return cplx(std::exp(-4.0 * X[0] * X[0]), 0.0);
    });
    const double v = local_trace_check(Symbol::identity(g, 1), chi, 2.0, m);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
}
