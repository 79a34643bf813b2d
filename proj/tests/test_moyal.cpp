#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "magweyl/moyal.hpp"

using namespace magweyl;

TEST_CASE("symplectic fourier is involutive") {
  const PhaseGrid g = PhaseGrid::make(1, 32, 4.0, 0.3);
  Symbol f = Symbol::random_band_limited(g, 2, 3, 2, 5);
  CHECK(symbol_distance(symplectic_fourier(symplectic_fourier(f)), f, true) < 1e-12);
}

TEST_CASE("spectral derivatives are exact on trigonometric modes") {
  const PhaseGrid g = PhaseGrid::make(1, 32, kPi, 0.5);
  const double LX = g.eps * g.x_extent;  // X in [-LX, LX)
  Symbol f = Symbol::scalar(g, [LX](Point X, Point) {
    return cplx(std::sin(kPi * X[0] / LX), 0.0);
  });
  Symbol expect = Symbol::scalar(g, [LX](Point X, Point) {
    return cplx(kPi / LX * std::cos(kPi * X[0] / LX), 0.0);
  });
  CHECK(symbol_distance(spectral_derivative(f, false, 0), expect, true) < 1e-12);
}

TEST_CASE("product units, adjoints, associativity") {
  const PhaseGrid g = PhaseGrid::make(1, 32, 4.0, 0.3);
  const MagneticData m = MagneticData::zero_field(1, 0.3, 0.5);
  Symbol f = Symbol::random_band_limited(g, 2, 21, 1, 5);
  Symbol h = Symbol::random_band_limited(g, 2, 22, 1, 5);
  Symbol k = Symbol::random_band_limited(g, 2, 23, 1, 5);
  Symbol id = Symbol::identity(g, 2);
  CHECK(symbol_distance(weyl_product_exact(f, id, m), f, true) < 1e-13);
  CHECK(symbol_distance(weyl_product_exact(id, f, m), f, true) < 1e-13);
  Symbol fh = weyl_product_exact(f, h, m);
  CHECK(symbol_distance(fh.adjoint(),
                        weyl_product_exact(h.adjoint(), f.adjoint(), m), true) <
        1e-12);
  CHECK(symbol_distance(weyl_product_exact(fh, k, m),
                        weyl_product_exact(f, weyl_product_exact(h, k, m), m),
                        true) < 1e-12);
}

TEST_CASE("constant symbols multiply pointwise") {
  const PhaseGrid g = PhaseGrid::make(1, 16, 3.0, 0.4);
  const MagneticData m = MagneticData::zero_field(1, 0.4, 0.5);
  Eigen::MatrixXcd A(2, 2), B(2, 2);
  A << cplx(1, 0), cplx(0, 2), cplx(0.5, 0), cplx(0, -1);
  B << cplx(0, 1), cplx(2, 0), cplx(-1, 0), cplx(0.3, 0.4);
  auto make_const = [&](const Eigen::MatrixXcd& C) {
    return Symbol::matrix(g, 2, 2, [&](Point, Point, FiberMap out) {
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out(r, c) = C(r, c);
    });
  };
  Symbol prod = weyl_product_exact(make_const(A), make_const(B), m);
  Symbol expect = make_const(Eigen::MatrixXcd(A * B));
  CHECK(symbol_distance(prod, expect, true) < 1e-12);
}

TEST_CASE("integral route matches the exact route") {
  SUBCASE("d = 1, zero and constant field") {
    const PhaseGrid g = PhaseGrid::make(1, 32, 4.0, 0.3);
    for (const MagneticData& m :
         {MagneticData::zero_field(1, 0.3, 0.5),
          MagneticData::constant_A(1, Point{0.4, 0.0}, 0.3, 0.5)}) {
      Symbol f = Symbol::random_band_limited(g, 2, 31, 1, 5);
      Symbol h = Symbol::random_band_limited(g, 2, 32, 1, 5);
      CHECK(symbol_distance(weyl_product_integral(f, h, m),
                            weyl_product_exact(f, h, m), true) < 1e-12);
    }
  }
  SUBCASE("d = 2, landau gauge") {
    const PhaseGrid g = PhaseGrid::make(2, 16, 4.0, 0.3);
    const MagneticData m = MagneticData::landau_gauge(0.5, 0.3, 0.5);
    Symbol f = Symbol::random_band_limited(g, 1, 33, 1, 3);
    Symbol h = Symbol::random_band_limited(g, 1, 34, 1, 3);
    CHECK(symbol_distance(weyl_product_integral(f, h, m),
                          weyl_product_exact(f, h, m), true) < 1e-12);
  }
  SUBCASE("general sampled fields are out of scope") {
    const PhaseGrid g = PhaseGrid::make(1, 16, 2.0, 0.3);
    MagneticData s = MagneticData::from_callables(
        1, [](Point, int) { return 0.1; }, [](Point, int, int) { return 0.0; },
        50.0, 0.3, 0.5);
    Symbol f = Symbol::random_band_limited(g, 1, 35, 1, 3);
    CHECK_THROWS_AS(weyl_product_integral(f, f, s), capability_error);
  }
}

TEST_CASE("expansion terms and remainder orders") {
  const double LX = 1.2;
  double e0[2], e1[2];
  int i = 0;
  for (double ep : {0.2, 0.1}) {
    const int n = int(64 * 0.2 / ep + 0.5);
    const PhaseGrid g = PhaseGrid::make(1, n, LX / ep, ep);
    const MagneticData m = MagneticData::zero_field(1, ep, 0.5);
    Symbol f = Symbol::random_band_limited(g, 2, 41, 1, 6);
    Symbol h = Symbol::random_band_limited(g, 2, 42, 1, 6);
    Symbol exact = weyl_product_exact(f, h, m);
    FormalSeries s = weyl_product_expansion(f, h, m, 1);
    CHECK(symbol_distance(s.terms[0], pointwise_product(f, h), true) < 1e-12);
    Symbol br = poisson_bracket_magnetic(f, h, m);
    br *= cplx(0.0, -0.5);
    CHECK(symbol_distance(s.terms[1], br, true) < 1e-12);
    e0[i] = (exact - s.evaluate(ep, 0)).sup_opnorm();
    e1[i] = (exact - s.evaluate(ep, 1)).sup_opnorm();
    ++i;
  }
  const double p0 = std::log2(e0[0] / e0[1]);
  const double p1 = std::log2(e1[0] / e1[1]);
  CHECK(p0 == doctest::Approx(1.0).epsilon(0.2));
  CHECK(p1 == doctest::Approx(2.0).epsilon(0.15));
  const PhaseGrid g = PhaseGrid::make(1, 16, 2.0, 0.3);
  Symbol f = Symbol::random_band_limited(g, 1, 43, 1, 3);
  CHECK_THROWS_AS(
      weyl_product_expansion(f, f, MagneticData::zero_field(1, 0.3, 0.0), 2),
      capability_error);
}

TEST_CASE("coordinate derivations") {
  const PhaseGrid g = PhaseGrid::make(1, 64, 6.0, 0.3);
  const MagneticData m = MagneticData::zero_field(1, 0.3, 0.5);
  Symbol f = Symbol::random_band_limited(g, 2, 51, 1, 6);
  SUBCASE("ad_x is exactly i eps d_xi") {
    Symbol de = derivation(f, DerivationAxis::position, 0, m, DerivationRoute::exact);
    Symbol dx = derivation(f, DerivationAxis::position, 0, m, DerivationRoute::expanded);
    CHECK(symbol_distance(de, dx, false) < 1e-10);
    Symbol ref = spectral_derivative(f, true, 0);
    ref *= cplx(0.0, g.eps);
    CHECK(symbol_distance(dx, ref, false) < 1e-12);
  }
  SUBCASE("ad_xi closes for constant fields") {
    Symbol de = derivation(f, DerivationAxis::momentum, 0, m, DerivationRoute::exact);
    Symbol dx = derivation(f, DerivationAxis::momentum, 0, m, DerivationRoute::expanded);
    CHECK(symbol_distance(de, dx, false) < 1e-10);
  }
  SUBCASE("iterated derivations compose") {
    Symbol one = derivation(derivation(f, DerivationAxis::momentum, 0, m,
                                       DerivationRoute::expanded),
                            DerivationAxis::position, 0, m,
                            DerivationRoute::expanded);
    Symbol two = iterated_derivation(f, {1, 0}, {1, 0}, m, DerivationRoute::expanded);
    CHECK(symbol_distance(one, two, true) < 1e-12);
  }
}

TEST_CASE("gabor window partitions unity") {
  auto chi = gabor_window(1);
  for (double t : {-0.3, 0.1, 0.45}) {
    double s = 0.0;
    for (int gshift = -3; gshift <= 3; ++gshift) {
      const double v = chi(Point{t - gshift, 0.0});
      s += v * v;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  }
}
