#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "magweyl/equivariant.hpp"

using namespace magweyl;

namespace {

const double kA1[2] = {1.0, 1.0};

Lattice lat1() { return Lattice::make(1, kA1, 8, 48, 5); }

Eigen::VectorXcd random_vec(long n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::VectorXcd v(n);
  for (long i = 0; i < n; ++i) v(i) = cplx(rng.sym(), rng.sym());
  return v;
}

// 4th-order periodic finite differences for -psi'' + 2 cos(2 pi y) psi,
// an oracle independent of the plane-wave fiber construction.
double mathieu_fd_reference() {
  const int N = 400;
  const double h = 1.0 / N;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  auto idx = [&](int j) { return ((j % N) + N) % N; };
  for (int i = 0; i < N; ++i) {
    A(i, idx(i - 2)) += 1.0 / (12.0 * h * h);
    A(i, idx(i - 1)) += -16.0 / (12.0 * h * h);
    A(i, i) += 30.0 / (12.0 * h * h) + 2.0 * std::cos(2.0 * kPi * i * h);
    A(i, idx(i + 1)) += -16.0 / (12.0 * h * h);
    A(i, idx(i + 2)) += 1.0 / (12.0 * h * h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

TEST_CASE("lattice validation") {
  CHECK_THROWS_AS(Lattice::make(1, kA1, 7, 48, 5), input_error);   // odd n_k
  CHECK_THROWS_AS(Lattice::make(1, kA1, 8, 48, 4), input_error);   // even cover
  CHECK_THROWS_AS(Lattice::make(3, kA1, 8, 48, 5), input_error);   // bad d
  const double rect[2] = {1.0, 2.0};
  CHECK(Lattice::make(2, rect, 4, 8, 3).d == 2);  // rectangular is supported
}

TEST_CASE("zak transform identities") {
  const Lattice lat = lat1();
  Eigen::VectorXcd Psi = random_vec(lat.patch_count() * lat.torus_count(), 11);
  Eigen::VectorXcd psi = zak_transform(Psi, lat);
  CHECK(std::abs(psi.norm() - Psi.norm()) < 1e-12 * Psi.norm());
  CHECK((zak_inverse(psi, lat) - Psi).norm() < 1e-12 * Psi.norm());

  SUBCASE("delta sequence") {
    Eigen::VectorXcd D = Eigen::VectorXcd::Zero(Psi.size());
    const long y0 = 5;
    D(y0) = 1.0;
    Eigen::VectorXcd zd = zak_transform(D, lat);
    double dmax = 0.0;
    for (long kf = 0; kf < lat.bz_count(); ++kf) {
      const double k = (kf - lat.n_k / 2) * lat.estar(0) / lat.n_k;
      const double y = y0 * lat.a[0] / lat.n_y;
      for (long yf = 0; yf < lat.torus_count(); ++yf) {
        const cplx expect =
            yf == y0 ? std::exp(cplx(0, -k * y)) / std::sqrt(double(lat.n_k))
                     : cplx(0.0, 0.0);
        dmax = std::max(dmax, std::abs(zd(kf * lat.torus_count() + yf) - expect));
      }
    }
    CHECK(dmax < 1e-12);
  }

  SUBCASE("quasi-periodicity under dual shifts") {
    const Point k0{0.37, 0.0};
    const Point ks{0.37 - lat.estar(0), 0.0};
    Eigen::VectorXcd p0 = zak_at(Psi, lat, k0), p1 = zak_at(Psi, lat, ks);
    double qmax = 0.0;
    for (long yf = 0; yf < lat.torus_count(); ++yf) {
      const double y = yf * lat.a[0] / lat.n_y;
      qmax = std::max(
          qmax, std::abs(p1(yf) - std::exp(cplx(0, lat.estar(0) * y)) * p0(yf)));
    }
    CHECK(qmax < 1e-12 * p0.norm());
  }
}

TEST_CASE("fiber operators") {
  const Lattice lat = lat1();
  SUBCASE("free fiber is diagonal (k + 2 pi m / a)^2") {
    const Point k{0.3, 0.0};
    Eigen::MatrixXcd H = fiber_operator(lat, {}, nullptr, k, 3);
    for (int m = -3; m <= 3; ++m) {
      const double p = k[0] + 2.0 * kPi * m / lat.a[0];
      CHECK(std::abs(H(m + 3, m + 3) - cplx(p * p, 0.0)) < 1e-12);
    }
    CHECK((H - Eigen::MatrixXcd(H.diagonal().asDiagonal())).norm() < 1e-12);
  }
  SUBCASE("mathieu lowest band vs finite differences") {
    const std::vector<FourierCoeff> V = {{1, 0, cplx(1.0, 0.0)},
                                         {-1, 0, cplx(1.0, 0.0)}};
    Eigen::MatrixXcd H = fiber_operator(lat, V, nullptr, Point{0.0, 0.0}, 8);
    CHECK((H - H.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    CHECK(std::abs(es.eigenvalues()(0) - mathieu_fd_reference()) < 1e-6);
  }
}

TEST_CASE("group action order fits") {
  const Lattice lat = lat1();
  CHECK(tau_order_estimate(mode_shift_action(lat, 6, 0.0), lat).q ==
        doctest::Approx(0.0).epsilon(0.01));
  CHECK(tau_order_estimate(mode_shift_action(lat, 6, 1.0), lat).q ==
        doctest::Approx(1.0).epsilon(0.01));
  CHECK(tau_order_estimate(mode_shift_action(lat, 6, 2.0), lat).q ==
        doctest::Approx(2.0).epsilon(0.01));
  // exact power law <gamma*> Id fits with q = 1 and C = 1
  GroupAction lin;
  lin.d = 1;
  lin.fib = 2;
  lin.range = 3;
  lin.tau = [&lat](int c1, int) {
    const double g = c1 * lat.estar(0);
    return (std::sqrt(1.0 + g * g) * Eigen::MatrixXcd::Identity(2, 2)).eval();
  };
  TauOrderFit fl = tau_order_estimate(lin, lat);
  CHECK(fl.q == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fl.C == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("multiplication operators in the momentum representation") {
  // f = phi(r) Id with trivial actions quantizes to phi(i eps grad_k),
  // diagonalized exactly by the discrete Fourier basis.
  const Lattice lat = lat1();
  const double eps = 0.7;
  EquivariantSymbol f;
  f.lat = lat;
  f.M = 0;
  f.eps = eps;
  f.tau_in = trivial_action(1, 1, 2);
  f.tau_out = f.tau_in;
  const PhaseGrid g = PhaseGrid::make(1, lat.cover_n(), lat.N_c * kPi / lat.a[0], 1.0);
  const double per = eps * g.n * g.dxi;
  auto phip = [per](double r) {
    return std::cos(2.0 * kPi * r / per) + 0.3 * std::sin(4.0 * kPi * r / per);
  };
  f.sym = Symbol(g, 1, 1);
  for (long kf = 0; kf < g.npts(); ++kf)
    for (long rf = 0; rf < g.npts(); ++rf)
      f.sym.values[kf * g.npts() + rf] = phip(eps * g.xi_of(rf)[0]);
  const long n = g.npts();
  Eigen::MatrixXcd W(n, n);
  for (long j = 0; j < n; ++j)
    for (long s = 0; s < n; ++s)
      W(j, s) = std::exp(cplx(0, g.xi_of(s)[0] * g.x_of(j)[0])) / std::sqrt(double(n));
  Eigen::VectorXcd dia(n);
  for (long s = 0; s < n; ++s) dia(s) = phip(-eps * g.xi_of(s)[0]);
  const Eigen::MatrixXcd oracle = W * dia.asDiagonal() * W.adjoint();
  OperatorMatrix M = row_quantize(half_shift(f.sym, +1, -1), -1);
  CHECK((M.M - oracle).norm() / oracle.norm() < 1e-12);
}

TEST_CASE("bloch symbols and equivariant quantization") {
  const Lattice lat = lat1();
  const MagneticData mag = MagneticData::zero_field(1, 1.0, 0.0);
  const std::vector<FourierCoeff> V = {{1, 0, cplx(0.6, 0.0)},
                                       {-1, 0, cplx(0.6, 0.0)}};
  auto phi = [](Point r) { return std::exp(-r[0] * r[0]); };
  EquivariantSymbol h = bloch_symbol(lat, V, phi, 4, 1.0);

  CHECK(equivariance_defect(h) < 1e-10);
  CHECK(growth_order_fit(h) == doctest::Approx(2.0).epsilon(0.1));

  EquivariantSymbol idf = h;
  idf.sym = Symbol::identity(h.sym.grid, h.sym.n_out);
  OperatorMatrix I = equivariant_quantize(idf, mag);
  CHECK((I.M - Eigen::MatrixXcd::Identity(I.M.rows(), I.M.cols())).norm() < 1e-10);

  OperatorMatrix Oh = equivariant_quantize(h, mag);
  CHECK((Oh.M - Oh.M.adjoint()).norm() / Oh.M.norm() < 1e-12);

  EquivariantSymbol hh = equivariant_product(h, h, mag);
  OperatorMatrix Ohh = equivariant_quantize(hh, mag);
  CHECK((Oh.M * Oh.M - Ohh.M).norm() / Ohh.M.norm() < 1e-6);
  CHECK(equivariance_defect(hh, 1, 1) < 1e-6);
  CHECK(equivariant_product_check(h, h, mag) < 1e-3);

  SUBCASE("magnetic cover representations are out of scope") {
    const MagneticData bad = MagneticData::zero_field(1, 1.0, 0.5);
    CHECK_THROWS_AS(equivariant_quantize(h, bad), capability_error);
  }
  SUBCASE("resolvent") {
    const double a7[2] = {1.0, 1.0};
    const Lattice lat7 = Lattice::make(1, a7, 8, 48, 7);
    EquivariantSymbol h7 = bloch_symbol(lat7, V, phi, 4, 1.0);
    EquivariantSymbol R = equivariant_resolvent(h7, cplx(0.5, 2.0), mag);
    OperatorMatrix OR = equivariant_quantize(R, mag);
    OperatorMatrix O7 = equivariant_quantize(h7, mag);
    Eigen::MatrixXcd shifted =
        O7.M - cplx(0.5, 2.0) * Eigen::MatrixXcd::Identity(O7.M.rows(), O7.M.cols());
    // Op(R) inverts Op(h) - z up to the cover-compression accuracy
    CHECK((shifted * OR.M -
           Eigen::MatrixXcd::Identity(OR.M.rows(), OR.M.cols()))
              .norm() < 1e-4);
  }
}

TEST_CASE("cell unitaries") {
  const Lattice lat = lat1();
  GroupAction act;
  act.d = 1;
  act.fib = 3;
  act.range = 3;
  act.tau = [](int c1, int) {
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(3, 3);
    for (int m = 0; m < 3; ++m) T(m, m) = std::exp(cplx(0, 0.4 * c1 * (m + 1)));
    return T;
  };
  Eigen::VectorXcd psi = random_vec(long(lat.cover_n()) * act.fib, 5);
  const int gs[2] = {1, 0}, gt[2] = {0, 0}, g0[2] = {0, 0};
  Eigen::VectorXcd u = cell_unitary(psi, lat, act, gs, gt);
  CHECK(std::abs(u.norm() - psi.norm()) < 1e-12 * psi.norm());
  Eigen::VectorXcd back = cell_unitary(u, lat, act, gt, gs);
  CHECK((back - psi).norm() < 1e-12 * psi.norm());
  CHECK((cell_unitary(psi, lat, act, g0, g0) - psi).norm() == 0.0);
}
