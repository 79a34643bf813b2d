#include "magweyl/equivariant.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace magweyl {
namespace {

// Sign relating the symbol's r-slot to the grid frequency nodes:
// r = kRSign * eps * xi, fixed so that quantization realizes
// r -> i eps grad_k in the freq_sign = -1 calculus.
constexpr double kRSign = +1.0;

PhaseGrid cover_grid(const Lattice& lat) {
  if (lat.d == 2 && lat.a[0] != lat.a[1])
    throw capability_error("equivariant: d = 2 requires a square lattice");
  return PhaseGrid::make(lat.d, lat.cover_n(), lat.N_c * kPi / lat.a[0], 1.0);
}

OperatorMatrix cover_quantize(const EquivariantSymbol& f) {
  return row_quantize(half_shift(f.sym, +1, -1), -1);
}

Symbol cover_unquantize(const OperatorMatrix& M) {
  return half_shift(row_unquantize(M, -1), -1, -1);
}

void check_zero_field(const MagneticData& mag) {
  if (mag.kind != FieldKind::zero || mag.lambda != 0.0)
    throw capability_error(
        "equivariant: only A = 0 is supported in the momentum representation");
}

// Extension matrix E: L^2(BZ, fiber) -> cover, psi(k - gamma*) = tau(gamma*) psi(k),
// and the central-cell restriction offset.
long central_offset(const Lattice& lat) { return long(lat.n_k) * (lat.N_c - 1) / 2; }

Eigen::MatrixXcd extension_matrix(const EquivariantSymbol& f) {
  const Lattice& lat = f.lat;
  const int n = lat.cover_n();
  const long cover_nodes = lat.d == 2 ? long(n) * n : n;
  const long bz_nodes = lat.bz_count();
  const int fib = f.sym.n_in;
  Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(cover_nodes * fib, bz_nodes * fib);
  const long c0 = central_offset(lat);
  const int tmax = (lat.N_c - 1) / 2;
  for (int t1 = -tmax; t1 <= tmax; ++t1) {
    const int t2lo = lat.d == 2 ? -tmax : 0, t2hi = lat.d == 2 ? tmax : 0;
    for (int t2 = t2lo; t2 <= t2hi; ++t2) {
      // psi(k_bz + t e*) = tau(-t e*) psi(k_bz)
      const Eigen::MatrixXcd T = f.tau_in.tau(-t1, -t2);
      for (long b = 0; b < bz_nodes; ++b) {
        int bi[2] = {int(b), 0};
        if (lat.d == 2) {
          bi[0] = int(b / lat.n_k);
          bi[1] = int(b % lat.n_k);
        }
        const long i1 = c0 + bi[0] + long(t1) * lat.n_k;
        const long i2 = c0 + bi[1] + long(t2) * lat.n_k;
        const long node = lat.d == 2 ? i1 * n + i2 : i1;
        E.block(node * fib, b * fib, fib, fib) = T;
      }
    }
  }
  return E;
}

}  // namespace

EquivariantSymbol bloch_symbol(const Lattice& lat, const std::vector<FourierCoeff>& V,
                               const std::function<double(Point)>& phi, int M,
                               double eps) {
  EquivariantSymbol f;
  f.lat = lat;
  f.M = M;
  f.eps = eps;
  f.tau_in = mode_shift_action(lat, M);
  f.tau_out = f.tau_in;
  const PhaseGrid g = cover_grid(lat);
  const int fib = f.tau_in.fib;
  f.sym = Symbol(g, fib, fib);
  const long np = g.npts();
  for (long kf = 0; kf < np; ++kf) {
    const Point k = g.x_of(kf);
    const Eigen::MatrixXcd H = fiber_operator(lat, V, nullptr, k, M);
    for (long rf = 0; rf < np; ++rf) {
      const Point xi = g.xi_of(rf);
      Point r;
      for (int a = 0; a < lat.d; ++a) r[a] = kRSign * eps * xi[a];
      const double p = phi ? phi(r) : 0.0;
      auto fb = f.sym.fiber(kf, rf);
      for (int i = 0; i < fib; ++i)
        for (int j = 0; j < fib; ++j) fb(i, j) = H(i, j) + (i == j ? cplx(p, 0.0) : cplx(0.0, 0.0));
    }
  }
  return f;
}

double equivariance_defect(const EquivariantSymbol& f, int margin, int edge_cells) {
  const Lattice& lat = f.lat;
  const PhaseGrid& g = f.sym.grid;
  const int n = lat.cover_n();
  const int w = 2 * f.M + 1;
  const int lo = edge_cells * lat.n_k, hi = n - edge_cells * lat.n_k;
  const double scale = std::max(f.sym.sup_opnorm(), 1e-300);
  const int cmax = std::min({f.tau_in.range, f.tau_out.range, lat.N_c - 1});
  double worst = 0.0;
  for (int c1 = -cmax; c1 <= cmax; ++c1) {
    const int c2lo = lat.d == 2 ? -cmax : 0, c2hi = lat.d == 2 ? cmax : 0;
    for (int c2 = c2lo; c2 <= c2hi; ++c2) {
      if (c1 == 0 && c2 == 0) continue;
      const int cc[2] = {c1, c2};
      const Eigen::MatrixXcd Tp = f.tau_out.tau(c1, c2);
      const Eigen::MatrixXcd Tinv = f.tau_in.tau(c1, c2).completeOrthogonalDecomposition().pseudoInverse();
      // interior mode selector |m_j| <= M - |c_j| - margin
      std::vector<int> keep;
      for (int i = 0; i < f.sym.n_out; ++i) {
        int m[2] = {0, 0};
        if (lat.d == 2) {
          m[0] = i / w - f.M;
          m[1] = i % w - f.M;
        } else {
          m[0] = i - f.M;
        }
        bool ok = true;
        for (int jx = 0; jx < lat.d; ++jx)
          ok = ok && std::abs(m[jx]) <= f.M - std::abs(cc[jx]) - margin;
        if (ok) keep.push_back(i);
      }
      if (keep.empty()) continue;
      for (long kf = 0; kf < g.npts(); ++kf) {
        int ki[2];
        g.unflatten(kf, ki);
        int si[2] = {ki[0] - c1 * lat.n_k, ki[1] - (lat.d == 2 ? c2 * lat.n_k : 0)};
        bool in = true;
        for (int jx = 0; jx < lat.d; ++jx)
          in = in && si[jx] >= lo && si[jx] < hi && ki[jx] >= lo && ki[jx] < hi;
        if (!in) continue;
        const long sf = g.flatten(si);
        for (long rf = 0; rf < g.npts(); ++rf) {
          const Eigen::MatrixXcd lhs = f.sym.fiber(sf, rf);
          const Eigen::MatrixXcd rhs = Tp * f.sym.fiber(kf, rf) * Tinv;
          double dmax = 0.0;
          for (int a : keep)
            for (int b : keep) dmax = std::max(dmax, std::abs(lhs(a, b) - rhs(a, b)));
          worst = std::max(worst, dmax);
        }
      }
    }
  }
  return worst / scale;
}

double growth_order_fit(const EquivariantSymbol& f, double domain_weight) {
  const Lattice& lat = f.lat;
  const PhaseGrid& g = f.sym.grid;
  const int w = 2 * f.M + 1;
  const int fib = f.sym.n_in;
  // Inverse H^w mode weight on the domain side.
  Eigen::VectorXd winv(fib);
  for (int i = 0; i < fib; ++i) {
    int m[2] = {0, 0};
    if (lat.d == 2) {
      m[0] = i / w - f.M;
      m[1] = i % w - f.M;
    } else {
      m[0] = i - f.M;
    }
    double wt = 1.0;
    for (int jx = 0; jx < lat.d; ++jx)
      wt *= std::pow(jbracket(2.0 * kPi * m[jx] / lat.a[jx]), domain_weight);
    winv(i) = 1.0 / wt;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long cnt = 0;
  for (long kf = 0; kf < g.npts(); ++kf) {
    const Point k = g.x_of(kf);
    double k2 = 0.0;
    bool inner = true;
    for (int jx = 0; jx < lat.d; ++jx) {
      k2 += k[jx] * k[jx];
      inner = inner && std::abs(k[jx]) < kPi / lat.a[jx];
    }
    if (inner) continue;  // skip the central cell (log<k> ~ 0 there)
    double val = 0.0;
    for (long rf = 0; rf < g.npts(); ++rf) {
      const Eigen::MatrixXcd m = f.sym.fiber(kf, rf) * winv.asDiagonal();
      val = std::max(val, m.norm());
    }
    if (!(val > 0.0)) continue;
    const double x = 0.5 * std::log(1.0 + k2);
    const double y = std::log(val);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 2) return 0.0;
  const double det = cnt * sxx - sx * sx;
  if (std::abs(det) < 1e-14) return 0.0;
  return (cnt * sxy - sx * sy) / det;
}

OperatorMatrix equivariant_quantize(const EquivariantSymbol& f, const MagneticData& mag) {
  check_zero_field(mag);
  if (mag.eps != f.eps)
    throw input_error("equivariant_quantize: eps mismatch between symbol and field data");
  const OperatorMatrix cover = cover_quantize(f);
  const Eigen::MatrixXcd E = extension_matrix(f);
  const Lattice& lat = f.lat;
  const int fib = f.sym.n_in;
  const long c0 = central_offset(lat);
  const long bz_nodes = lat.bz_count();
  // Restriction: pick the central-cell node rows.
  Eigen::MatrixXcd ME = cover.M * E;
  OperatorMatrix out;
  out.grid = PhaseGrid::make(lat.d, lat.n_k, kPi / lat.a[0], f.eps);
  out.n_out = out.n_in = fib;
  out.M.resize(bz_nodes * fib, bz_nodes * fib);
  const int n = lat.cover_n();
  for (long b = 0; b < bz_nodes; ++b) {
    int bi[2] = {int(b), 0};
    if (lat.d == 2) {
      bi[0] = int(b / lat.n_k);
      bi[1] = int(b % lat.n_k);
    }
    const long i1 = c0 + bi[0], i2 = c0 + bi[1];
    const long node = lat.d == 2 ? i1 * n + i2 : i1;
    out.M.block(b * fib, 0, fib, out.M.cols()) = ME.block(node * fib, 0, fib, ME.cols());
  }
  return out;
}

EquivariantSymbol equivariant_product(const EquivariantSymbol& f,
                                      const EquivariantSymbol& g,
                                      const MagneticData& mag) {
  check_zero_field(mag);
  if (f.sym.n_in != g.sym.n_out)
    throw input_error("equivariant_product: fiber dimensions do not chain");
  if (!f.sym.grid.same_as(g.sym.grid))
    throw input_error("equivariant_product: cover grids differ");
  OperatorMatrix Mf = cover_quantize(f), Mg = cover_quantize(g);
  OperatorMatrix P;
  P.grid = Mf.grid;
  P.n_out = f.sym.n_out;
  P.n_in = g.sym.n_in;
  P.M = Mf.M * Mg.M;
  EquivariantSymbol out;
  out.lat = f.lat;
  out.M = f.M;
  out.eps = f.eps;
  out.sym = cover_unquantize(P);
  out.tau_in = g.tau_in;
  out.tau_out = f.tau_out;
  return out;
}

double equivariant_product_check(const EquivariantSymbol& f, const EquivariantSymbol& g,
                                 const MagneticData& mag) {
  return equivariance_defect(equivariant_product(f, g, mag));
}

EquivariantSymbol equivariant_resolvent(const EquivariantSymbol& h, cplx z,
                                        const MagneticData& mag) {
  check_zero_field(mag);
  if (h.sym.n_out != h.sym.n_in)
    throw input_error("equivariant_resolvent: fiber must be square");
  OperatorMatrix M = cover_quantize(h);
  M.M -= z * Eigen::MatrixXcd::Identity(M.M.rows(), M.M.cols());
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M.M);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) < 1e-8 * sv(0))
    throw singular_error("equivariant_resolvent: z is numerically on the cover spectrum");
  M.M = M.M.partialPivLu().inverse().eval();
  EquivariantSymbol out;
  out.lat = h.lat;
  out.M = h.M;
  out.eps = h.eps;
  out.sym = cover_unquantize(M);
  out.tau_in = h.tau_in;
  out.tau_out = h.tau_out;
  return out;
}

}  // namespace magweyl
