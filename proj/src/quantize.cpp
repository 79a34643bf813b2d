#include "magweyl/quantize.hpp"

#include <cmath>

#include "magweyl/fft.hpp"
#include "magweyl/parallel.hpp"
#include "detail.hpp"

namespace magweyl {

using detail::fft_sym_axes;
using detail::ipow;
using detail::signed_freq;

Symbol half_shift(const Symbol& f, int direction, int freq_sign) {
  if (direction != 1 && direction != -1) throw input_error("half_shift: direction");
  Symbol out = f;
  fft_sym_axes(out, false, -1);
  fft_sym_axes(out, true, -1);
  const PhaseGrid& g = f.grid;
  const long np = g.npts();
  const long fs = f.fiber_size();
  const double unit = double(direction) * double(freq_sign) * kPi / g.n;
  parallel_for(0, np, [&](long qf) {
    int qi[2];
    g.unflatten(qf, qi);
    for (long pf = 0; pf < np; ++pf) {
      int pi[2];
      g.unflatten(pf, pi);
      double e = 0.0;
      for (int a = 0; a < g.d; ++a)
        e += double(signed_freq(qi[a], g.n)) * double(signed_freq(pi[a], g.n));
      const cplx ph = std::exp(kI * (unit * e));
      cplx* blk = out.values.data() + (qf * np + pf) * fs;
      for (long t = 0; t < fs; ++t) blk[t] *= ph;
    }
  });
  fft_sym_axes(out, false, +1);
  fft_sym_axes(out, true, +1);
  const double nrm = 1.0 / double(ipow(g.n, 2 * g.d));
  for (auto& z : out.values) z *= nrm;
  return out;
}

OperatorMatrix row_quantize(const Symbol& gsym, int freq_sign) {
  const PhaseGrid& g = gsym.grid;
  const long np = g.npts();
  const long fs = gsym.fiber_size();
  const int no = gsym.n_out, ni = gsym.n_in;
  OperatorMatrix out;
  out.grid = g;
  out.n_out = no;
  out.n_in = ni;
  out.M.resize(np * no, np * ni);
  const double scale = 1.0 / double(np);
  parallel_for(0, np, [&](long i) {
    std::vector<cplx> row(gsym.values.begin() + i * np * fs,
                          gsym.values.begin() + (i + 1) * np * fs);
    for (int a = 0; a < g.d; ++a)
      fft_axis(row.data(), ipow(g.n, a), g.n, ipow(g.n, g.d - 1 - a) * fs, freq_sign);
    int ii[2];
    g.unflatten(i, ii);
    for (long m = 0; m < np; ++m) {
      int mi[2];
      g.unflatten(m, mi);
      const double sgn = ((mi[0] + mi[1]) % 2 != 0) ? -scale : scale;
      cplx* blk = row.data() + m * fs;
      for (long t = 0; t < fs; ++t) blk[t] *= sgn;
    }
    for (long j = 0; j < np; ++j) {
      int ji[2], mi[2];
      g.unflatten(j, ji);
      for (int a = 0; a < g.d; ++a) mi[a] = ((ii[a] - ji[a]) % g.n + g.n) % g.n;
      const long m = g.flatten(mi);
      out.M.block(i * no, j * ni, no, ni) = ConstFiberMap(row.data() + m * fs, no, ni);
    }
  });
  return out;
}

Symbol row_unquantize(const OperatorMatrix& M, int freq_sign) {
  const PhaseGrid& g = M.grid;
  const long np = g.npts();
  const int no = M.n_out, ni = M.n_in;
  const long fs = long(no) * ni;
  Symbol out(g, no, ni);
  parallel_for(0, np, [&](long i) {
    std::vector<cplx> row(np * fs);
    int ii[2];
    g.unflatten(i, ii);
    for (long m = 0; m < np; ++m) {
      int mi[2], ji[2];
      g.unflatten(m, mi);
      for (int a = 0; a < g.d; ++a) ji[a] = ((ii[a] - mi[a]) % g.n + g.n) % g.n;
      const long j = g.flatten(ji);
      const double sgn = ((mi[0] + mi[1]) % 2 != 0) ? -1.0 : 1.0;
      FiberMap(row.data() + m * fs, no, ni) = sgn * M.M.block(i * no, j * ni, no, ni);
    }
    for (int a = 0; a < g.d; ++a)
      fft_axis(row.data(), ipow(g.n, a), g.n, ipow(g.n, g.d - 1 - a) * fs, -freq_sign);
    std::copy(row.begin(), row.end(), out.values.begin() + i * np * fs);
  });
  return out;
}

void apply_magnetic_phase(OperatorMatrix& M, const MagneticData& mag, bool strip) {
  if (mag.lambda == 0.0) return;
  if (mag.kind == FieldKind::zero && !mag.gauge_theta) return;
  const PhaseGrid& g = M.grid;
  const long np = g.npts();
  const double pref = (strip ? 1.0 : -1.0) * mag.lambda / mag.eps;
  // Quadrature-backed fields dominate quantization cost; memoize the
  // pairwise line integrals per (field, grid) pair.
  const double* memo = nullptr;
  if (mag.kind == FieldKind::sampled && mag.cache) {
    std::lock_guard<std::mutex> lock(mag.cache->mu);
    LineIntegralCache& lc = *mag.cache;
    const bool hit = lc.valid && lc.d == g.d && lc.n == g.n &&
                     lc.x_extent == g.x_extent && lc.eps == g.eps;
    if (!hit) {
      lc.vals.assign(size_t(np) * np, 0.0);
      parallel_for(0, np, [&](long i) {
        const Point xi = mag.eps * g.x_of(i);
        for (long j = 0; j < np; ++j)
          lc.vals[size_t(i) * np + j] =
              line_integral_A(mag, xi, mag.eps * g.x_of(j));
      });
      lc.d = g.d;
      lc.n = g.n;
      lc.x_extent = g.x_extent;
      lc.eps = g.eps;
      lc.valid = true;
    }
    memo = lc.vals.data();
  }
  parallel_for(0, np, [&](long i) {
    const Point xi = mag.eps * g.x_of(i);
    for (long j = 0; j < np; ++j) {
      const double integral = memo ? memo[size_t(i) * np + j]
                                   : line_integral_A(mag, xi, mag.eps * g.x_of(j));
      M.M.block(i * M.n_out, j * M.n_in, M.n_out, M.n_in) *=
          std::exp(kI * (pref * integral));
    }
  });
}

OperatorMatrix op_quantize(const Symbol& f, const MagneticData& mag) {
  if (f.grid.d != mag.d) throw input_error("op_quantize: dimension mismatch");
  if (f.grid.eps != mag.eps)
    throw input_error("op_quantize: grid eps and magnetic eps disagree");
  OperatorMatrix M = row_quantize(half_shift(f, +1));
  apply_magnetic_phase(M, mag, false);
  return M;
}

OperatorKernel kernel_map(const Symbol& f, const MagneticData& mag) {
  OperatorMatrix M = op_quantize(f, mag);
  OperatorKernel K;
  K.grid = M.grid;
  K.n_out = M.n_out;
  K.n_in = M.n_in;
  K.K = M.M / M.grid.pos_weight();
  return K;
}

OperatorMatrix assemble(const OperatorKernel& K) {
  OperatorMatrix M;
  M.grid = K.grid;
  M.n_out = K.n_out;
  M.n_in = K.n_in;
  M.M = K.K * K.grid.pos_weight();
  return M;
}

Symbol wigner_matrix(const OperatorMatrix& M, const MagneticData& mag) {
  if (M.grid.d != mag.d) throw input_error("wigner: dimension mismatch");
  if (M.grid.eps != mag.eps)
    throw input_error("wigner: grid eps and magnetic eps disagree");
  OperatorMatrix C = M;
  apply_magnetic_phase(C, mag, true);
  return half_shift(row_unquantize(C), -1);
}

Symbol wigner(const OperatorKernel& K, const MagneticData& mag) {
  return wigner_matrix(assemble(K), mag);
}

double operator_norm(const Eigen::MatrixXcd& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  SplitMix64 rng(0x5eedbeefcafe01ull);
  Eigen::VectorXcd v(M.cols());
  for (long i = 0; i < M.cols(); ++i) v[i] = cplx(rng.sym(), rng.sym());
  double nv = v.norm();
  if (nv == 0.0) return 0.0;
  v /= nv;
  double s2 = 0.0;
  for (int it = 0; it < 500; ++it) {
    const Eigen::VectorXcd w = M * v;
    const double s2_new = w.squaredNorm();
    const Eigen::VectorXcd z = M.adjoint() * w;
    const double zn = z.norm();
    if (zn == 0.0) return 0.0;
    v = z / zn;
    if (std::abs(s2_new - s2) <= 1e-10 * std::max(1.0, s2_new)) {
      s2 = s2_new;
      break;
    }
    s2 = s2_new;
  }
  return std::sqrt(s2);
}

Eigen::VectorXcd weyl_system_apply(Point y, Point eta, const Eigen::VectorXcd& psi,
                                   const PhaseGrid& g, int fib,
                                   const MagneticData& mag) {
  const long np = g.npts();
  if (psi.size() != np * fib) throw input_error("weyl_system_apply: state size");
  std::vector<cplx> v(psi.data(), psi.data() + psi.size());
  // Translate Psi(. + y) via the Fourier interpolant (exact for shifts
  // aligned with the grid; Nyquist symmetrized to a cosine).
  for (int a = 0; a < g.d; ++a)
    fft_axis(v.data(), ipow(g.n, a), g.n, ipow(g.n, g.d - 1 - a) * fib, -1);
  const double omega_nyq = 0.5 * g.n * g.dxi;
  for (long qf = 0; qf < np; ++qf) {
    int qi[2];
    g.unflatten(qf, qi);
    cplx ph(1.0, 0.0);
    for (int a = 0; a < g.d; ++a) {
      const int s = signed_freq(qi[a], g.n);
      if (s == -g.n / 2)
        ph *= cplx(std::cos(omega_nyq * y[a]), 0.0);
      else
        ph *= std::exp(kI * (double(s) * g.dxi * y[a]));
    }
    for (int r = 0; r < fib; ++r) v[qf * fib + r] *= ph;
  }
  for (int a = 0; a < g.d; ++a)
    fft_axis(v.data(), ipow(g.n, a), g.n, ipow(g.n, g.d - 1 - a) * fib, +1);
  const double nrm = 1.0 / double(np);
  for (auto& z : v) z *= nrm;
  // Pointwise modulation and magnetic phase.
  for (long i = 0; i < np; ++i) {
    const Point x = g.x_of(i);
    double dot = 0.0;
    for (int a = 0; a < g.d; ++a) dot += eta[a] * (x[a] + 0.5 * y[a]);
    double phi = -mag.eps * dot;
    if (mag.lambda != 0.0)
      phi -= (mag.lambda / mag.eps) *
             line_integral_A(mag, mag.eps * x, mag.eps * (x + y));
    const cplx ph = std::exp(kI * phi);
    for (int r = 0; r < fib; ++r) v[i * fib + r] *= ph;
  }
  return Eigen::Map<Eigen::VectorXcd>(v.data(), long(v.size()));
}

Eigen::VectorXcd gaussian_state(const PhaseGrid& g, int fib, double width) {
  const long np = g.npts();
  Eigen::VectorXcd v(np * fib);
  for (long i = 0; i < np; ++i) {
    const Point x = g.x_of(i);
    double r2 = 0.0;
    for (int a = 0; a < g.d; ++a) r2 += x[a] * x[a];
    const double amp = std::exp(-r2 / (2.0 * width * width));
    for (int r = 0; r < fib; ++r) v[i * fib + r] = amp;
  }
  return v / v.norm();
}

double gauge_covariance_defect(const Symbol& f, const MagneticData& mag,
                               const std::function<double(Point)>& theta) {
  const OperatorMatrix M0 = op_quantize(f, mag);
  const OperatorMatrix M1 = op_quantize(f, mag.with_gauge(theta));
  const PhaseGrid& g = f.grid;
  const long np = g.npts();
  Eigen::VectorXcd u(np);
  for (long i = 0; i < np; ++i)
    u[i] = std::exp(kI * (mag.lambda * theta(mag.eps * g.x_of(i))));
  Eigen::MatrixXcd C = M1.M;
  const int no = M0.n_out, ni = M0.n_in;
  for (long i = 0; i < np; ++i)
    for (long j = 0; j < np; ++j)
      C.block(i * no, j * ni, no, ni) -=
          (u[i] * std::conj(u[j])) * M0.M.block(i * no, j * ni, no, ni);
  const double base = operator_norm(M0.M);
  return operator_norm(C) / (base > 0.0 ? base : 1.0);
}

double adjoint_check(const Symbol& f, const MagneticData& mag) {
  const OperatorMatrix M = op_quantize(f, mag);
  const OperatorMatrix Ma = op_quantize(f.adjoint(), mag);
  const double base = operator_norm(M.M);
  return operator_norm(Eigen::MatrixXcd(M.M.adjoint() - Ma.M)) /
         (base > 0.0 ? base : 1.0);
}

CommutationReport commutation_check(const PhaseGrid& g, const MagneticData& mag) {
  if (g.d != mag.d) throw input_error("commutation_check: dimension mismatch");
  const long np = g.npts();
  const Eigen::VectorXcd psi = gaussian_state(g, 1, g.x_extent / 8.0);
  auto mult_q = [&](int j, const Eigen::VectorXcd& p) {
    Eigen::VectorXcd out(np);
    for (long i = 0; i < np; ++i) out[i] = mag.eps * g.x_of(i)[j] * p[i];
    return out;
  };
  std::vector<Eigen::MatrixXcd> P(g.d);
  for (int j = 0; j < g.d; ++j) {
    const int jj = j;
    P[j] = op_quantize(Symbol::scalar(g, [jj](Point, Point xi) { return cplx(xi[jj], 0.0); }),
                       mag)
               .M;
  }
  CommutationReport rep;
  for (int j = 0; j < g.d; ++j)
    for (int l = 0; l < g.d; ++l) {
      const Eigen::VectorXcd qq =
          kI * (mult_q(j, mult_q(l, psi)) - mult_q(l, mult_q(j, psi)));
      rep.qq = std::max(rep.qq, qq.norm());
      Eigen::VectorXcd pq = kI * (P[j] * mult_q(l, psi) - mult_q(l, P[j] * psi));
      if (j == l) pq -= mag.eps * psi;
      rep.pq = std::max(rep.pq, pq.norm());
    }
  if (g.d == 2) {
    Eigen::VectorXcd pp = kI * (P[0] * (P[1] * psi) - P[1] * (P[0] * psi));
    for (long i = 0; i < np; ++i)
      pp[i] -= mag.eps * mag.lambda * mag.B(mag.eps * g.x_of(i), 0, 1) * psi[i];
    rep.pp = pp.norm();
  }
  return rep;
}

}  // namespace magweyl
