#include "magweyl/moyal.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "magweyl/parallel.hpp"
#include "detail.hpp"

namespace magweyl {

using detail::centered_fft_axis;
using detail::centered_fft_sym_axes;
using detail::fft_sym_axes;
using detail::ipow;
using detail::signed_freq;

Symbol symplectic_fourier(const Symbol& f) {
  const PhaseGrid& g = f.grid;
  const long np = g.npts();
  const long fs = f.fiber_size();
  Symbol tmp = f;
  centered_fft_sym_axes(tmp, false, +1);  // position block pairs with +sigma
  centered_fft_sym_axes(tmp, true, -1);
  // The transformed position block addresses the output momentum slot
  // and vice versa: swap the two blocks and normalize.
  Symbol out(g, f.n_out, f.n_in);
  const double nrm = 1.0 / double(np);
  for (long xf = 0; xf < np; ++xf)
    for (long kf = 0; kf < np; ++kf) {
      const cplx* src = tmp.values.data() + (kf * np + xf) * fs;
      cplx* dst = out.values.data() + (xf * np + kf) * fs;
      for (long t = 0; t < fs; ++t) dst[t] = src[t] * nrm;
    }
  return out;
}

Symbol spectral_derivative(const Symbol& f, bool xi_axis, int axis) {
  if (axis < 0 || axis >= f.grid.d) throw input_error("spectral_derivative: bad axis");
  const PhaseGrid& g = f.grid;
  const long np = g.npts();
  const long fs = f.fiber_size();
  const long pre = (xi_axis ? np : 1) * ipow(g.n, axis);
  const long post = ipow(g.n, g.d - 1 - axis) * (xi_axis ? fs : np * fs);
  const double dual = xi_axis ? 2.0 * kPi / (g.n * g.dxi) : 2.0 * kPi / (g.n * g.dX());
  Symbol out = f;
  fft_axis(out.values.data(), pre, g.n, post, -1);
  for (long p = 0; p < pre; ++p)
    for (long j = 0; j < g.n; ++j) {
      const int s = signed_freq(int(j), g.n);
      const cplx fac = (s == -g.n / 2) ? cplx(0.0, 0.0) : kI * (dual * s);
      cplx* blk = out.values.data() + (p * g.n + j) * post;
      for (long t = 0; t < post; ++t) blk[t] *= fac;
    }
  fft_axis(out.values.data(), pre, g.n, post, +1);
  const double nrm = 1.0 / g.n;
  for (auto& z : out.values) z *= nrm;
  return out;
}

Symbol weyl_product_exact(const Symbol& f, const Symbol& g, const MagneticData& mag) {
  if (!f.grid.same_as(g.grid)) throw input_error("weyl_product_exact: grid mismatch");
  if (!f.composable_with(g)) throw input_error("weyl_product_exact: fiber mismatch");
  const OperatorMatrix Mf = op_quantize(f, mag);
  const OperatorMatrix Mg = op_quantize(g, mag);
  OperatorMatrix P;
  P.grid = f.grid;
  P.n_out = f.n_out;
  P.n_in = g.n_in;
  P.M = Mf.M * Mg.M;
  return wigner_matrix(P, mag);
}

Symbol poisson_bracket_magnetic(const Symbol& f, const Symbol& g,
                                const MagneticData& mag) {
  if (!f.grid.same_as(g.grid)) throw input_error("poisson_bracket: grid mismatch");
  if (!f.composable_with(g)) throw input_error("poisson_bracket: fiber mismatch");
  const PhaseGrid& gr = f.grid;
  std::vector<Symbol> dxf(gr.d), dxif(gr.d), dxg(gr.d), dxig(gr.d);
  for (int a = 0; a < gr.d; ++a) {
    dxf[a] = spectral_derivative(f, false, a);
    dxif[a] = spectral_derivative(f, true, a);
    dxg[a] = spectral_derivative(g, false, a);
    dxig[a] = spectral_derivative(g, true, a);
  }
  Symbol out(gr, f.n_out, g.n_in);
  for (int a = 0; a < gr.d; ++a) {
    out += pointwise_product(dxif[a], dxg[a]);
    out -= pointwise_product(dxf[a], dxig[a]);
  }
  if (mag.lambda != 0.0 && (mag.kind == FieldKind::landau || mag.kind == FieldKind::sampled)) {
    const long np = gr.npts();
    for (int j = 0; j < gr.d; ++j)
      for (int k = 0; k < gr.d; ++k) {
        if (j == k) continue;
        Symbol term = pointwise_product(dxif[j], dxig[k]);
        for (long xf = 0; xf < np; ++xf) {
          const cplx w = mag.lambda * mag.B(gr.X_of(xf), j, k);
          cplx* blk = term.values.data() + xf * np * term.fiber_size();
          for (long t = 0; t < np * term.fiber_size(); ++t) blk[t] *= w;
        }
        out += term;
      }
  }
  return out;
}

FormalSeries weyl_product_expansion(const Symbol& f, const Symbol& g,
                                    const MagneticData& mag, int order) {
  if (order < 0 || order > 1)
    throw capability_error("weyl_product_expansion: only orders 0 and 1 are available");
  FormalSeries s;
  s.eps = mag.eps;
  s.terms.push_back(pointwise_product(f, g));
  if (order >= 1) {
    Symbol t1 = poisson_bracket_magnetic(f, g, mag);
    t1 *= cplx(0.0, -0.5);
    s.terms.push_back(std::move(t1));
  }
  return s;
}

namespace {

Symbol coordinate_symbol(const PhaseGrid& g, int fib, bool momentum, int axis) {
  return Symbol::matrix(g, fib, fib, [momentum, axis, fib](Point X, Point xi, FiberMap m) {
    m.setZero();
    const double v = momentum ? xi[axis] : X[axis];
    for (int r = 0; r < fib; ++r) m(r, r) = v;
  });
}

}  // namespace

Symbol derivation(const Symbol& f, DerivationAxis kind, int axis,
                  const MagneticData& mag, DerivationRoute route) {
  if (axis < 0 || axis >= f.grid.d) throw input_error("derivation: bad axis");
  const double eps = mag.eps;
  if (route == DerivationRoute::exact) {
    const bool mom = (kind == DerivationAxis::momentum);
    const Symbol cl = coordinate_symbol(f.grid, f.n_out, mom, axis);
    const Symbol cr = coordinate_symbol(f.grid, f.n_in, mom, axis);
    return weyl_product_exact(cl, f, mag) - weyl_product_exact(f, cr, mag);
  }
  if (kind == DerivationAxis::position) {
    Symbol out = spectral_derivative(f, true, axis);
    out *= cplx(0.0, eps);
    return out;
  }
  Symbol out = spectral_derivative(f, false, axis);
  out *= cplx(0.0, -eps);
  if (mag.lambda != 0.0 && (mag.kind == FieldKind::landau || mag.kind == FieldKind::sampled)) {
    const PhaseGrid& g = f.grid;
    const long np = g.npts();
    for (int k = 0; k < g.d; ++k) {
      if (k == axis) continue;
      Symbol term = spectral_derivative(f, true, k);
      for (long xf = 0; xf < np; ++xf) {
        const cplx w = cplx(0.0, -eps * mag.lambda) * mag.B(g.X_of(xf), axis, k);
        cplx* blk = term.values.data() + xf * np * term.fiber_size();
        for (long t = 0; t < np * term.fiber_size(); ++t) blk[t] *= w;
      }
      out += term;
    }
  }
  return out;
}

Symbol iterated_derivation(const Symbol& f, const std::array<int, 2>& a,
                           const std::array<int, 2>& alpha, const MagneticData& mag,
                           DerivationRoute route) {
  Symbol cur = f;
  for (int axis = 0; axis < 2; ++axis)
    for (int k = 0; k < a[axis]; ++k)
      cur = derivation(cur, DerivationAxis::position, axis, mag, route);
  for (int axis = 0; axis < 2; ++axis)
    for (int k = 0; k < alpha[axis]; ++k)
      cur = derivation(cur, DerivationAxis::momentum, axis, mag, route);
  return cur;
}

// ---- integral product route -------------------------------------------

Symbol weyl_product_integral(const Symbol& f, const Symbol& g, const MagneticData& mag) {
  if (!f.grid.same_as(g.grid)) throw input_error("weyl_product_integral: grid mismatch");
  if (!f.composable_with(g)) throw input_error("weyl_product_integral: fiber mismatch");
  if (mag.kind == FieldKind::sampled)
    throw capability_error(
        "weyl_product_integral: only zero or constant magnetic fields supported");
  const PhaseGrid& gr = f.grid;
  const int n = gr.n, d = gr.d, c = n / 2;
  const long np = gr.npts();
  const long fsg = g.fiber_size();
  const int no = f.n_out, nm = f.n_in, ni = g.n_in;
  const long fso = long(no) * ni;

  // Row-attached mixed representation: the quantized matrix of a symbol
  // reduces to M[i, j] = F[i, (j - i + c) mod n] where F is the centered
  // momentum transform of the half-shifted symbol.  The operator product
  // then becomes the exactly circular twisted convolution
  //   H[i, s] = sum_p F[i, p] G[(i + p - c) mod n, (s - p + c) mod n] flux,
  // with flux the magnetic phase through the node triangle
  // <x_i, x_k, x_j>, k = i + (p - c), j = i + (s - c).
  Symbol F = half_shift(f, +1), G = half_shift(g, +1);
  centered_fft_sym_axes(F, true, -1);
  centered_fft_sym_axes(G, true, -1);
  const double nrm0 = 1.0 / double(np);
  for (auto& z : F.values) z *= nrm0;
  for (auto& z : G.values) z *= nrm0;
  // Plain position FFT of G, so the circular row shift by p - c becomes a
  // per-axis integer phase ramp.
  fft_sym_axes(G, false, -1);

  // Per-axis shift ramp: tw[u][sx] = e^{+i 2 pi sx (u - c) / n}.
  std::vector<cplx> tw(size_t(n) * n);
  for (int u = 0; u < n; ++u)
    for (int sx = 0; sx < n; ++sx)
      tw[size_t(u) * n + sx] = std::exp(kI * (2.0 * kPi * sx * (u - c) / n));

  const bool has_flux = (d == 2 && mag.kind == FieldKind::landau && mag.lambda != 0.0);
  // Constant-field triangle flux through <x_i, x_k, x_j> scaled by eps:
  // e^{+i lambda eps B0 dx^2 (U1 S2 - U2 S1) / 2} with the integer node
  // offsets U = k - i, S = j - i; tabulated over the wedge range.
  const long wmax = 2L * (n - 1) * (n - 1);
  std::vector<cplx> fluxtab;
  if (has_flux) {
    const double alpha = mag.lambda * mag.eps * mag.B0 * gr.dx * gr.dx * 0.5;
    fluxtab.resize(2 * wmax + 1);
    for (long w = -wmax; w <= wmax; ++w)
      fluxtab[w + wmax] = std::exp(kI * (alpha * double(w)));
  }

  long nthreads = std::max<long>(1, std::min<long>(thread_count(), np));
  // Each worker carries a private accumulator of the full output size.
  while (nthreads > 1 && nthreads * np * np * fso * 16 > (3L << 30)) --nthreads;
  std::vector<std::vector<cplx>> partial(nthreads);
  std::vector<std::thread> pool;
  for (long tch = 0; tch < nthreads; ++tch) {
    pool.emplace_back([&, tch]() {
      const long p0 = np * tch / nthreads, p1 = np * (tch + 1) / nthreads;
      auto& acc = partial[tch];
      acc.assign(size_t(np) * np * fso, cplx(0.0));
      std::vector<cplx> Gp(size_t(np) * np * fsg);
      for (long p = p0; p < p1; ++p) {
        int pidx[2];
        gr.unflatten(p, pidx);
        // Gp[i, q] = G[(i + p - c) mod n, q] via the phase ramp + inverse FFT.
        for (long sxf = 0; sxf < np; ++sxf) {
          int sxi[2];
          gr.unflatten(sxf, sxi);
          cplx w = tw[size_t(pidx[0]) * n + sxi[0]];
          if (d == 2) w *= tw[size_t(pidx[1]) * n + sxi[1]];
          const cplx* src = G.values.data() + sxf * np * fsg;
          cplx* dst = Gp.data() + sxf * np * fsg;
          for (long t = 0; t < np * fsg; ++t) dst[t] = src[t] * w;
        }
        for (int a = 0; a < d; ++a)
          fft_axis(Gp.data(), ipow(n, a), n, ipow(n, d - 1 - a) * np * fsg, +1);
        const double nrm = 1.0 / double(np);
        for (auto& z : Gp) z *= nrm;
        for (long xf = 0; xf < np; ++xf) {
          int iidx[2], U[2] = {0, 0};
          gr.unflatten(xf, iidx);
          for (int a = 0; a < d; ++a)
            U[a] = (iidx[a] + pidx[a] - c + n) % n - iidx[a];
          const cplx* Fi = F.values.data() + (xf * np + p) * F.fiber_size();
          for (long q = 0; q < np; ++q) {
            int qidx[2], sidx[2];
            gr.unflatten(q, qidx);
            for (int a = 0; a < d; ++a) sidx[a] = (pidx[a] + qidx[a] - c + n) % n;
            const long s = gr.flatten(sidx);
            cplx flux(1.0, 0.0);
            if (has_flux) {
              const int S1 = (iidx[0] + sidx[0] - c + n) % n - iidx[0];
              const int S2 = (iidx[1] + sidx[1] - c + n) % n - iidx[1];
              flux = fluxtab[long(U[0]) * S2 - long(U[1]) * S1 + wmax];
            }
            ConstFiberMap Af(Fi, no, nm);
            ConstFiberMap Bg(Gp.data() + (xf * np + q) * fsg, nm, ni);
            FiberMap O(acc.data() + (xf * np + s) * fso, no, ni);
            O.noalias() += flux * (Af * Bg);
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  Symbol out(gr, no, ni);
  for (long tch = 0; tch < nthreads; ++tch)
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += partial[tch][i];
  // Momentum-frequency lattice back to the grid, then undo the half shift.
  centered_fft_sym_axes(out, true, +1);
  return half_shift(out, -1);
}

// ---- Gabor frame diagnostics ------------------------------------------

std::function<double(Point)> gabor_window(int d) {
  auto chi0 = [](double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
  };
  return [chi0, d](Point t) {
    double prod = 1.0;
    for (int a = 0; a < d; ++a) {
      const double v0 = chi0(t[a]);
      if (v0 == 0.0) return 0.0;
      double ssq = 0.0;
      for (int m = -3; m <= 3; ++m) {
        const double v = chi0(t[a] - m);
        ssq += v * v;
      }
      prod *= v0 / std::sqrt(ssq);
    }
    return prod;
  };
}

FiberMatrix gabor_coefficients(const OperatorMatrix& F,
                               const std::function<double(Point)>& chi, Point gamma,
                               Point gammap, Point k, Point kp,
                               const MagneticData& mag) {
  const PhaseGrid& g = F.grid;
  const long np = g.npts();
  const double pref = std::pow(2.0 * kPi, 0.5 * g.d);
  auto frame_vec = [&](Point gam, Point freq) {
    Eigen::VectorXcd v(np);
    for (long i = 0; i < np; ++i) {
      const Point x = g.x_of(i);
      double dot = 0.0;
      for (int a = 0; a < g.d; ++a) dot += freq[a] * (x[a] - gam[a]);
      double phase = dot;
      if (mag.lambda != 0.0)
        phase -= (mag.lambda / mag.eps) *
                 line_integral_A(mag, mag.eps * x, mag.eps * gam);
      v[i] = pref * chi(x - gam) * std::exp(kI * phase);
    }
    return v;
  };
  const Eigen::VectorXcd G = frame_vec(gamma, k);
  const Eigen::VectorXcd Gp = frame_vec(gammap, kp);
  FiberMatrix C(F.n_out, F.n_in);
  for (int col = 0; col < F.n_in; ++col) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(np * F.n_in);
    for (long j = 0; j < np; ++j) v[j * F.n_in + col] = G[j];
    const Eigen::VectorXcd w = F.M * v;
    for (int r = 0; r < F.n_out; ++r) {
      cplx acc(0.0, 0.0);
      for (long i = 0; i < np; ++i) acc += std::conj(Gp[i]) * w[i * F.n_out + r];
      C(r, col) = acc * g.pos_weight();
    }
  }
  return C;
}

}  // namespace magweyl
