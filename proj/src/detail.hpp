#pragma once

#include "magweyl/fft.hpp"
#include "magweyl/symbol.hpp"

namespace magweyl::detail {

inline long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// FFT index -> signed frequency integer in [-n/2, n/2); the Nyquist mode
// sits at -n/2 (kept one-sided so all mode factors stay modulus one).
inline int signed_freq(int idx, int n) { return idx < n / 2 ? idx : idx - n; }

// In-place DFT over all position (xi_axes = false) or momentum axes of a
// symbol-layout array.  Unnormalized in both directions.
inline void fft_sym_axes(Symbol& f, bool xi_axes, int sign) {
  const PhaseGrid& g = f.grid;
  const long np = g.npts();
  const long fs = f.fiber_size();
  for (int a = 0; a < g.d; ++a) {
    const long pre = (xi_axes ? np : 1) * ipow(g.n, a);
    const long post = ipow(g.n, g.d - 1 - a) * (xi_axes ? fs : np * fs);
    fft_axis(f.values.data(), pre, g.n, post, sign);
  }
}

// Centered DFT along one axis: b_l = sum_j e^{sign i (2 pi/n)(l - n/2)(j - n/2)} a_j,
// realized by parity twiddles around the plain FFT.  Unnormalized.
inline void centered_fft_axis(cplx* data, long pre, long n, long post, int sign) {
  const double s0 = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
  for (long p = 0; p < pre; ++p)
    for (long j = 1; j < n; j += 2) {
      cplx* blk = data + (p * n + j) * post;
      for (long t = 0; t < post; ++t) blk[t] = -blk[t];
    }
  fft_axis(data, pre, n, post, sign);
  for (long p = 0; p < pre; ++p)
    for (long l = 0; l < n; ++l) {
      const double fac = (l % 2 != 0) ? -s0 : s0;
      cplx* blk = data + (p * n + l) * post;
      for (long t = 0; t < post; ++t) blk[t] *= fac;
    }
}

// Centered DFT over all position or momentum axes of a symbol.
inline void centered_fft_sym_axes(Symbol& f, bool xi_axes, int sign) {
  const PhaseGrid& g = f.grid;
  const long np = g.npts();
  const long fs = f.fiber_size();
  for (int a = 0; a < g.d; ++a) {
    const long pre = (xi_axes ? np : 1) * ipow(g.n, a);
    const long post = ipow(g.n, g.d - 1 - a) * (xi_axes ? fs : np * fs);
    centered_fft_axis(f.values.data(), pre, g.n, post, sign);
  }
}

}  // namespace magweyl::detail
