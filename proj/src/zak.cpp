#include "magweyl/equivariant.hpp"

#include <cmath>

namespace magweyl {
namespace {

long ipow_l(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void unflatten2(long flat, int n, int d, int idx[2]) {
  idx[1] = 0;
  if (d == 2) {
    idx[0] = int(flat / n);
    idx[1] = int(flat % n);
  } else {
    idx[0] = int(flat);
  }
}

}  // namespace

Lattice Lattice::make(int d, const double* a, int n_k, int n_y, int N_c) {
  if (d < 1 || d > 2) throw input_error("Lattice: d must be 1 or 2");
  if (n_k < 2 || n_k % 2 != 0) throw input_error("Lattice: n_k must be even, >= 2");
  if (n_y < 2) throw input_error("Lattice: n_y must be >= 2");
  if (N_c < 1 || N_c % 2 == 0) throw input_error("Lattice: N_c must be odd");
  Lattice lat;
  lat.d = d;
  for (int j = 0; j < d; ++j) {
    if (!(a[j] > 0.0)) throw input_error("Lattice: generators must be positive");
    lat.a[j] = a[j];
  }
  lat.n_k = n_k;
  lat.n_y = n_y;
  lat.N_c = N_c;
  return lat;
}

long Lattice::bz_count() const { return ipow_l(n_k, d); }
long Lattice::torus_count() const { return ipow_l(n_y, d); }
long Lattice::patch_count() const { return ipow_l(n_k, d); }

GroupAction trivial_action(int d, int fib, int range) {
  GroupAction a;
  a.d = d;
  a.fib = fib;
  a.range = range;
  a.tau = [fib](int, int) { return Eigen::MatrixXcd::Identity(fib, fib).eval(); };
  return a;
}

GroupAction mode_shift_action(const Lattice& lat, int M, double weight_exp) {
  GroupAction a;
  a.d = lat.d;
  const int w = 2 * M + 1;
  a.fib = int(ipow_l(w, lat.d));
  a.range = std::max(1, M);
  const Lattice l = lat;
  a.tau = [l, M, w, weight_exp](int c1, int c2) {
    const int fib = int(ipow_l(w, l.d));
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(fib, fib);
    const int cc[2] = {c1, c2};
    for (int i = 0; i < fib; ++i) {
      // multi-mode of row i: m_j in [-M, M]
      int m[2] = {0, 0};
      if (l.d == 2) {
        m[0] = i / w - M;
        m[1] = i % w - M;
      } else {
        m[0] = i - M;
      }
      // tau shifts modes by c: row m takes column m - c when in range.
      int src[2] = {m[0] - cc[0], l.d == 2 ? m[1] - cc[1] : 0};
      bool ok = true;
      for (int jx = 0; jx < l.d; ++jx) ok = ok && std::abs(src[jx]) <= M;
      if (!ok) continue;
      int col = l.d == 2 ? (src[0] + M) * w + (src[1] + M) : src[0] + M;
      double wt = 1.0;
      if (weight_exp != 0.0) {
        double num = 1.0, den = 1.0;
        for (int jx = 0; jx < l.d; ++jx) {
          num *= std::pow(jbracket(2.0 * kPi * m[jx] / l.a[jx]), weight_exp);
          den *= std::pow(jbracket(2.0 * kPi * src[jx] / l.a[jx]), weight_exp);
        }
        wt = num / den;
      }
      T(i, col) = wt;
    }
    return T;
  };
  return a;
}

TauOrderFit tau_order_estimate(const GroupAction& action, const Lattice& lat) {
  // Fit log||tau|| = log C + q log<gamma*> over the represented range.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long cnt = 0;
  const int r = action.range;
  for (int c1 = -r; c1 <= r; ++c1) {
    const int c2lo = action.d == 2 ? -r : 0, c2hi = action.d == 2 ? r : 0;
    for (int c2 = c2lo; c2 <= c2hi; ++c2) {
      if (c1 == 0 && c2 == 0) continue;
      double g2 = 0.0;
      const int cc[2] = {c1, c2};
      for (int jx = 0; jx < action.d; ++jx) {
        const double g = cc[jx] * lat.estar(jx);
        g2 += g * g;
      }
      const double x = std::log(std::sqrt(1.0 + g2));
      const double nrm = operator_norm(action.tau(c1, c2));
      if (!(nrm > 0.0)) continue;
      const double y = std::log(nrm);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++cnt;
    }
  }
  TauOrderFit fit;
  if (cnt < 2) return fit;
  const double det = cnt * sxx - sx * sx;
  if (std::abs(det) < 1e-14) {
    fit.q = 0.0;
    fit.C = std::exp(sy / cnt);
    return fit;
  }
  fit.q = (cnt * sxy - sx * sy) / det;
  fit.C = std::exp((sy * sxx - sx * sxy) / det);
  return fit;
}

// ---- Zak ----------------------------------------------------------------

Eigen::VectorXcd zak_transform(const Eigen::VectorXcd& Psi, const Lattice& lat) {
  const long np = lat.patch_count(), ny = lat.torus_count();
  if (Psi.size() != np * ny) throw input_error("zak_transform: sample count mismatch");
  const double norm = 1.0 / std::sqrt(double(np));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(lat.bz_count() * ny);
  for (long kf = 0; kf < lat.bz_count(); ++kf) {
    int ki[2];
    unflatten2(kf, lat.n_k, lat.d, ki);
    double k[2];
    for (int j = 0; j < lat.d; ++j)
      k[j] = (ki[j] - lat.n_k / 2) * lat.estar(j) / lat.n_k;
    for (long gf = 0; gf < np; ++gf) {
      int gi[2];
      unflatten2(gf, lat.n_k, lat.d, gi);
      double phase_g = 0.0;
      for (int j = 0; j < lat.d; ++j) phase_g += k[j] * gi[j] * lat.a[j];
      for (long yf = 0; yf < ny; ++yf) {
        int yi[2];
        unflatten2(yf, lat.n_y, lat.d, yi);
        double phase = phase_g;
        for (int j = 0; j < lat.d; ++j)
          phase += k[j] * yi[j] * lat.a[j] / lat.n_y;
        psi(kf * ny + yf) += norm * std::exp(cplx(0.0, -phase)) * Psi(gf * ny + yf);
      }
    }
  }
  return psi;
}

Eigen::VectorXcd zak_inverse(const Eigen::VectorXcd& psi, const Lattice& lat) {
  const long np = lat.patch_count(), ny = lat.torus_count();
  if (psi.size() != lat.bz_count() * ny) throw input_error("zak_inverse: sample count mismatch");
  const double norm = 1.0 / std::sqrt(double(np));
  Eigen::VectorXcd Psi = Eigen::VectorXcd::Zero(np * ny);
  for (long kf = 0; kf < lat.bz_count(); ++kf) {
    int ki[2];
    unflatten2(kf, lat.n_k, lat.d, ki);
    double k[2];
    for (int j = 0; j < lat.d; ++j)
      k[j] = (ki[j] - lat.n_k / 2) * lat.estar(j) / lat.n_k;
    for (long gf = 0; gf < np; ++gf) {
      int gi[2];
      unflatten2(gf, lat.n_k, lat.d, gi);
      double phase_g = 0.0;
      for (int j = 0; j < lat.d; ++j) phase_g += k[j] * gi[j] * lat.a[j];
      for (long yf = 0; yf < ny; ++yf) {
        int yi[2];
        unflatten2(yf, lat.n_y, lat.d, yi);
        double phase = phase_g;
        for (int j = 0; j < lat.d; ++j)
          phase += k[j] * yi[j] * lat.a[j] / lat.n_y;
        Psi(gf * ny + yf) += norm * std::exp(cplx(0.0, +phase)) * psi(kf * ny + yf);
      }
    }
  }
  return Psi;
}

Eigen::VectorXcd zak_at(const Eigen::VectorXcd& Psi, const Lattice& lat, Point k) {
  const long np = lat.patch_count(), ny = lat.torus_count();
  if (Psi.size() != np * ny) throw input_error("zak_at: sample count mismatch");
  const double norm = 1.0 / std::sqrt(double(np));
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ny);
  for (long gf = 0; gf < np; ++gf) {
    int gi[2];
    unflatten2(gf, lat.n_k, lat.d, gi);
    double phase_g = 0.0;
    for (int j = 0; j < lat.d; ++j) phase_g += k[j] * gi[j] * lat.a[j];
    for (long yf = 0; yf < ny; ++yf) {
      int yi[2];
      unflatten2(yf, lat.n_y, lat.d, yi);
      double phase = phase_g;
      for (int j = 0; j < lat.d; ++j) phase += k[j] * yi[j] * lat.a[j] / lat.n_y;
      out(yf) += norm * std::exp(cplx(0.0, -phase)) * Psi(gf * ny + yf);
    }
  }
  return out;
}

// ---- Bloch fiber --------------------------------------------------------

Eigen::MatrixXcd fiber_operator(const Lattice& lat, const std::vector<FourierCoeff>& V,
                                const std::vector<FourierCoeff>* A0, Point k, int M) {
  if (M < 0) throw input_error("fiber_operator: negative mode cutoff");
  const int w = 2 * M + 1;
  const int fib = int(ipow_l(w, lat.d));
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(fib, fib);

  auto mode_of = [&](int i, int m[2]) {
    if (lat.d == 2) {
      m[0] = i / w - M;
      m[1] = i % w - M;
    } else {
      m[0] = i - M;
      m[1] = 0;
    }
  };
  auto coeff_at = [&](const std::vector<FourierCoeff>& list, int d1, int d2) {
    cplx c(0.0, 0.0);
    for (const auto& fc : list)
      if (fc.m1 == d1 && (lat.d == 1 || fc.m2 == d2)) c += fc.c;
    return c;
  };

  for (int i = 0; i < fib; ++i) {
    int mi[2];
    mode_of(i, mi);
    double kin = 0.0;
    for (int jx = 0; jx < lat.d; ++jx) {
      const double p = k[jx] + 2.0 * kPi * mi[jx] / lat.a[jx];
      kin += p * p;
    }
    H(i, i) += kin;
    for (int j = 0; j < fib; ++j) {
      int mj[2];
      mode_of(j, mj);
      const int d1 = mi[0] - mj[0], d2 = mi[1] - mj[1];
      H(i, j) += coeff_at(V, d1, d2);
      if (A0) {
        // -(A0 . (p^ + k) + (p^ + k) . A0) + A0^2 in the mode basis.
        for (int jx = 0; jx < lat.d; ++jx) {
          const cplx a = coeff_at(A0[jx], d1, d2);
          const double pi_ = k[jx] + 2.0 * kPi * mi[jx] / lat.a[jx];
          const double pj_ = k[jx] + 2.0 * kPi * mj[jx] / lat.a[jx];
          H(i, j) -= a * (pi_ + pj_);
        }
        // A0^2 term: convolution of the component lists.
        for (int jx = 0; jx < lat.d; ++jx)
          for (const auto& f1 : A0[jx])
            for (const auto& f2 : A0[jx])
              if (f1.m1 + f2.m1 == d1 && (lat.d == 1 || f1.m2 + f2.m2 == d2))
                H(i, j) += f1.c * f2.c;
      }
    }
  }
  return H;
}

Eigen::VectorXcd cell_unitary(const Eigen::VectorXcd& psi, const Lattice& lat,
                              const GroupAction& tau, const int gamma_star[2],
                              const int gtilde_star[2]) {
  const int n = lat.cover_n();
  const long nodes = ipow_l(n, lat.d);
  const int fib = tau.fib;
  if (psi.size() != nodes * fib) throw input_error("cell_unitary: size mismatch");
  const int dc[2] = {gtilde_star[0] - gamma_star[0],
                     lat.d == 2 ? gtilde_star[1] - gamma_star[1] : 0};
  const Eigen::MatrixXcd Tinv = tau.tau(dc[0], dc[1]).partialPivLu().inverse();
  Eigen::VectorXcd out(nodes * fib);
  for (long t = 0; t < nodes; ++t) {
    int ki[2];
    unflatten2(t, n, lat.d, ki);
    // psi(k + gamma* - gtilde*): shift the node by -dc cells (n_k nodes each).
    int src[2] = {ki[0], ki[1]};
    for (int jx = 0; jx < lat.d; ++jx) {
      src[jx] = ((src[jx] - dc[jx] * lat.n_k) % n + n) % n;
    }
    const long sf = lat.d == 2 ? long(src[0]) * n + src[1] : src[0];
    out.segment(t * fib, fib) = Tinv * psi.segment(sf * fib, fib);
  }
  return out;
}

}  // namespace magweyl
