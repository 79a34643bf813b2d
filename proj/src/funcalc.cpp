#include "magweyl/funcalc.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace magweyl {
namespace {

// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

// Smooth bump cutoff on (-1, 1), equal to 1 at 0, with its derivative.
double bump_tau(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}
double bump_tau_prime(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return bump_tau(s) * (-2.0 * s / (q * q));
}

// Spectral factorization of the assembled operator matrix.  Hermitian
// matrices get a unitary eigenbasis; otherwise a general complex
// eigendecomposition with an explicit inverse.
struct SpectralData {
  Eigen::VectorXcd lam;
  Eigen::MatrixXcd V, Vinv;
};

SpectralData decompose(const Eigen::MatrixXcd& M) {
  SpectralData s;
  const double scale = M.norm();
  if ((M - M.adjoint()).norm() <= 1e-12 * std::max(1.0, scale)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    s.lam = es.eigenvalues().cast<cplx>();
    s.V = es.eigenvectors();
    s.Vinv = s.V.adjoint();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
    if (es.info() != Eigen::Success)
      throw singular_error("funcalc: eigendecomposition failed");
    s.lam = es.eigenvalues();
    s.V = es.eigenvectors();
    s.Vinv = s.V.partialPivLu().inverse();
  }
  return s;
}

// Reassemble V diag(d) V^{-1} and pull the symbol back through the
// inverse quantization.
Symbol spectral_rebuild(const SpectralData& s, const Eigen::VectorXcd& dvals,
                        const PhaseGrid& grid, int fib, const MagneticData& mag) {
  OperatorMatrix OM;
  OM.grid = grid;
  OM.n_out = OM.n_in = fib;
  OM.M = s.V * dvals.asDiagonal() * s.Vinv;
  return wigner_matrix(OM, mag);
}

double condition_number(const Eigen::MatrixXcd& M) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

Symbol shift_diagonal(const Symbol& f, cplx z) {
  Symbol out = f;
  const long nodes = out.grid.npts() * out.grid.npts();
  const int fo = out.n_out;
  for (long t = 0; t < nodes; ++t)
    for (int r = 0; r < fo; ++r) out.values[(t * fo + r) * out.n_in + r] -= z;
  return out;
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0.0 ? std::real(std::conj(ab) * (p - a)) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace

Symbol moyal_inverse(const Symbol& f, const MagneticData& mag) {
  if (f.n_out != f.n_in) throw input_error("moyal_inverse: fiber must be square");
  OperatorMatrix OM = op_quantize(f, mag);
  const double cond = condition_number(OM.M);
  if (!(cond < 1e8))
    throw singular_error("moyal_inverse: condition number " + std::to_string(cond) +
                         " exceeds 1e8");
  OM.M = OM.M.partialPivLu().inverse().eval();
  return wigner_matrix(OM, mag);
}

Symbol moyal_resolvent(const Symbol& h, cplx z, const MagneticData& mag) {
  return moyal_inverse(shift_diagonal(h, z), mag);
}

WeightSymbol weight_symbol(const PhaseGrid& grid, double m, const MagneticData& mag) {
  WeightSymbol w;
  w.m = m;
  if (m == 0.0) {
    w.lambda_m = 0.0;  // Op(1) = Id exactly, no shift needed
    w.values = Symbol::identity(grid, 1);
    return w;
  }
  const double am = std::abs(m);
  Symbol base = Symbol::scalar(grid, [am, &grid](Point, Point xi) {
    double t = 1.0;
    for (int a = 0; a < grid.d; ++a) t += xi[a] * xi[a];
    return cplx(std::pow(t, 0.5 * am), 0.0);
  });
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op_quantize(base, mag).M,
                                                     Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues()(0);
  w.lambda_m = std::max(0.0, 1.0 - min_eig) + 0.1;
  Symbol shift = Symbol::identity(grid, 1);
  shift *= cplx(w.lambda_m, 0.0);
  w.values = base + shift;
  if (m < 0.0) w.values = moyal_inverse(w.values, mag);
  return w;
}

FormalSeries parametrix(const Symbol& f, const Symbol& g0, int N,
                        const MagneticData& mag, ParametrixSide side) {
  if (f.n_out != f.n_in || g0.n_out != g0.n_in || f.n_out != g0.n_out)
    throw input_error("parametrix: fibers must be square and matching");
  if (!f.grid.same_as(g0.grid)) throw input_error("parametrix: grid mismatch");
  if (N < 0) throw input_error("parametrix: negative degree");
  const double eps = mag.eps;
  const Symbol id = Symbol::identity(f.grid, f.n_out);

  Symbol defect = side == ParametrixSide::left ? weyl_product_exact(g0, f, mag)
                                               : weyl_product_exact(f, g0, mag);
  defect -= id;
  const double scale =
      std::max(1.0, f.sup_opnorm() * g0.sup_opnorm());
  if (defect.sup_opnorm() > 2.0 * eps * scale)
    throw input_error("parametrix: bad principal symbol (inversion defect is not O(eps))");

  Symbol r0 = defect;
  r0 *= cplx(1.0 / eps, 0.0);

  FormalSeries series;
  series.eps = eps;
  series.terms.reserve(N + 1);
  Symbol p = g0;  // r0^{# n} # g0  (or g0 # r0^{# n})
  series.terms.push_back(p);
  for (int n = 1; n <= N; ++n) {
    p = side == ParametrixSide::left ? weyl_product_exact(r0, p, mag)
                                     : weyl_product_exact(p, r0, mag);
    Symbol term = p;
    if (n % 2 == 1) term *= cplx(-1.0, 0.0);
    series.terms.push_back(std::move(term));
  }
  return series;
}

Symbol helffer_sjostrand(const Symbol& h, const SmoothFunction& phi, double u_lo,
                         double u_hi, int ext_order, const MagneticData& mag) {
  if (h.n_out != h.n_in) throw input_error("helffer_sjostrand: fiber must be square");
  if (!(u_hi > u_lo)) throw input_error("helffer_sjostrand: empty support interval");
  if (ext_order < 1) throw input_error("helffer_sjostrand: ext_order must be >= 1");

  const SpectralData sd = decompose(op_quantize(h, mag).M);
  double spec_scale = 1.0;
  for (long i = 0; i < sd.lam.size(); ++i)
    spec_scale = std::max(spec_scale, std::abs(sd.lam(i)));

  const int K = ext_order;
  const double v_max = u_hi - u_lo;

  const double skip_tol = 1e-8 * spec_scale;

  // Tensor Gauss-Legendre over the strip; the v integral is split at 0
  // where the resolvent is closest to the (near-real) spectrum.  The
  // node counts are doubled until the per-eigenvalue integrals settle.
  auto integrate = [&](int nu, int nv, double& skip_frac) {
    std::vector<double> gx, gw, hx, hw;
    gauss_legendre(nu, gx, gw);
    gauss_legendre(nv, hx, hw);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(sd.lam.size());
    long skipped = 0, total = 0;
    std::vector<double> dphi(K + 2);
    for (int iu = 0; iu < nu; ++iu) {
      const double u = 0.5 * (u_lo + u_hi) + 0.5 * (u_hi - u_lo) * gx[iu];
      const double wu = 0.5 * (u_hi - u_lo) * gw[iu];
      for (int k = 0; k <= K + 1; ++k) dphi[k] = phi(u, k);
      const double ju = jbracket(u);
      for (int half = 0; half < 2; ++half)
        for (int iv = 0; iv < nv; ++iv) {
          const double v = (half == 0 ? -1.0 : 1.0) * 0.5 * v_max * (hx[iv] + 1.0);
          const double wv = 0.5 * v_max * hw[iv];
          ++total;

          const double s = v / ju;
          const double tau = bump_tau(s);
          const double taup = bump_tau_prime(s);
          if (tau == 0.0 && taup == 0.0) continue;

          // Taylor sum S = sum_k phi^(k)(u) (iv)^k / k!  and the exact
          // d-bar residue tau * phi^(K+1)(u) (iv)^K / K!.
          cplx iv_pow(1.0, 0.0);
          cplx S(0.0, 0.0);
          double fact = 1.0;
          for (int k = 0; k <= K; ++k) {
            if (k > 0) {
              iv_pow *= cplx(0.0, v);
              fact *= k;
            }
            S += dphi[k] * iv_pow / fact;
          }
          const cplx dbar =
              0.5 * (taup * cplx(-u * v / (ju * ju * ju), 1.0 / ju) * S +
                     tau * dphi[K + 1] * iv_pow / fact);

          const cplx z(u, v);
          bool skip = false;
          for (long i = 0; i < sd.lam.size(); ++i)
            if (std::abs(sd.lam(i) - z) < skip_tol) {
              skip = true;
              break;
            }
          if (skip) {
            ++skipped;
            continue;
          }
          const cplx wz = (wu * wv / kPi) * dbar;
          for (long i = 0; i < sd.lam.size(); ++i) acc(i) += wz / (sd.lam(i) - z);
        }
    }
    skip_frac = double(skipped) / double(total);
    return acc;
  };

  int nu = 96, nv = 48;
  double skip_frac = 0.0;
  Eigen::VectorXcd prev = integrate(nu, nv, skip_frac);
  for (;;) {
    nu *= 2;
    nv *= 2;
    Eigen::VectorXcd cur = integrate(nu, nv, skip_frac);
    const double change = (cur - prev).lpNorm<Eigen::Infinity>();
    prev = std::move(cur);
    if (change < 1e-7 || nu >= 1536) break;
  }
  if (skip_frac > 0.1)
    throw singular_error("helffer_sjostrand: more than 10% of quadrature nodes "
                         "fell on the spectrum");
  return spectral_rebuild(sd, prev, h.grid, h.n_out, mag);
}

Symbol holomorphic_calculus(const Symbol& h, const std::function<cplx(cplx)>& phi,
                            const ContourSpec& contour, const MagneticData& mag) {
  if (h.n_out != h.n_in) throw input_error("holomorphic_calculus: fiber must be square");
  if (!(contour.re_hi > contour.re_lo) || !(contour.im_hi > contour.im_lo))
    throw input_error("holomorphic_calculus: degenerate contour rectangle");

  const SpectralData sd = decompose(op_quantize(h, mag).M);
  const cplx c0(contour.re_lo, contour.im_lo), c1(contour.re_hi, contour.im_lo);
  const cplx c2(contour.re_hi, contour.im_hi), c3(contour.re_lo, contour.im_hi);
  const cplx corners[5] = {c0, c1, c2, c3, c0};

  double spec_scale = 1.0, min_dist = std::numeric_limits<double>::infinity();
  for (long i = 0; i < sd.lam.size(); ++i) {
    spec_scale = std::max(spec_scale, std::abs(sd.lam(i)));
    for (int e = 0; e < 4; ++e)
      min_dist = std::min(min_dist,
                          point_segment_distance(sd.lam(i), corners[e], corners[e + 1]));
  }
  if (min_dist < 1e-8 * spec_scale)
    throw singular_error("holomorphic_calculus: contour passes through the spectrum");

  std::vector<double> gx, gw;
  gauss_legendre(10, gx, gw);
  // Composite 10-point Gauss-Legendre with m panels per edge; panels are
  // doubled until the integral settles.
  auto integrate = [&](int m) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(sd.lam.size());
    for (int e = 0; e < 4; ++e) {
      const cplx a = corners[e], b = corners[e + 1];
      const cplx dz = (b - a) / double(m);
      for (int p = 0; p < m; ++p) {
        const cplx mid = a + (p + 0.5) * dz;
        for (int j = 0; j < 10; ++j) {
          const cplx z = mid + 0.5 * gx[j] * dz;
          const cplx f = (kI / (2.0 * kPi)) * phi(z) * (0.5 * gw[j]) * dz;
          for (long i = 0; i < sd.lam.size(); ++i) acc(i) += f / (sd.lam(i) - z);
        }
      }
    }
    return acc;
  };

  int m = std::max(1, contour.points_per_edge / 10);
  Eigen::VectorXcd prev = integrate(m);
  for (;;) {
    m *= 2;
    Eigen::VectorXcd cur = integrate(m);
    const double change = (cur - prev).lpNorm<Eigen::Infinity>();
    prev = std::move(cur);
    if (change < 1e-8) break;
    if (m > (1 << 16))
      throw singular_error("holomorphic_calculus: contour quadrature did not converge");
  }
  return spectral_rebuild(sd, prev, h.grid, h.n_out, mag);
}

ProjectionResult spectral_projection(const Symbol& h, double band_lo, double band_hi,
                                     const MagneticData& mag, double gap) {
  if (!(band_hi >= band_lo)) throw input_error("spectral_projection: empty band");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op_quantize(h, mag).M,
                                                     Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  bool any_inside = false;
  for (long i = 0; i < ev.size(); ++i) {
    const double v = ev(i);
    if (v >= band_lo && v <= band_hi) {
      any_inside = true;
      continue;
    }
    const double dist = v < band_lo ? band_lo - v : v - band_hi;
    if (dist < gap)
      throw input_error("spectral_projection: band is not isolated by the requested gap");
  }
  if (!any_inside)
    throw input_error("spectral_projection: no spectrum inside the band");

  ContourSpec c;
  c.re_lo = band_lo - 0.5 * gap;
  c.re_hi = band_hi + 0.5 * gap;
  c.im_hi = 0.5 * (band_hi - band_lo + gap);
  c.im_lo = -c.im_hi;
  Symbol pi = holomorphic_calculus(h, [](cplx) { return cplx(1.0, 0.0); }, c, mag);

  ProjectionResult out;
  out.idempotency_defect =
      symbol_distance(weyl_product_exact(pi, pi, mag), pi, false);
  out.hermiticity_defect = symbol_distance(pi.adjoint(), pi, false);
  out.pi = std::move(pi);
  return out;
}

double beals_diagnostic(const Symbol& f, const MagneticData& mag,
                        const std::array<int, 2>& a, const std::array<int, 2>& alpha,
                        double m, double rho) {
  Symbol g = iterated_derivation(f, a, alpha, mag, DerivationRoute::exact);
  const double order = -m + (alpha[0] + alpha[1]) * rho;
  WeightSymbol w = weight_symbol(f.grid, order, mag);
  // Promote the scalar weight to the fiber dimension of f.
  Symbol wmat(f.grid, f.n_out, f.n_out);
  const long nodes = wmat.node_count();
  for (long t = 0; t < nodes; ++t) {
    const cplx v = w.values.values[t];
    for (int r = 0; r < f.n_out; ++r)
      wmat.values[(t * f.n_out + r) * f.n_out + r] = v;
  }
  Symbol s = weyl_product_exact(wmat, g, mag);
  return operator_norm(op_quantize(s, mag).M);
}

}  // namespace magweyl
