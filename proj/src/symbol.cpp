#include "magweyl/symbol.hpp"

#include <cmath>

namespace magweyl {

Symbol::Symbol(const PhaseGrid& g, int nout, int nin) : grid(g), n_out(nout), n_in(nin) {
  if (nout < 1 || nin < 1) throw input_error("Symbol: fiber dims must be >= 1");
  values.assign(size_t(node_count()) * fiber_size(), cplx(0.0));
}

Symbol Symbol::identity(const PhaseGrid& g, int fib) {
  Symbol f(g, fib, fib);
  const long np = g.npts();
  for (long xf = 0; xf < np; ++xf)
    for (long kf = 0; kf < np; ++kf) f.fiber(xf, kf).setIdentity();
  return f;
}

Symbol Symbol::scalar(const PhaseGrid& g, const std::function<cplx(Point, Point)>& fn) {
  Symbol f(g, 1, 1);
  const long np = g.npts();
  for (long xf = 0; xf < np; ++xf) {
    Point X = g.X_of(xf);
    for (long kf = 0; kf < np; ++kf)
      f.values[xf * np + kf] = fn(X, g.xi_of(kf));
  }
  return f;
}

Symbol Symbol::matrix(const PhaseGrid& g, int nout, int nin,
                      const std::function<void(Point, Point, FiberMap)>& fn) {
  Symbol f(g, nout, nin);
  const long np = g.npts();
  for (long xf = 0; xf < np; ++xf) {
    Point X = g.X_of(xf);
    for (long kf = 0; kf < np; ++kf) fn(X, g.xi_of(kf), f.fiber(xf, kf));
  }
  return f;
}

Symbol Symbol::random_band_limited(const PhaseGrid& g, int fib, std::uint64_t seed,
                                   int max_mode, int env_order) {
  // Few low trigonometric modes in (x, xi) under the periodic envelope
  // cos^{2M}(pi t / (2 half)) per axis.  The envelope is a degree-M trig
  // polynomial, so the symbol is exactly band-limited to env_order +
  // max_mode harmonics per axis, and it vanishes to order 2M at the box
  // seam; both properties keep wrap-around artifacts of non-periodic
  // coordinate multipliers at the (pi/n)^{2M} level.
  if (env_order + max_mode >= g.n / 2)
    throw input_error("random_band_limited: band exceeds the grid Nyquist");
  SplitMix64 rng(seed);
  struct Mode {
    double ax[2], axi[2], phase;
    cplx amp[9 * 9];  // up to fib = 9
  };
  std::vector<Mode> modes(4);
  const double x_half = g.eps * g.x_extent;  // symbol position half-width
  const double kx = 2.0 * kPi / (2.0 * x_half);
  const double kxi = 2.0 * kPi / (g.n * g.dxi);
  for (auto& m : modes) {
    for (int a = 0; a < 2; ++a) {
      m.ax[a] = kx * (1 + int(rng.next() % max_mode));
      m.axi[a] = kxi * (1 + int(rng.next() % max_mode));
    }
    m.phase = 2.0 * kPi * rng.uniform();
    for (int e = 0; e < fib * fib; ++e) m.amp[e] = cplx(rng.sym(), rng.sym());
  }
  const double xi_half = (g.n / 2) * g.dxi;
  Symbol f(g, fib, fib);
  const long np = g.npts();
  for (long xf = 0; xf < np; ++xf) {
    Point x = g.X_of(xf);
    for (long kf = 0; kf < np; ++kf) {
      Point xi = g.xi_of(kf);
      double env = 1.0;
      for (int a = 0; a < g.d; ++a)
        env *= std::pow(std::cos(0.5 * kPi * x[a] / x_half), 2 * env_order) *
               std::pow(std::cos(0.5 * kPi * xi[a] / xi_half), 2 * env_order);
      auto blk = f.fiber(xf, kf);
      for (const auto& m : modes) {
        double arg = m.phase;
        for (int a = 0; a < g.d; ++a) arg += m.ax[a] * x[a] + m.axi[a] * xi[a];
        const double c = std::cos(arg);
        for (int r = 0; r < fib; ++r)
          for (int cI = 0; cI < fib; ++cI)
            blk(r, cI) += env * c * m.amp[r * fib + cI];
      }
    }
  }
  return f;
}

Symbol Symbol::adjoint() const {
  Symbol out(grid, n_in, n_out);
  const long np = grid.npts();
  for (long xf = 0; xf < np; ++xf)
    for (long kf = 0; kf < np; ++kf)
      out.fiber(xf, kf) = fiber(xf, kf).adjoint();
  return out;
}

Symbol& Symbol::operator+=(const Symbol& o) {
  if (values.size() != o.values.size()) throw input_error("Symbol +=: shape mismatch");
  for (size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

Symbol& Symbol::operator-=(const Symbol& o) {
  if (values.size() != o.values.size()) throw input_error("Symbol -=: shape mismatch");
  for (size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}

Symbol& Symbol::operator*=(cplx s) {
  for (auto& v : values) v *= s;
  return *this;
}

double Symbol::sup_opnorm() const {
  double best = 0.0;
  const long np = grid.npts();
  for (long xf = 0; xf < np; ++xf)
    for (long kf = 0; kf < np; ++kf) {
      auto blk = fiber(xf, kf);
      double nrm;
      if (n_out == 1 && n_in == 1) {
        nrm = std::abs(blk(0, 0));
      } else {
        nrm = blk.operatorNorm();
      }
      if (nrm > best) best = nrm;
    }
  return best;
}

double Symbol::max_abs() const {
  double best = 0.0;
  for (const auto& v : values) best = std::max(best, std::abs(v));
  return best;
}

bool Symbol::finite() const {
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
Symbol operator*(cplx s, Symbol a) { return a *= s; }

Symbol pointwise_product(const Symbol& f, const Symbol& g) {
  if (!f.composable_with(g)) throw input_error("pointwise_product: fiber mismatch");
  if (!f.grid.same_as(g.grid)) throw input_error("pointwise_product: grid mismatch");
  Symbol out(f.grid, f.n_out, g.n_in);
  const long np = f.grid.npts();
  for (long xf = 0; xf < np; ++xf)
    for (long kf = 0; kf < np; ++kf)
      out.fiber(xf, kf) = f.fiber(xf, kf) * g.fiber(xf, kf);
  return out;
}

double symbol_distance(const Symbol& a, const Symbol& b, bool relative) {
  Symbol diff = a;
  diff -= b;
  double num = diff.sup_opnorm();
  if (!relative) return num;
  double den = b.sup_opnorm();
  if (den < 1e-300) den = a.sup_opnorm();
  if (den < 1e-300) return 0.0;
  return num / den;
}

Symbol FormalSeries::evaluate(double eps_value, int max_order) const {
  if (terms.empty()) throw input_error("FormalSeries: no terms");
  const int N = max_order < 0 ? int(terms.size()) - 1
                              : std::min<int>(max_order, int(terms.size()) - 1);
  Symbol out = terms[0];
  double p = 1.0;
  for (int n = 1; n <= N; ++n) {
    p *= eps_value;
    Symbol t = terms[n];
    t *= cplx(p);
    out += t;
  }
  return out;
}

}  // namespace magweyl
