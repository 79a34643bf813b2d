#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "magweyl/grid.hpp"

namespace magweyl {

using FiberMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FiberMap = Eigen::Map<FiberMatrix>;
using ConstFiberMap = Eigen::Map<const FiberMatrix>;

/// Matrix-valued function on the phase-space grid.  The value at node
/// (X_i, xi_l) = (eps x_i, xi_l) is an n_out x n_in complex matrix;
/// storage is row-major with the x multi-index outermost, then the xi
/// multi-index, then row, col.  Constructor callbacks receive the
/// scaled position X = eps x.
struct Symbol {
  PhaseGrid grid;
  int n_out = 1;
  int n_in = 1;
  std::vector<cplx> values;

  Symbol() = default;
  Symbol(const PhaseGrid& g, int nout, int nin);

  static Symbol identity(const PhaseGrid& g, int fib);
  static Symbol scalar(const PhaseGrid& g,
                       const std::function<cplx(Point, Point)>& fn);
  static Symbol matrix(const PhaseGrid& g, int nout, int nin,
                       const std::function<void(Point, Point, FiberMap)>& fn);
  /// Smooth random band-limited test symbol: low-frequency trigonometric
  /// modes under the periodic envelope cos^{2 env_order}(pi t / (2 half))
  /// per axis, reproducible from seed.  Exactly band-limited to
  /// env_order + max_mode harmonics per axis and vanishing to order
  /// 2 env_order at the box seam.
  static Symbol random_band_limited(const PhaseGrid& g, int fib,
                                    std::uint64_t seed, int max_mode = 3,
                                    int env_order = 6);

  long fiber_size() const { return long(n_out) * n_in; }
  long node_count() const { return grid.npts() * grid.npts(); }

  FiberMap fiber(long xf, long kf) {
    long off = (xf * grid.npts() + kf) * fiber_size();
    return FiberMap(values.data() + off, n_out, n_in);
  }
  ConstFiberMap fiber(long xf, long kf) const {
    long off = (xf * grid.npts() + kf) * fiber_size();
    return ConstFiberMap(values.data() + off, n_out, n_in);
  }

  /// f acts after g when fiber dimensions chain: f.n_in == g.n_out.
  bool composable_with(const Symbol& g) const { return n_in == g.n_out; }

  Symbol adjoint() const;  // pointwise fiber adjoint, f*
  Symbol& operator+=(const Symbol& o);
  Symbol& operator-=(const Symbol& o);
  Symbol& operator*=(cplx s);

  /// sup over nodes of the fiber operator (spectral) norm.
  double sup_opnorm() const;
  /// max over all stored entries of |value| (cheap bound).
  double max_abs() const;
  bool finite() const;
};

Symbol operator+(Symbol a, const Symbol& b);
Symbol operator-(Symbol a, const Symbol& b);
Symbol operator*(cplx s, Symbol a);

/// Pointwise fiber matrix product (f g)(X) = f(X) g(X).
Symbol pointwise_product(const Symbol& f, const Symbol& g);

/// sup-opnorm of (a - b); with relative=true divided by sup-opnorm of b
/// (or of a if b is numerically zero).
double symbol_distance(const Symbol& a, const Symbol& b, bool relative);

/// Finite list of expansion coefficients: index n holds the symbol
/// multiplying eps^n.
struct FormalSeries {
  std::vector<Symbol> terms;
  double eps = 1.0;

  /// Sum_{n <= N} eps^n terms[n]; N < 0 sums everything.
  Symbol evaluate(double eps_value, int max_order = -1) const;
};

}  // namespace magweyl
