#pragma once

#include <vector>

#include "magweyl/common.hpp"

namespace magweyl {

/// Discretization of phase space T*R^d as a periodic box, carrying the
/// semiclassical parameter eps of the scaling Q = eps x^, P = -i grad.
///
/// States live on x_i in [-L, L) with n nodes per axis, dx = 2L/n, and
/// the momentum axis carries the FFT-dual nodes with spacing
/// dxi = pi/L, so dx * dxi * n = 2 pi.  A symbol's position slot is
/// sampled at the scaled points X_i = eps x_i, so one phase-space cell
/// has volume (2 pi eps)^d and quantization stays an exact bijection
/// between symbol samples and operator matrices for every eps.  Nodes
/// are centered: x_i = (i - n/2) dx, xi_l = (l - n/2) dxi, with the
/// single Nyquist node at index 0.
struct PhaseGrid {
  int d = 1;              // spatial dimension, 1 or 2
  int n = 0;              // nodes per axis, even
  double x_extent = 0.0;  // half-width L of the state position box
  double eps = 1.0;       // semiclassical parameter
  double dx = 0.0;
  double dxi = 0.0;
  std::vector<double> x_nodes;   // length n
  std::vector<double> xi_nodes;  // length n

  static PhaseGrid make(int d, int n, double x_extent, double eps = 1.0);

  /// Number of grid nodes per d-dimensional axis block, n^d.
  long npts() const;

  /// Quadrature weight for phase-space integrals, (dx*dxi)^d.
  double phase_weight() const;
  /// Quadrature weight for position integrals, dx^d.
  double pos_weight() const;

  /// Decompose a flat index in [0, n^d) into per-axis indices.
  void unflatten(long flat, int idx[2]) const;
  long flatten(const int idx[2]) const;

  /// State-space position of the flat node index (d components used).
  Point x_of(long flat) const;
  /// Symbol position slot X_i = eps x_i of the flat node index.
  Point X_of(long flat) const;
  /// Momentum of the flat node index.
  Point xi_of(long flat) const;
  /// Spacing of the sampled symbol position slot, eps * dx.
  double dX() const { return eps * dx; }

  bool same_as(const PhaseGrid& o) const {
    return d == o.d && n == o.n && x_extent == o.x_extent && eps == o.eps;
  }
};

}  // namespace magweyl
