#include "magweyl/grid.hpp"

#include <cmath>

namespace magweyl {

PhaseGrid PhaseGrid::make(int d, int n, double x_extent, double eps) {
  if (d != 1 && d != 2) throw input_error("PhaseGrid: d must be 1 or 2");
  if (n < 4 || n % 2 != 0) throw input_error("PhaseGrid: n must be even and >= 4");
  if (!(x_extent > 0.0)) throw input_error("PhaseGrid: x_extent must be positive");
  if (!(eps > 0.0)) throw input_error("PhaseGrid: eps must be positive");
  PhaseGrid g;
  g.d = d;
  g.n = n;
  g.x_extent = x_extent;
  g.eps = eps;
  g.dx = 2.0 * x_extent / n;
  g.dxi = kPi / x_extent;
  g.x_nodes.resize(n);
  g.xi_nodes.resize(n);
  for (int i = 0; i < n; ++i) {
    g.x_nodes[i] = (i - n / 2) * g.dx;
    g.xi_nodes[i] = (i - n / 2) * g.dxi;
  }
  return g;
}

long PhaseGrid::npts() const {
  long p = 1;
  for (int a = 0; a < d; ++a) p *= n;
  return p;
}

double PhaseGrid::phase_weight() const {
  double w = 1.0;
  for (int a = 0; a < d; ++a) w *= dx * dxi;
  return w;
}

double PhaseGrid::pos_weight() const {
  double w = 1.0;
  for (int a = 0; a < d; ++a) w *= dx;
  return w;
}

void PhaseGrid::unflatten(long flat, int idx[2]) const {
  idx[1] = 0;
  if (d == 1) {
    idx[0] = int(flat);
  } else {
    idx[0] = int(flat / n);  // axis 0 outermost
    idx[1] = int(flat % n);
  }
}

long PhaseGrid::flatten(const int idx[2]) const {
  return d == 1 ? idx[0] : long(idx[0]) * n + idx[1];
}

Point PhaseGrid::x_of(long flat) const {
  int idx[2];
  unflatten(flat, idx);
  Point p;
  for (int a = 0; a < d; ++a) p[a] = x_nodes[idx[a]];
  return p;
}

Point PhaseGrid::X_of(long flat) const { return eps * x_of(flat); }

Point PhaseGrid::xi_of(long flat) const {
  int idx[2];
  unflatten(flat, idx);
  Point p;
  for (int a = 0; a < d; ++a) p[a] = xi_nodes[idx[a]];
  return p;
}

}  // namespace magweyl
