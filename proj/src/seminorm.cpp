#include "magweyl/seminorm.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace magweyl {
namespace {

// Shifted flat index along one axis of the n^d block, periodic wrap.
long shifted_flat(const PhaseGrid& g, long flat, int axis, int shift) {
  int idx[2];
  g.unflatten(flat, idx);
  idx[axis] = (idx[axis] + shift % g.n + g.n) % g.n;
  return g.flatten(idx);
}

double bracket_xi(const PhaseGrid& g, long kf) {
  Point xi = g.xi_of(kf);
  return g.d == 1 ? jbracket(xi[0]) : jbracket2(xi[0], xi[1]);
}

}  // namespace

Symbol fd_derivative(const Symbol& f, bool xi_axis, int axis) {
  if (axis < 0 || axis >= f.grid.d) throw input_error("fd_derivative: bad axis");
  const PhaseGrid& g = f.grid;
  const double h = xi_axis ? g.dxi : g.dX();
  const long np = g.npts();
  const long fs = f.fiber_size();
  Symbol out(g, f.n_out, f.n_in);
  // (-f_{+2} + 8 f_{+1} - 8 f_{-1} + f_{-2}) / (12 h), periodic wrap.
  for (long xf = 0; xf < np; ++xf) {
    for (long kf = 0; kf < np; ++kf) {
      long p1, p2, m1, m2, xo = xf, ko = kf;
      if (xi_axis) {
        p1 = shifted_flat(g, kf, axis, 1);
        p2 = shifted_flat(g, kf, axis, 2);
        m1 = shifted_flat(g, kf, axis, -1);
        m2 = shifted_flat(g, kf, axis, -2);
      } else {
        p1 = shifted_flat(g, xf, axis, 1);
        p2 = shifted_flat(g, xf, axis, 2);
        m1 = shifted_flat(g, xf, axis, -1);
        m2 = shifted_flat(g, xf, axis, -2);
      }
      auto at = [&](long xi_f, long k_f) {
        return ConstFiberMap(f.values.data() + (xi_f * np + k_f) * fs, f.n_out, f.n_in);
      };
      FiberMap dst(out.values.data() + (xo * np + ko) * fs, f.n_out, f.n_in);
      if (xi_axis) {
        dst = (-at(xf, p2) + 8.0 * at(xf, p1) - 8.0 * at(xf, m1) + at(xf, m2)) / (12.0 * h);
      } else {
        dst = (-at(p2, kf) + 8.0 * at(p1, kf) - 8.0 * at(m1, kf) + at(m2, kf)) / (12.0 * h);
      }
    }
  }
  return out;
}

Symbol fd_derivative_multi(const Symbol& f, const DerivIndex& idx) {
  if (idx.order_a() > 4 || idx.order_alpha() > 4)
    throw input_error("fd_derivative_multi: derivative order above 4 not supported");
  Symbol cur = f;
  for (int axis = 0; axis < 2; ++axis)
    for (int k = 0; k < idx.a[axis]; ++k) cur = fd_derivative(cur, false, axis);
  for (int axis = 0; axis < 2; ++axis)
    for (int k = 0; k < idx.alpha[axis]; ++k) cur = fd_derivative(cur, true, axis);
  return cur;
}

double hoermander_seminorm(const Symbol& f, double m, double rho, double delta,
                           const DerivIndex& idx) {
  Symbol der = fd_derivative_multi(f, idx);
  const PhaseGrid& g = f.grid;
  const long np = g.npts();
  const double expo = -m + rho * idx.order_alpha() - delta * idx.order_a();
  double best = 0.0;
  for (long kf = 0; kf < np; ++kf) {
    const double w = std::pow(bracket_xi(g, kf), expo);
    for (long xf = 0; xf < np; ++xf) {
      auto blk = der.fiber(xf, kf);
      const double nrm =
          (f.n_out == 1 && f.n_in == 1) ? std::abs(blk(0, 0)) : blk.operatorNorm();
      best = std::max(best, w * nrm);
    }
  }
  return best;
}

SeminormReport seminorm_report(const Symbol& f, double m, double rho, double delta,
                               int max_total) {
  SeminormReport rep;
  rep.m = m;
  rep.rho = rho;
  rep.delta = delta;
  const int dims = f.grid.d;
  auto loop_multi = [&](int total, auto&& emit) {
    for (int a0 = 0; a0 <= total; ++a0)
      for (int a1 = 0; a1 <= (dims == 2 ? total - a0 : 0); ++a1) emit(a0, a1);
  };
  loop_multi(max_total, [&](int a0, int a1) {
    loop_multi(max_total - a0 - a1, [&](int g0, int g1) {
      DerivIndex idx;
      idx.a = {a0, a1};
      idx.alpha = {g0, g1};
      if (idx.order_a() + idx.order_alpha() > max_total) return;
      rep.entries[idx] = hoermander_seminorm(f, m, rho, delta, idx);
    });
  });
  return rep;
}

EllipticityResult ellipticity_check(const Symbol& f, double m, double R) {
  const PhaseGrid& g = f.grid;
  const double xi_max = std::abs(g.xi_nodes.front());
  if (R >= xi_max) throw input_error("ellipticity_check: no test region, R beyond grid");
  EllipticityResult res;
  double best = std::numeric_limits<double>::infinity();
  const long np = g.npts();
  bool any = false;
  for (long kf = 0; kf < np; ++kf) {
    Point xi = g.xi_of(kf);
    double norm2 = 0.0;
    for (int a = 0; a < g.d; ++a) norm2 += xi[a] * xi[a];
    if (std::sqrt(norm2) < R) continue;
    any = true;
    const double w = std::pow(bracket_xi(g, kf), m);
    for (long xf = 0; xf < np; ++xf) {
      auto blk = f.fiber(xf, kf);
      double smin;
      if (f.n_out == 1 && f.n_in == 1) {
        smin = std::abs(blk(0, 0));
      } else {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(blk);
        smin = svd.singularValues().minCoeff();
      }
      best = std::min(best, smin / w);
    }
  }
  if (!any) throw input_error("ellipticity_check: no grid nodes with |xi| >= R");
  res.C = best;
  res.elliptic = best > 0.0;
  return res;
}

}  // namespace magweyl
