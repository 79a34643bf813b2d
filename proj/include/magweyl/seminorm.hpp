#pragma once

#include <map>
#include <array>

#include "magweyl/symbol.hpp"

namespace magweyl {

/// Multi-index pair (a | x-derivatives, alpha | xi-derivatives).
struct DerivIndex {
  std::array<int, 2> a{0, 0};
  std::array<int, 2> alpha{0, 0};
  int order_a() const { return a[0] + a[1]; }
  int order_alpha() const { return alpha[0] + alpha[1]; }
  bool operator<(const DerivIndex& o) const {
    return std::tie(a, alpha) < std::tie(o.a, o.alpha);
  }
};

/// Symbol-class seminorm estimates for one (m, rho, delta) triple.
struct SeminormReport {
  double m = 0.0, rho = 0.0, delta = 0.0;
  std::map<DerivIndex, double> entries;
};

/// 4th-order central finite difference of f along one axis with periodic
/// wraparound.  xi_axis selects momentum (true) or position (false).
Symbol fd_derivative(const Symbol& f, bool xi_axis, int axis);

/// Iterated fd_derivative per the multi-index pair.
Symbol fd_derivative_multi(const Symbol& f, const DerivIndex& idx);

/// sup over the grid of <xi>^{-m + rho |alpha| - delta |a|} ||d^a_x d^alpha_xi f||_op.
/// Derivative orders are limited to |a|, |alpha| <= 4.
double hoermander_seminorm(const Symbol& f, double m, double rho, double delta,
                           const DerivIndex& idx);

/// All seminorms with |a| + |alpha| <= max_total collected into a report.
SeminormReport seminorm_report(const Symbol& f, double m, double rho, double delta,
                               int max_total);

struct EllipticityResult {
  bool elliptic = false;
  double C = 0.0;  // min over |xi| >= R of sigma_min(f) / <xi>^m
};

/// Lower bound check ||f(x,xi)|| >= C <xi>^m on the region |xi| >= R.
EllipticityResult ellipticity_check(const Symbol& f, double m, double R);

}  // namespace magweyl
