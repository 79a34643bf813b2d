#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <mutex>

#include "magweyl/common.hpp"

namespace magweyl {

/// Memo of the pairwise line integrals int_[eps x_i, eps x_j] A over one
/// grid, filled on first use for quadrature-backed (sampled) fields.
struct LineIntegralCache {
  std::mutex mu;
  bool valid = false;
  int d = 0, n = 0;
  double x_extent = 0.0, eps = 0.0;
  std::vector<double> vals;  // np x np, row-major
};

enum class FieldKind {
  zero,      // A = 0, B = 0
  constant,  // constant vector potential A = a, B = 0
  landau,    // A = (B0 x2, 0), constant field B12 = B0 (d = 2)
  sampled,   // user-supplied evaluators restricted to a finite box
};

/// Magnetic field data: vector potential A, field B = dA, coupling
/// lambda and semiclassical parameter eps.  The two-form components are
/// taken as B_jl = d_l A_j - d_j A_l, which pairs with the kernel phase
/// e^{-i (lambda/eps) int A} to give i [P_j, P_l] = eps lambda B_jl(Q);
/// sampled B_fn callables must follow the same convention.  The builtin
/// kinds carry closed-form line integrals; `sampled` falls back to
/// composite Gauss-Legendre quadrature and enforces its domain box.
struct MagneticData {
  FieldKind kind = FieldKind::zero;
  int d = 1;
  double lambda = 0.0;
  double eps = 1.0;

  Point a;          // constant kind
  double B0 = 0.0;  // landau kind

  // sampled kind: component evaluators and the valid box |x_j| <= box.
  std::function<double(Point, int)> A_fn;
  std::function<double(Point, int, int)> B_fn;
  double box = std::numeric_limits<double>::infinity();

  // Optional gauge term: the effective potential is A + eps * grad(theta).
  // Its line integral is evaluated exactly via theta differences.
  std::function<double(Point)> gauge_theta;

  // Shared across copies of the same field; reset by with_gauge.
  mutable std::shared_ptr<LineIntegralCache> cache =
      std::make_shared<LineIntegralCache>();

  static MagneticData zero_field(int d, double eps, double lambda = 0.0);
  static MagneticData constant_A(int d, Point a, double eps, double lambda);
  static MagneticData landau_gauge(double B0, double eps, double lambda);
  static MagneticData from_callables(int d, std::function<double(Point, int)> A,
                                     std::function<double(Point, int, int)> B,
                                     double box, double eps, double lambda);

  /// Copy with an additional gauge term A -> A + eps * grad(theta).
  MagneticData with_gauge(std::function<double(Point)> theta) const;

  /// Field component B_jl(x) (antisymmetric by construction).
  double B(Point x, int j, int l) const;
};

/// Line integral of A along the straight segment [x, y],
/// int_0^1 A(x + t (y - x)) . (y - x) dt.  Closed forms for builtin
/// kinds; composite 8-point Gauss-Legendre (segments of length <= 1)
/// otherwise.  Includes the gauge term eps * (theta(y) - theta(x)).
double line_integral_A(const MagneticData& mag, Point x, Point y);

/// Flux of B through the oriented triangle <q, q + eps x, q + eps x + eps y>.
/// Constant fields use the closed form B0 eps^2 (x1 y2 - x2 y1) / 2;
/// otherwise a 7-point symmetric triangle rule (exact to degree 5).
/// d = 1 returns 0.
double flux_triangle(const MagneticData& mag, Point q, Point x, Point y);

/// Max over probe points of |fd-curl(A) - B| (validation helper).
double curl_defect(const MagneticData& mag, double extent, int probes);

}  // namespace magweyl
