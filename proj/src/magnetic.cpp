#include "magweyl/magnetic.hpp"

#include <cmath>

namespace magweyl {
namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
const double kGL8x[8] = {-0.9602898564975363, -0.7966664774136267,
                         -0.5255324099163290, -0.1834346424956498,
                         0.1834346424956498,  0.5255324099163290,
                         0.7966664774136267,  0.9602898564975363};
const double kGL8w[8] = {0.1012285362903763, 0.2223810344533745,
                         0.3137066458778873, 0.3626837833783620,
                         0.3626837833783620, 0.3137066458778873,
                         0.2223810344533745, 0.1012285362903763};

// Degree-5 symmetric 7-point triangle rule in barycentric coordinates.
struct TriNode {
  double b0, b1, b2, w;
};
const TriNode kTri7[7] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {0.0597158717897698, 0.4701420641051151, 0.4701420641051151, 0.1323941527885062},
    {0.4701420641051151, 0.0597158717897698, 0.4701420641051151, 0.1323941527885062},
    {0.4701420641051151, 0.4701420641051151, 0.0597158717897698, 0.1323941527885062},
    {0.7974269853530873, 0.1012865073234563, 0.1012865073234563, 0.1259391805448271},
    {0.1012865073234563, 0.7974269853530873, 0.1012865073234563, 0.1259391805448271},
    {0.1012865073234563, 0.1012865073234563, 0.7974269853530873, 0.1259391805448271},
};

double segment_length(Point x, Point y, int d) {
  double s = 0.0;
  for (int a = 0; a < d; ++a) s += (y[a] - x[a]) * (y[a] - x[a]);
  return std::sqrt(s);
}

}  // namespace

MagneticData MagneticData::zero_field(int d, double eps, double lambda) {
  MagneticData m;
  m.kind = FieldKind::zero;
  m.d = d;
  m.eps = eps;
  m.lambda = lambda;
  return m;
}

MagneticData MagneticData::constant_A(int d, Point a, double eps, double lambda) {
  MagneticData m;
  m.kind = FieldKind::constant;
  m.d = d;
  m.a = a;
  m.eps = eps;
  m.lambda = lambda;
  return m;
}

MagneticData MagneticData::landau_gauge(double B0, double eps, double lambda) {
  MagneticData m;
  m.kind = FieldKind::landau;
  m.d = 2;
  m.B0 = B0;
  m.eps = eps;
  m.lambda = lambda;
  return m;
}

MagneticData MagneticData::from_callables(int d, std::function<double(Point, int)> A,
                                          std::function<double(Point, int, int)> B,
                                          double box, double eps, double lambda) {
  MagneticData m;
  m.kind = FieldKind::sampled;
  m.d = d;
  m.A_fn = std::move(A);
  m.B_fn = std::move(B);
  m.box = box;
  m.eps = eps;
  m.lambda = lambda;
  return m;
}

MagneticData MagneticData::with_gauge(std::function<double(Point)> theta) const {
  MagneticData m = *this;
  if (!gauge_theta) {
    m.gauge_theta = std::move(theta);
  } else {
    auto prev = gauge_theta;
    m.gauge_theta = [prev, theta](Point p) { return prev(p) + theta(p); };
  }
  m.cache = std::make_shared<LineIntegralCache>();
  return m;
}

double MagneticData::B(Point x, int j, int l) const {
  if (j == l) return 0.0;
  double sign = 1.0;
  if (j > l) {
    std::swap(j, l);
    sign = -1.0;
  }
  switch (kind) {
    case FieldKind::zero:
    case FieldKind::constant:
      return 0.0;
    case FieldKind::landau:
      return sign * B0;  // B_12 = B0
    case FieldKind::sampled:
      if (!B_fn) return 0.0;
      for (int a = 0; a < d; ++a)
        if (std::abs(x[a]) > box) throw input_error("MagneticData: point outside sampled box");
      return sign * B_fn(x, j, l);
  }
  return 0.0;
}

double line_integral_A(const MagneticData& mag, Point x, Point y) {
  for (int a = 0; a < mag.d; ++a)
    if (!std::isfinite(x[a]) || !std::isfinite(y[a]))
      throw input_error("line_integral_A: non-finite endpoint");

  double base = 0.0;
  const Point delta = y - x;
  switch (mag.kind) {
    case FieldKind::zero:
      base = 0.0;
      break;
    case FieldKind::constant: {
      for (int a = 0; a < mag.d; ++a) base += mag.a[a] * delta[a];
      break;
    }
    case FieldKind::landau: {
      // A = (B0 x2, 0): int = B0 dx1 (x2 + dx2 / 2).
      base = mag.B0 * delta[0] * (x[1] + 0.5 * delta[1]);
      break;
    }
    case FieldKind::sampled: {
      if (!mag.A_fn) break;
      for (int a = 0; a < mag.d; ++a)
        if (std::abs(x[a]) > mag.box || std::abs(y[a]) > mag.box)
          throw input_error("line_integral_A: segment exits sampled box");
      // Composite Gauss-Legendre: subdivide so each piece has length <= 1.
      const double len = segment_length(x, y, mag.d);
      const int pieces = std::max(1, int(std::ceil(len)));
      for (int p = 0; p < pieces; ++p) {
        const double t0 = double(p) / pieces, t1 = double(p + 1) / pieces;
        const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
        for (int g = 0; g < 8; ++g) {
          const double t = mid + half * kGL8x[g];
          Point pt = x + t * delta;
          double dot = 0.0;
          for (int a = 0; a < mag.d; ++a) dot += mag.A_fn(pt, a) * delta[a];
          base += half * kGL8w[g] * dot;
        }
      }
      break;
    }
  }
  if (mag.gauge_theta) base += mag.eps * (mag.gauge_theta(y) - mag.gauge_theta(x));
  return base;
}

double flux_triangle(const MagneticData& mag, Point q, Point x, Point y) {
  if (mag.d < 2) return 0.0;
  const double e = mag.eps;
  if (mag.kind == FieldKind::zero || mag.kind == FieldKind::constant) return 0.0;
  const double cross = x[0] * y[1] - x[1] * y[0];
  if (mag.kind == FieldKind::landau) return mag.B0 * e * e * cross / 2.0;

  // General field: quadrature over the triangle <v0, v1, v2>.
  const Point v0 = q;
  const Point v1 = q + e * x;
  const Point v2 = q + (e * x + e * y);
  const double signed_area =
      0.5 * ((v1[0] - v0[0]) * (v2[1] - v0[1]) - (v1[1] - v0[1]) * (v2[0] - v0[0]));
  if (signed_area == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& node : kTri7) {
    Point p{node.b0 * v0[0] + node.b1 * v1[0] + node.b2 * v2[0],
            node.b0 * v0[1] + node.b1 * v1[1] + node.b2 * v2[1]};
    acc += node.w * mag.B(p, 0, 1);
  }
  return acc * signed_area;
}

double curl_defect(const MagneticData& mag, double extent, int probes) {
  if (mag.d < 2) return 0.0;
  auto A_at = [&](Point p, int comp) -> double {
    switch (mag.kind) {
      case FieldKind::zero:
        return 0.0;
      case FieldKind::constant:
        return mag.a[comp];
      case FieldKind::landau:
        return comp == 0 ? mag.B0 * p[1] : 0.0;
      case FieldKind::sampled:
        return mag.A_fn ? mag.A_fn(p, comp) : 0.0;
    }
    return 0.0;
  };
  const double h = extent / (8.0 * probes);
  double worst = 0.0;
  for (int i = 0; i < probes; ++i)
    for (int j = 0; j < probes; ++j) {
      Point p{-extent + 2.0 * extent * (i + 0.5) / probes,
              -extent + 2.0 * extent * (j + 0.5) / probes};
      Point pe1{p[0] + h, p[1]}, me1{p[0] - h, p[1]};
      Point pe2{p[0], p[1] + h}, me2{p[0], p[1] - h};
      // B_12 = d_2 A_1 - d_1 A_2 (two-form components of B = dA).
      const double b12 =
          (A_at(pe2, 0) - A_at(me2, 0)) / (2 * h) - (A_at(pe1, 1) - A_at(me1, 1)) / (2 * h);
      worst = std::max(worst, std::abs(b12 - mag.B(p, 0, 1)));
    }
  return worst;
}

}  // namespace magweyl
