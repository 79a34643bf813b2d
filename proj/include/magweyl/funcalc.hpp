#pragma once

#include "magweyl/moyal.hpp"

namespace magweyl {

/// Scalar weight w_m = <xi>^m + lambda(m) for m >= 0, and its Moyal
/// inverse for m < 0.  The shift lambda(m) = max(0, 1 - min eig
/// Op(<xi>^{|m|})) + 0.1 keeps the quantized weight safely positive;
/// m = 0 is exact (Op(1) = Id) and carries no shift.
struct WeightSymbol {
  double m = 0.0;
  double lambda_m = 0.0;
  Symbol values;
};

/// Counterclockwise axis-aligned rectangle contour with a trapezoid
/// node count per edge (doubled internally until the integral settles).
struct ContourSpec {
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;
  int points_per_edge = 32;
};

WeightSymbol weight_symbol(const PhaseGrid& grid, double m, const MagneticData& mag);

/// Inverse with respect to the magnetic Weyl product: the Wigner
/// transform of the inverse of the assembled matrix.  Condition number
/// above 1e8 raises singular_error.
Symbol moyal_inverse(const Symbol& f, const MagneticData& mag);

/// (h - z)^{(-1) sharp}; z too close to the spectrum raises singular_error.
Symbol moyal_resolvent(const Symbol& h, cplx z, const MagneticData& mag);

enum class ParametrixSide { left, right };

/// Degree-N parametrix series from the principal inverse g0: with the
/// inversion defect r0 = eps^{-1} (g0 # f - Id), the left parametrix is
///   (Id + sum_{n=1..N} (-1)^n eps^n r0^{# n}) # g0,
/// returned as the FormalSeries term list (term n multiplies eps^n).
/// The right side mirrors the construction with f # g0.  A defect
/// larger than O(eps) raises input_error (bad principal symbol).
FormalSeries parametrix(const Symbol& f, const Symbol& g0, int N,
                        const MagneticData& mag,
                        ParametrixSide side = ParametrixSide::left);

/// Smooth real function given with derivatives: phi(u, k) returns the
/// k-th derivative at u; helffer_sjostrand evaluates k up to
/// ext_order + 1.
using SmoothFunction = std::function<double(double, int)>;

/// phi^B(h) by the Helffer-Sjostrand formula with a quasi-analytic
/// extension of order ext_order (Taylor in iv with the bump cutoff
/// tau(v/<u>)), integrated over the strip |v| <= v_max around supp phi
/// = [u_lo, u_hi].  Nodes closer to the spectrum than a relative 1e-8
/// are skipped; more than 10% skipped nodes raises singular_error.
Symbol helffer_sjostrand(const Symbol& h, const SmoothFunction& phi, double u_lo,
                         double u_hi, int ext_order, const MagneticData& mag);

/// phi^B(h) = (i / 2 pi) contour integral of phi(z) (h - z)^{(-1) sharp}
/// along the rectangle, by composite panel quadrature per edge.  The
/// panel count is doubled until the
/// result moves by less than 1e-8; a contour passing within the
/// spectral tolerance of an eigenvalue raises singular_error.
Symbol holomorphic_calculus(const Symbol& h, const std::function<cplx(cplx)>& phi,
                            const ContourSpec& contour, const MagneticData& mag);

struct ProjectionResult {
  Symbol pi;
  double idempotency_defect = 0.0;  // sup norm of pi # pi - pi
  double hermiticity_defect = 0.0;  // sup norm of pi - pi*
};

/// Approximate spectral projection onto the eigenvalues of Op(h) inside
/// [band_lo, band_hi], via the holomorphic calculus with phi = 1 on a
/// rectangle around the band.  The band must be isolated from the rest
/// of the spectrum by at least `gap`.
ProjectionResult spectral_projection(const Symbol& h, double band_lo, double band_hi,
                                     const MagneticData& mag, double gap = 1e-6);

}  // namespace magweyl
