#pragma once

#include "magweyl/quantize.hpp"

namespace magweyl {

struct TraceCheck {
  cplx lhs;       // matrix trace of the assembled operator
  cplx rhs;       // (2 pi eps)^{-d} phase-space integral of tr f
  double defect;  // |lhs - rhs| / max(1, |rhs|)
};

/// Compares the matrix trace of Op(f) against the phase-space trace
/// formula (2 pi eps)^{-d} int tr f dX dxi, evaluated by the grid
/// Riemann sum.  Both sides agree up to the quadrature error of the
/// integral (the quantization itself is trace-exact per sample).
TraceCheck trace_formula_check(const Symbol& f, const MagneticData& mag);

/// Schatten p-norm of the assembled operator: the l^p norm of the full
/// singular value list.  Requires p >= 1.
double schatten_norm(const OperatorMatrix& M, double p);

/// Localized trace functional || Op(chi) |Op(f)|^p ||_1^{1/p} for a
/// cutoff symbol chi; |T|^p is taken through the singular value
/// decomposition.
double local_trace_check(const Symbol& f, const Symbol& chi, double p,
                         const MagneticData& mag);

}  // namespace magweyl
