#pragma once

#include <Eigen/Dense>

#include "magweyl/magnetic.hpp"
#include "magweyl/symbol.hpp"

namespace magweyl {

/// Integral kernel K(x, y) of a quantized symbol; block (i, j) is the
/// n_out x n_in fiber matrix K(x_i, x_j).
struct OperatorKernel {
  PhaseGrid grid;
  int n_out = 1, n_in = 1;
  Eigen::MatrixXcd K;  // (n^d n_out) x (n^d n_in)
};

/// Dense matrix realization of the operator on the discretized L^2
/// space; the y-quadrature weight dx^d is baked in, so M psi ~ int K psi.
struct OperatorMatrix {
  PhaseGrid grid;
  int n_out = 1, n_in = 1;
  Eigen::MatrixXcd M;
};

// ---- building blocks --------------------------------------------------

/// Converts between symmetric (midpoint) and row-attached symbol
/// conventions by the half-step Fourier shift.  direction = +1 maps the
/// midpoint symbol to its row-attached counterpart; -1 inverts exactly.
/// freq_sign matches the kernel's frequency convention (+1 standard
/// position form, -1 momentum form).
Symbol half_shift(const Symbol& f, int direction, int freq_sign = +1);

/// Row-attached quantization matrix without magnetic phase or dilation:
/// M[i,j] = n^{-d} sum_l g[i,l] w^{freq_sign (i-j)(l-n/2)}, w = e^{2 pi i/n}.
OperatorMatrix row_quantize(const Symbol& g, int freq_sign = +1);
/// Exact inverse of row_quantize.
Symbol row_unquantize(const OperatorMatrix& M, int freq_sign = +1);

/// Entrywise magnetic phase e^{-i (lambda/eps) int_[eps x_i, eps x_j] A};
/// strip = true multiplies by the conjugate instead.
void apply_magnetic_phase(OperatorMatrix& M, const MagneticData& mag, bool strip);

// ---- quantization ------------------------------------------------------

/// Full magnetic Weyl quantization of f on the grid.
OperatorMatrix op_quantize(const Symbol& f, const MagneticData& mag);

/// Kernel of the quantization (assemble() adds the quadrature weight).
OperatorKernel kernel_map(const Symbol& f, const MagneticData& mag);
OperatorMatrix assemble(const OperatorKernel& K);

/// Inverse of the quantization: recovers the symbol from kernel/matrix.
Symbol wigner(const OperatorKernel& K, const MagneticData& mag);
Symbol wigner_matrix(const OperatorMatrix& M, const MagneticData& mag);

// ---- diagnostics -------------------------------------------------------

/// Largest singular value by power iteration (tol 1e-10, <= 500 iters).
double operator_norm(const Eigen::MatrixXcd& M);

/// Phase-space translation by X = (y, eta) acting on a state vector of
/// length n^d * fib; off-grid shifts use Fourier interpolation.
Eigen::VectorXcd weyl_system_apply(Point y, Point eta, const Eigen::VectorXcd& psi,
                                   const PhaseGrid& grid, int fib,
                                   const MagneticData& mag);

/// Normalized L^2 Gaussian test state of width w centered at the origin.
Eigen::VectorXcd gaussian_state(const PhaseGrid& grid, int fib, double width);

/// Relative operator-norm mismatch between Op^{A + eps dtheta}(f) and the
/// conjugation of Op^A(f) by e^{i lambda theta(Q)}.
double gauge_covariance_defect(const Symbol& f, const MagneticData& mag,
                               const std::function<double(Point)>& theta);

/// || Op(f)^dagger - Op(f^*) || / || Op(f) ||.
double adjoint_check(const Symbol& f, const MagneticData& mag);

struct CommutationReport {
  double qq = 0.0;  // max_j,l  || i[Q_j, Q_l] psi ||
  double pq = 0.0;  // max_j,l  || i[P_j, Q_l] psi - eps delta_jl psi ||
  double pp = 0.0;  // max_j<l  || i[P_j, P_l] psi - eps lambda B_jl(Q) psi ||
};

/// Evaluates the canonical commutators on an interior Gaussian state.
CommutationReport commutation_check(const PhaseGrid& grid, const MagneticData& mag);

}  // namespace magweyl
