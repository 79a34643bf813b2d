#include "magweyl/trace_tools.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace magweyl {

TraceCheck trace_formula_check(const Symbol& f, const MagneticData& mag) {
  if (f.n_out != f.n_in) throw input_error("trace_formula_check: fiber must be square");
  TraceCheck out;
  out.lhs = op_quantize(f, mag).M.trace();

  // (2 pi eps)^{-d} (dx dxi)^d sum_nodes tr f; with dx dxi = 2 pi / n the
  // prefactor collapses to n^{-d} per phase-space node.
  cplx s(0.0, 0.0);
  const long nodes = f.node_count();
  for (long t = 0; t < nodes; ++t) {
    for (int r = 0; r < f.n_out; ++r) s += f.values[(t * f.n_out + r) * f.n_in + r];
  }
  double pref = 1.0;
  for (int a = 0; a < f.grid.d; ++a) pref /= f.grid.n;
  out.rhs = pref * s;
  out.defect = std::abs(out.lhs - out.rhs) / std::max(1.0, std::abs(out.rhs));
  return out;
}

double schatten_norm(const OperatorMatrix& M, double p) {
  if (!(p >= 1.0)) throw input_error("schatten_norm: p must be >= 1");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M.M);
  const auto& sv = svd.singularValues();
  if (std::isinf(p)) return sv.size() ? sv(0) : 0.0;
  double acc = 0.0;
  for (long i = 0; i < sv.size(); ++i) acc += std::pow(sv(i), p);
  return std::pow(acc, 1.0 / p);
}

double local_trace_check(const Symbol& f, const Symbol& chi, double p,
                         const MagneticData& mag) {
  if (!(p >= 1.0)) throw input_error("local_trace_check: p must be >= 1");
  if (!f.grid.same_as(chi.grid)) throw input_error("local_trace_check: grid mismatch");
  const Eigen::MatrixXcd T = op_quantize(f, mag).M;
  const Eigen::MatrixXcd C = op_quantize(chi, mag).M;

  // |T|^p = U Sigma^p U^dagger from the SVD T = W Sigma U^dagger.
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(T, Eigen::ComputeThinV);
  Eigen::VectorXd sp = svd.singularValues();
  for (long i = 0; i < sp.size(); ++i) sp(i) = std::pow(sp(i), p);
  const Eigen::MatrixXcd absTp =
      svd.matrixV() * sp.asDiagonal() * svd.matrixV().adjoint();

  OperatorMatrix A;
  A.grid = f.grid;
  A.n_out = A.n_in = f.n_out;
  A.M = C * absTp;
  return std::pow(schatten_norm(A, 1.0), 1.0 / p);
}

}  // namespace magweyl
