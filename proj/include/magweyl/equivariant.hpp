#pragma once

#include "magweyl/quantize.hpp"

namespace magweyl {

/// Axis-aligned Bravais lattice Gamma = a_j Z^d with dual generators
/// e*_j = 2 pi / a_j, the Brillouin cell k_j in [-pi/a_j, pi/a_j) with
/// n_k nodes per axis, the real-space torus with n_y nodes per axis,
/// and an odd momentum-cover count N_c of represented dual cells.
struct Lattice {
  int d = 1;
  double a[2] = {1.0, 1.0};
  int n_k = 8;
  int n_y = 32;
  int N_c = 5;

  static Lattice make(int d, const double* a, int n_k, int n_y, int N_c = 5);

  double estar(int j) const { return 2.0 * kPi / a[j]; }
  long bz_count() const;     // n_k^d
  long torus_count() const;  // n_y^d
  long patch_count() const;  // lattice patch, n_k^d points
  int cover_n() const { return N_c * n_k; }  // momentum nodes per axis
};

/// One Fourier coefficient of a lattice-periodic function,
/// c * e^{i 2 pi (m1 y1 / a1 + m2 y2 / a2)}.
struct FourierCoeff {
  int m1 = 0, m2 = 0;
  cplx c;
};

/// Group action of the dual lattice: gamma* = (c1 e*_1, c2 e*_2) maps to
/// an invertible fiber matrix tau(gamma*), represented for |c_j| <= range.
struct GroupAction {
  int d = 1;
  int fib = 1;
  int range = 2;
  std::function<Eigen::MatrixXcd(int c1, int c2)> tau;
};

/// tau = Id for every shift.
GroupAction trivial_action(int d, int fib, int range);

/// The mode-shift action representing multiplication by e^{i gamma* y}
/// on the (2M+1)^d plane-wave truncation; modes pushed past the cutoff
/// are discarded.  weight_exp w measures the action in the H^w-weighted
/// norm (tau conjugated by diag(<2 pi m / a>^w)).
GroupAction mode_shift_action(const Lattice& lat, int M, double weight_exp = 0.0);

struct TauOrderFit {
  double q = 0.0;
  double C = 1.0;
};

/// Least-squares fit of log ||tau(gamma*)|| = log C + q log<gamma*> over
/// the represented range.
TauOrderFit tau_order_estimate(const GroupAction& action, const Lattice& lat);

// ---- Zak transform ------------------------------------------------------
//
// Sequences Psi live on the finite lattice patch x torus node set
// (gamma outermost, y innermost); transforms psi live on the Brillouin
// node set x torus nodes (k outermost).  Both carry the counting-measure
// norm, and the transform
//   psi(k, y) = n_k^{-d/2} sum_gamma e^{-i k (y + gamma)} Psi(gamma, y)
// is exactly unitary; the inverse is the adjoint sum.

Eigen::VectorXcd zak_transform(const Eigen::VectorXcd& Psi, const Lattice& lat);
Eigen::VectorXcd zak_inverse(const Eigen::VectorXcd& psi, const Lattice& lat);

/// Evaluates the Zak sum of Psi at an arbitrary momentum k (length
/// n_y^d result); used for the quasi-periodicity identity
/// psi(k - gamma*, y) = e^{i gamma* y} psi(k, y).
Eigen::VectorXcd zak_at(const Eigen::VectorXcd& Psi, const Lattice& lat, Point k);

// ---- Bloch fibers -------------------------------------------------------

/// Bloch fiber H(k) = (-i grad + k - A0)^2 + V(y) in the plane-wave
/// basis truncated at |m_j| <= M; V and A0 are given as finite Fourier
/// coefficient lists (A0 per component, may be null).  Hermitian
/// (2M+1)^d matrix for real potentials.
Eigen::MatrixXcd fiber_operator(const Lattice& lat, const std::vector<FourierCoeff>& V,
                                const std::vector<FourierCoeff>* A0, Point k, int M);

/// Matrix-valued symbol over (r, k) with k covering N_c dual cells.
/// Internally `sym` lives on the momentum-cover phase grid: slot 1 is k
/// (the state variable of the momentum representation), slot 2 is the
/// frequency variable rho dual to k, and the r-dependence is sampled at
/// r = eps * rho so that quantization realizes r -> i eps grad_k.
struct EquivariantSymbol {
  Lattice lat;
  int M = 0;
  double eps = 1.0;
  Symbol sym;
  GroupAction tau_in, tau_out;
};

/// h(r, k) = H_per(k) + phi(r) Id sampled over the cover, with the
/// mode-shift actions on both sides.
EquivariantSymbol bloch_symbol(const Lattice& lat, const std::vector<FourierCoeff>& V,
                               const std::function<double(Point)>& phi, int M,
                               double eps = 1.0);

/// max over r, over cover momenta k and dual shifts gamma* with k - gamma*
/// still covered, of ||f(r, k - gamma*) - tau'(gamma*) f(r,k) tau(gamma*)^{-1}||,
/// normalized by sup ||f||.  Fiber modes within `margin` + |shift| of the
/// truncation boundary are excluded (the mode-shift action is lossy there),
/// and only momenta at least `edge_cells` dual cells away from the cover
/// boundary are sampled (computed symbols carry wrap artifacts there).
double equivariance_defect(const EquivariantSymbol& f, int margin = 1,
                           int edge_cells = 0);

/// Fitted exponent q of sup_r ||f(r, k) W^{-w}|| ~ C <k>^q over the cover
/// momenta, where W = diag(<2 pi m / a>) is the fiber mode weight; w =
/// domain_weight measures f as a map H^w -> L^2 of the truncated fibers.
/// Momenta inside the first dual cell are excluded from the fit.
double growth_order_fit(const EquivariantSymbol& f, double domain_weight = 2.0);

/// Quantization on the single-cell space L^2(BZ, fiber): the operator is
/// built over the N_c-cell momentum cover from the momentum-form
/// building blocks (R = i eps grad_k, multiplication by k), then
/// compressed with the equivariant extension psi(k - gamma*) =
/// tau(gamma*) psi(k) and restriction to the central cell.  Only A = 0
/// is supported on this representation.
OperatorMatrix equivariant_quantize(const EquivariantSymbol& f, const MagneticData& mag);

/// Product of equivariant symbols through the exact momentum-form
/// calculus on the cover (the symbol of the cover-operator product).
EquivariantSymbol equivariant_product(const EquivariantSymbol& f,
                                      const EquivariantSymbol& g,
                                      const MagneticData& mag);

/// Equivariance defect of f #_exact g.
double equivariant_product_check(const EquivariantSymbol& f, const EquivariantSymbol& g,
                                 const MagneticData& mag);

/// (h - z)^{(-1) sharp} in the cover calculus; z within 1e-8 of the
/// cover spectrum raises singular_error.
EquivariantSymbol equivariant_resolvent(const EquivariantSymbol& h, cplx z,
                                        const MagneticData& mag);

/// Unit-cell identification U_{gamma*, gtilde*} psi(k) =
/// tau(gtilde* - gamma*)^{-1} psi(k + gamma* - gtilde*) on cover vectors
/// (k outermost, fiber innermost), with periodic wrap of the cover.
Eigen::VectorXcd cell_unitary(const Eigen::VectorXcd& psi, const Lattice& lat,
                              const GroupAction& tau, const int gamma_star[2],
                              const int gtilde_star[2]);

}  // namespace magweyl
