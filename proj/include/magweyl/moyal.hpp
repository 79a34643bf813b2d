#pragma once

#include <array>

#include "magweyl/quantize.hpp"

namespace magweyl {

/// Discrete symplectic Fourier transform, the centered index-space
/// realization of (F f)(X) = (2 pi eps)^{-d} int dX' e^{i sigma(X,X')/eps} f(X')
/// on the scaled grid.  Exactly involutive: symplectic_fourier twice is
/// the identity.
Symbol symplectic_fourier(const Symbol& f);

/// Spectral (Fourier) partial derivative of f along one position
/// (xi_axis = false) or momentum axis; exact for band-limited symbols.
/// The Nyquist mode is annihilated.
Symbol spectral_derivative(const Symbol& f, bool xi_axis, int axis);

/// Reference magnetic Weyl product: the symbol of Op(f) Op(g).
Symbol weyl_product_exact(const Symbol& f, const Symbol& g, const MagneticData& mag);

/// Independent product route: the double phase-space integral with the
/// magnetic flux phase, collapsed to a twisted convolution over the
/// momentum-frequency lattice.  Supports B = 0 and constant B in d <= 2;
/// other fields raise capability_error.
Symbol weyl_product_integral(const Symbol& f, const Symbol& g, const MagneticData& mag);

/// Magnetic Poisson bracket
/// {f,g} = grad_xi f . grad_x g - grad_x f . grad_xi g
///         + lambda sum_jk B_jk d_xi_j f d_xi_k g,
/// with spectral gradients and order-preserving fiber products.  The
/// magnetic sign pairs with B_jl = d_l A_j - d_j A_l so that
/// -eps i {xi_j, f} reproduces the commutator i [P_j, P_l] = eps lambda B_jl.
Symbol poisson_bracket_magnetic(const Symbol& f, const Symbol& g,
                                const MagneticData& mag);

/// Leading terms of f # g: term0 = f g, term1 = -(i/2) {f,g}.  Orders
/// beyond 1 raise capability_error.
FormalSeries weyl_product_expansion(const Symbol& f, const Symbol& g,
                                    const MagneticData& mag, int order);

enum class DerivationAxis { position, momentum };
enum class DerivationRoute { exact, expanded };

/// Moyal commutator with a coordinate symbol:
///   position j: ad_{x_j}(f)  = x_j # f - f # x_j  = +eps i d_xi_j f (exact),
///   momentum j: ad_{xi_j}(f) = xi_j # f - f # xi_j
///             = -eps i d_X_j f - i eps lambda sum_k B_jk d_xi_k f + O(eps^3).
/// route = exact uses weyl_product_exact; expanded evaluates the right
/// hand sides with spectral derivatives.
Symbol derivation(const Symbol& f, DerivationAxis kind, int axis,
                  const MagneticData& mag, DerivationRoute route);

/// Iterated derivations for the multi-index pair (a | positions,
/// alpha | momenta), applied per-axis in lexicographic order with the
/// momentum derivations outermost.
Symbol iterated_derivation(const Symbol& f, const std::array<int, 2>& a,
                           const std::array<int, 2>& alpha, const MagneticData& mag,
                           DerivationRoute route);

/// Boundedness proxy for the Beals-type characterization:
/// || Op( w_{-m + |alpha| rho} # ad^{(a,alpha)} f ) ||.
double beals_diagnostic(const Symbol& f, const MagneticData& mag,
                        const std::array<int, 2>& a, const std::array<int, 2>& alpha,
                        double m, double rho);

/// Smooth compactly supported window on the unit lattice, normalized so
/// that sum_gamma chi(t - gamma)^2 = 1 along each axis.
std::function<double(Point)> gabor_window(int d);

/// Magnetic Gabor frame matrix element <G_{gamma', k'}, F G_{gamma, k}>
/// with G_{gamma,k}(x) = (2 pi)^{d/2} e^{-i (lambda/eps) int_[eps x, eps gamma] A}
/// chi(x - gamma) e^{i k.(x - gamma)}; returns the n_out x n_in fiber
/// matrix of the element.
FiberMatrix gabor_coefficients(const OperatorMatrix& F,
                               const std::function<double(Point)>& chi, Point gamma,
                               Point gammap, Point k, Point kp,
                               const MagneticData& mag);

}  // namespace magweyl
