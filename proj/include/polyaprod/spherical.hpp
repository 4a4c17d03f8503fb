#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "polyaprod/linalg.hpp"
#include "polyaprod/mellin.hpp"
#include "polyaprod/quadrature.hpp"
#include "polyaprod/rng.hpp"
#include "polyaprod/types.hpp"

namespace polyaprod {

// Near-degenerate frequencies / eigenvalues switch the determinant ratio to
// a divided-difference (Hermite) evaluation instead of naive division.
inline constexpr double kFrequencyClusterTol = 1e-6;
inline constexpr double kSpectrumClusterTol = 1e-8;

/// Spherical function on rank-n Hermitian matrices, evaluated on the nonzero
/// eigenvalues:
///   Phi(s, L; a) = (prod_j j!) det[sign(a_c)^{L_b} |a_c|^{s_b}] / (Delta(a) Delta(s)).
/// Values are symmetric in the (s_b, L_b) pairs and in the a_c; confluent
/// frequencies or eigenvalues are handled by divided differences.
Complex phi(const Frequency& freq, const SignedSpectrum& a);

/// Spherical function on rectangular complex matrices via the squared
/// singular values: Psi(s; a) = (prod_j j!) det[a_c^{s_b}] / (Delta(a) Delta(s)).
Complex psi(const VectorXcd& s, const PositiveSpectrum& a);

/// C_{l,n}(s) = prod_j (l-j)! Gamma(s_j+1) / ((n-j)! Gamma(s_j+l-n+1));
/// equals 1 at maximal rank l = n.
Complex normalization_C(int l, int n, const VectorXcd& s);

struct McEstimate {
  Complex value{};
  double stderr_est = 0.0;
  int samples = 0;
};

/// Monte Carlo of the defining Haar-average ratio of Phi: products of leading
/// principal minors of k x k* over k in U(l), with the rank-n projector in the
/// denominator. Numerator and denominator share the Haar stream. Convergence
/// region: Re(s_j - s_{j+1}) >= 1 with the convention s_{n+1} = -1, L_{n+1} = -1.
McEstimate phi_definition_mc(const Frequency& freq, const MatrixXcd& x, int samples, RngStream& rng);

/// Symmetric eigenvalue density on n-tuples; support full_line for D_n,
/// half_line for A_n.
struct SpectralDensity {
  int n = 1;
  std::function<double(const VectorXd&)> p;
  Domain support = Domain::full_line;
};

/// S_Phi p (s, L) = int p(a) Phi(s, L; a) da over D_n (n-fold quadrature).
Complex spherical_transform_phi(const SpectralDensity& density, const Frequency& freq,
                                const QuadratureConfig& cfg);

/// S_Psi q (s) = int q(a) Psi(s; a) da over A_n.
Complex spherical_transform_psi(const SpectralDensity& density, const VectorXcd& s,
                                const QuadratureConfig& cfg);

/// Regularized inverse of S_Phi at a: 2^n parity sum, n-fold frequency
/// integral on the shifted lines i s + s^(n) with zeta_n regularization,
/// Richardson-extrapolated over the epsilon schedule.
ExtrapolationResult inverse_spherical_phi(const std::function<Complex(const Frequency&)>& transform,
                                          const SignedSpectrum& a, const std::vector<double>& eps_schedule,
                                          const QuadratureConfig& cfg);

/// Analytic right-hand side of the Haar factorization
///   int dk Phi(s, L; g k x k* g*) = C_{m, max(n1,n2)}(s~) * {Psi Phi case split},
/// with s~ = (s + |n1-n2|, s^(|n1-n2|)) and the matching parity extension.
Complex factorization_rhs(const VectorXcd& s, const VectorXi& L, int l, int m, int n1, int n2,
                          const PositiveSpectrum& a_g, const SignedSpectrum& a_x);

/// Both sides of the rank-lowering limit: for s_n -> 0 then a_n -> 0,
///   C_{m,n}(s) Psi(s; a)  ->  C_{m,n-1}(s' - 1) Psi(s' - 1; a').
/// Returns {lhs at (eps_s, eps_a), rhs} for comparison.
std::pair<Complex, Complex> rank_limit_check(int m, const VectorXcd& s_head, const VectorXd& a_head,
                                             double eps_s = 1e-6, double eps_a = 1e-6);

}  // namespace polyaprod
