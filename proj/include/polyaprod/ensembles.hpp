#pragma once

#include <functional>
#include <optional>

#include "polyaprod/linalg.hpp"
#include "polyaprod/rng.hpp"
#include "polyaprod/spherical.hpp"
#include "polyaprod/weights.hpp"

namespace polyaprod {

/// Polynomial ensemble on rectangular complex matrices: squared singular
/// value density (1/n!) Delta(a) det[w_b(a_c)] / det[M w_b(c)].
struct PolynomialEnsembleG {
  int n = 1;
  std::vector<std::function<double(double)>> w;            // weights on R_+
  std::function<Complex(int b, Complex s)> mellin;         // M w_b(s), b = 1..n
};

/// Polynomial ensemble on Hermitian matrices: eigenvalue density
/// (1/n!) Delta(a) det[w_b(a_c)] / det[M w_b(c, c-1)], weights on R.
struct PolynomialEnsembleH {
  int n = 1;
  int m = 1;  // ambient dimension
  std::vector<std::function<double(double)>> w;            // weights on R
  std::function<Complex(int b, Complex s, int L)> mellin;  // M w_b(s, L), b = 1..n
  std::function<MatrixXcd(RngStream&)> sampler;            // optional m x m Hermitian draw
};

/// Joint density of the squared singular values of the Polya ensemble:
/// Delta(a) det[(-a d/da)^{b-1} omega(a_c)] / prod_j (j! M omega(j)).
double polya_jpdf(const PolyaWeight& omega, int n, const PositiveSpectrum& a);

/// Polya ensemble wrapped as a PolynomialEnsembleG (w_b = (-a d)^{b-1} omega).
PolynomialEnsembleG polya_as_polynomial(const PolyaWeight& omega, int n);

/// S_Psi of a Polya ensemble: prod_j M omega(s_j + 1) / M omega(n - j + 1).
Complex spherical_transform_polya(const PolyaWeight& omega, int n, const VectorXcd& s);

/// S_Psi of a polynomial ensemble on G:
/// (prod_j j!) det[M w_b(s_c + 1)] / (Delta(s) det[M w_b(c)]).
Complex spherical_transform_polynomial(const PolynomialEnsembleG& ens, const VectorXcd& s);

/// S_Phi of a polynomial ensemble on H:
/// (prod_j j!) det[M w_b(s_c + 1, L_c)] / (Delta(s) det[M w_b(c, c-1)]).
Complex spherical_transform_polynomial(const PolynomialEnsembleH& ens, const Frequency& freq);

enum class MatrixSpace { g_type, h_type };

struct MeasureConstants {
  double log_eigen_constant = 0.0;  // prefactor of the eigenvalue measure map
  double log_flat_factor = 0.0;     // flat-Lebesgue identification constant (G-type, l != m)
};

/// Constants of the isometries between K-invariant matrix densities and their
/// eigenvalue / singular-value densities.
MeasureConstants eigen_measure_constant(MatrixSpace space, int l, int m, int n);

/// Matrix sampler for the sampleable catalog kinds, on l x m with rank n:
/// the Polya spectrum is drawn exactly and embedded with independent Haar
/// factors. Throws for analytic-only kinds.
MatrixXcd sample_ensemble_matrix(WeightKind kind, int l, int m, int n, const WeightParams& params,
                                 RngStream& rng);

/// GUE on m x m (weights a^{b-1} e^{-a^2}); eigenvalues on both half-axes.
PolynomialEnsembleH make_gue_ensemble(int m);

/// x = sign * h h* with h an m x n complex Ginibre block (Wishart spectrum).
PolynomialEnsembleH make_wishart_ensemble(int m, int n, int sign = +1);

/// Symmetric density evaluator of a polynomial ensemble on H (for quadrature).
double polynomial_jpdf_h(const PolynomialEnsembleH& ens, const VectorXd& a);

}  // namespace polyaprod
