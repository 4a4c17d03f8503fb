#pragma once

#include "polyaprod/rng.hpp"
#include "polyaprod/types.hpp"

namespace polyaprod {

inline constexpr double kHermitianTol = 1e-12;   // relative max-norm asymmetry
inline constexpr double kRankThreshold = 1e-10;  // |lambda| <= thr * max|lambda| counts as zero

/// All real eigenvalues of a Hermitian matrix, sorted ascending, zeros included.
/// Throws on non-square input or asymmetry beyond kHermitianTol.
VectorXd hermitian_eigenvalues(const MatrixXcd& x);

struct EigenSystem {
  VectorXd values;   // ascending
  MatrixXcd vectors; // columns
};
EigenSystem hermitian_eigensystem(const MatrixXcd& x);

/// Eigenvalues of g g* restricted to the numerical rank, sorted ascending.
/// Throws on a (numerically) zero matrix.
PositiveSpectrum squared_singular_values(const MatrixXcd& g);

/// Strips entries with |v| <= kRankThreshold * max|v|, keeps order.
VectorXd strip_numerical_zeros(const VectorXd& v);

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// R-diagonal phases absorbed into Q (the phase fix is required for Haar).
MatrixXcd haar_unitary(int dim, RngStream& rng);

/// rows x cols matrix of iid CN(0,1) entries.
MatrixXcd ginibre_matrix(int rows, int cols, RngStream& rng);

/// GUE draw: x = (A + A*)/2 with A ~ Ginibre; eigenvalue density
/// proportional to Delta^2(a) prod exp(-a_c^2).
MatrixXcd gue_matrix(int dim, RngStream& rng);

/// Pi_{l,n} diag(a) Pi_{n,l}: spectrum embedded into an l x l Hermitian matrix.
MatrixXcd embed_spectrum(const VectorXd& a, int l);
/// Pi_{l,n} diag(sqrt(a)) Pi_{n,m}: positive spectrum embedded into an l x m matrix.
MatrixXcd embed_singular_values(const VectorXd& a_squared, int l, int m);

/// det(A) as mantissa * exp(log_scale); stable for wide dynamic ranges.
struct ScaledDet {
  Complex mantissa{0.0, 0.0};
  double log_scale = 0.0;
  Complex value() const { return mantissa * std::exp(log_scale); }
};
ScaledDet det_scaled(MatrixXcd a);  // by value: LU factors in place
ScaledDet det_scaled(MatrixXd a);

}  // namespace polyaprod
