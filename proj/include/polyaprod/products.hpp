#pragma once

#include <memory>
#include <variant>

#include "polyaprod/ensembles.hpp"

namespace polyaprod {

struct FixedSpectrum {
  SignedSpectrum a;
};

/// Product g x g*: g from a Polya ensemble on l x m complex matrices of rank
/// n1, x an m x m Hermitian matrix of rank n2, fixed or drawn from a
/// polynomial ensemble. Product rank r = min(n1, n2).
struct ProductSpec {
  int l = 1, m = 1, n1 = 1, n2 = 1;
  PolyaWeight omega = PolyaWeight::make(WeightKind::ginibre, {});
  std::variant<FixedSpectrum, PolynomialEnsembleH> x = FixedSpectrum{};

  int rank() const { return std::min(n1, n2); }
  void validate() const;
  const FixedSpectrum& fixed() const;
  const PolynomialEnsembleH& ensemble() const;
};

/// The two theorem branches are selected explicitly; at n1 = n2 both apply
/// and must agree.
enum class RankBranch { geq, less };

RankBranch check_branch(const ProductSpec& spec, RankBranch branch);

/// Induced one-matrix weight of the product,
///   omega~(a~ | a) = Theta(a~ a) (a~/a)^{n1-n2} int da'/(|a| a')
///                    omega^(0)_{m-n1}(a') omega(a~/(a a')),
/// (>= branch; the < branch carries a^{n2-n1} instead of the ratio power).
/// The inner integral collapses at a' = 1 when m = n1 and is replaced by the
/// exact Beta convolution for projection-type weights.
class TildeWeight {
 public:
  TildeWeight(const ProductSpec& spec, RankBranch branch, QuadratureConfig cfg);

  double operator()(double a_tilde, double a) const;
  /// Scale-invariant core I(u) = int da'/a' omega^(0)_{m-n1}(a') omega(u/a'), u > 0.
  double core(double u) const;
  /// True when omega~ is a point mass (identity-like transform).
  bool distributional() const { return distributional_; }
  int power() const { return power_; }  // n1-n2 (>=) resp. n2-n1 (<)

 private:
  RankBranch branch_;
  int n1_, n2_, p_;           // p = m - n1
  int power_ = 0;
  bool distributional_ = false;
  bool beta_core_ = false;    // closed Beta form available
  int beta_k_ = 0;            // core = beta_c * K (1-u)^{K-1}, K = beta_k
  double beta_c_ = 1.0;
  PolyaWeight omega_;
  QuadratureConfig cfg_;
};

double weight_tilde_geq(const ProductSpec& spec, double a_tilde, double a, const QuadratureConfig& cfg);
double weight_tilde_less(const ProductSpec& spec, double a_tilde, double a, const QuadratureConfig& cfg);

/// e_o(-a) of the excluded spectrum via the contour representation
/// (trapezoid, exact for the finite Laurent expansion).
double elementary_sym(const VectorXd& a_excluded, int order, const QuadratureConfig& cfg);
/// Direct polynomial-expansion route; the contour's independent cross-check.
double elementary_sym_direct(const VectorXd& a_excluded, int order);

/// Paired families {p_j, q_j} with int p_j q_i = delta_ij; p_j polynomial of
/// degree j (coefficients ascending), q_j in the span of the weights.
struct BiorthSystem {
  int r = 0;
  std::vector<VectorXd> p_coeffs;
  std::vector<std::function<double(double)>> q;

  double p(int j, double x) const;
  Complex p(int j, Complex x) const;
};

/// Kernel K_r(a1, a2) = sum_j p_j(a1) q_j(a2) of the determinantal process;
/// polynomial in the first argument, hence complex-evaluable there.
struct Kernel {
  int r = 0;
  std::function<Complex(Complex, double)> eval_c;

  double operator()(double a1, double a2) const { return eval_c(Complex(a1), a2).real(); }
};

/// Joint eigenvalue density of g a g* at fixed spectrum a. Nearly degenerate
/// fixed spectra are handled by a symmetric epsilon-fan with Richardson
/// extrapolation.
double jpdf_fixed(const ProductSpec& spec, const SignedSpectrum& a_tilde, RankBranch branch,
                  const QuadratureConfig& cfg);

BiorthSystem biorth_fixed(const ProductSpec& spec, RankBranch branch, const QuadratureConfig& cfg);
Kernel kernel_fixed(const ProductSpec& spec, RankBranch branch, const QuadratureConfig& cfg);

/// Joint eigenvalue density of g x g* with x from the polynomial ensemble;
/// uses the Mellin-determinant form, or the bi-orthonormal form when a source
/// system is supplied.
double jpdf_random(const ProductSpec& spec, const SignedSpectrum& a_tilde, RankBranch branch,
                   const QuadratureConfig& cfg, const BiorthSystem* source = nullptr);

/// Bi-orthonormal functions of a polynomial ensemble from its Mellin moments.
BiorthSystem biorth_from_ensemble(const PolynomialEnsembleH& ens);
Kernel kernel_from_biorth(const BiorthSystem& sys);

/// chi polynomials of the transformation formulas:
///   chi_>=(z) = sum_j (m+j-n2)! / ((m-n1)! (n1+j-n2)! M omega(n1+j-n2+1)) z^j,
///   chi_<(z)  = sum_j (m+j-n1)! / ((m-n1)! j! M omega(j+1)) z^{j+n2-n1}.
/// Terms with negative factorial arguments vanish (1/Gamma convention).
std::pair<Complex, Complex> chi_polynomials(const ProductSpec& spec, Complex z);
/// z^h coefficient of the branch's chi polynomial.
double chi_coefficient(const ProductSpec& spec, RankBranch branch, int h);

/// Transformed bi-orthonormal system of g x g* from the system of x:
/// p~_j by contour extraction against chi, q~_j by integration against omega~.
BiorthSystem transform_biorth(const ProductSpec& spec, const BiorthSystem& source, RankBranch branch,
                              const QuadratureConfig& cfg);

/// Transformed kernel: contour-times-half-line double integral of
/// chi(z) omega~(a|1) K(a1/z, a2/a).
Kernel transform_kernel(const ProductSpec& spec, const Kernel& source, RankBranch branch,
                        const QuadratureConfig& cfg);

/// kappa-point correlation det[K(a_b, a_c)].
double correlation(const Kernel& k, const VectorXd& points, int kappa);

}  // namespace polyaprod
