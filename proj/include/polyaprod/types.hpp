#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace polyaprod {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Eigen::VectorXi;

/// Ordered nonzero real eigenvalues a in D_n.
struct SignedSpectrum {
  VectorXd values;  // sorted ascending, no zeros

  SignedSpectrum() = default;
  explicit SignedSpectrum(VectorXd v);
  int n() const { return static_cast<int>(values.size()); }
};

/// Ordered strictly positive squared singular values a in A_n.
struct PositiveSpectrum {
  VectorXd values;  // sorted ascending, all > 0

  PositiveSpectrum() = default;
  explicit PositiveSpectrum(VectorXd v);
  int n() const { return static_cast<int>(values.size()); }
  SignedSpectrum as_signed() const { return SignedSpectrum(values); }
};

/// Frequency pair (s, L) of the spherical transform, L_j in {0,1}.
struct Frequency {
  VectorXcd s;
  VectorXi L;

  Frequency() = default;
  Frequency(VectorXcd s_, VectorXi L_);
  int n() const { return static_cast<int>(s.size()); }
};

/// s^(n) = (n-1,...,1,0) and L^(n) = s^(n) mod 2; the normalization anchor.
Frequency standard_frequency(int n);

VectorXcd standard_s(int n);
VectorXi standard_L(int n);

/// Ambient dimensions (l rows, m cols) and rank n of a matrix set.
struct RankProfile {
  int l = 1;
  int m = 1;
  int n = 1;
};

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 4000;
  int contour_points = 256;  // even, >= 8

  void validate() const;
};

/// prod_{c>d} (x_c - x_d); empty and singleton inputs give 1.
double vandermonde(const VectorXd& x);
Complex vandermonde(const VectorXcd& x);

double log_factorial(int n);
/// log of prod_{j=0}^{n-1} j!
double log_superfactorial(int n);

}  // namespace polyaprod
