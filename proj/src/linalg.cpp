#include "polyaprod/linalg.hpp"

#include <cmath>

namespace polyaprod {

namespace {

void require_hermitian(const MatrixXcd& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("hermitian_eigenvalues: non-square input");
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return;
  const double asym = (x - x.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTol * scale)
    throw std::invalid_argument("hermitian_eigenvalues: input not Hermitian within tolerance");
}

}  // namespace

VectorXd hermitian_eigenvalues(const MatrixXcd& x) {
  require_hermitian(x);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(x, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigenvalues: solver failed");
  return solver.eigenvalues();
}

EigenSystem hermitian_eigensystem(const MatrixXcd& x) {
  require_hermitian(x);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(x);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigensystem: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

VectorXd strip_numerical_zeros(const VectorXd& v) {
  if (v.size() == 0) return v;
  const double thr = kRankThreshold * v.cwiseAbs().maxCoeff();
  std::vector<double> keep;
  keep.reserve(v.size());
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > thr) keep.push_back(v[i]);
  return Eigen::Map<VectorXd>(keep.data(), static_cast<long>(keep.size()));
}

PositiveSpectrum squared_singular_values(const MatrixXcd& g) {
  if (g.cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("squared_singular_values: zero matrix");
  // Work with the smaller Gram matrix; both share the nonzero spectrum.
  MatrixXcd gram = g.rows() <= g.cols() ? MatrixXcd(g * g.adjoint()) : MatrixXcd(g.adjoint() * g);
  VectorXd ev = hermitian_eigenvalues(gram).cwiseMax(0.0);
  VectorXd nz = strip_numerical_zeros(ev);
  if (nz.size() == 0) throw std::invalid_argument("squared_singular_values: numerically zero matrix");
  return PositiveSpectrum(nz);
}

MatrixXcd ginibre_matrix(int rows, int cols, RngStream& rng) {
  MatrixXcd a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = rng.complex_normal();
  return a;
}

MatrixXcd haar_unitary(int dim, RngStream& rng) {
  if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be >= 1");
  MatrixXcd a = ginibre_matrix(dim, dim, rng);
  Eigen::HouseholderQR<MatrixXcd> qr(a);
  MatrixXcd q = qr.householderQ();
  MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    double ad = std::abs(d);
    q.col(j) *= (ad > 0.0) ? d / ad : Complex(1.0, 0.0);
  }
  return q;
}

MatrixXcd gue_matrix(int dim, RngStream& rng) {
  MatrixXcd a = ginibre_matrix(dim, dim, rng);
  return 0.5 * (a + a.adjoint());
}

MatrixXcd embed_spectrum(const VectorXd& a, int l) {
  const int n = static_cast<int>(a.size());
  if (n > l) throw std::invalid_argument("embed_spectrum: rank exceeds dimension");
  MatrixXcd x = MatrixXcd::Zero(l, l);
  for (int i = 0; i < n; ++i) x(i, i) = a[i];
  return x;
}

MatrixXcd embed_singular_values(const VectorXd& a_squared, int l, int m) {
  const int n = static_cast<int>(a_squared.size());
  if (n > l || n > m) throw std::invalid_argument("embed_singular_values: rank exceeds dimensions");
  MatrixXcd g = MatrixXcd::Zero(l, m);
  for (int i = 0; i < n; ++i) {
    if (a_squared[i] < 0) throw std::invalid_argument("embed_singular_values: negative entry");
    g(i, i) = std::sqrt(a_squared[i]);
  }
  return g;
}

namespace {

template <class Mat>
ScaledDet det_scaled_impl(Mat a) {
  using Scalar = typename Mat::Scalar;
  const int n = static_cast<int>(a.rows());
  if (n != a.cols()) throw std::invalid_argument("det_scaled: non-square matrix");
  if (n == 0) return {Complex(1.0, 0.0), 0.0};

  double log_scale = 0.0;
  // Pre-scale columns to keep the LU in range.
  for (int j = 0; j < n; ++j) {
    double m = a.col(j).cwiseAbs().maxCoeff();
    if (m == 0.0) return {Complex(0.0, 0.0), 0.0};
    a.col(j) /= m;
    log_scale += std::log(m);
  }
  Eigen::FullPivLU<Mat> lu(a);
  Complex mant = 1.0;
  for (int i = 0; i < n; ++i) {
    Scalar d = lu.matrixLU()(i, i);
    double ad = std::abs(d);
    if (ad == 0.0) return {Complex(0.0, 0.0), 0.0};
    mant *= Complex(d) / ad;
    log_scale += std::log(ad);
  }
  mant *= static_cast<double>(lu.permutationP().determinant()) *
          static_cast<double>(lu.permutationQ().determinant());
  return {mant, log_scale};
}

}  // namespace

ScaledDet det_scaled(MatrixXcd a) { return det_scaled_impl(std::move(a)); }
ScaledDet det_scaled(MatrixXd a) { return det_scaled_impl(std::move(a)); }

}  // namespace polyaprod
